use stbc_core::bounds::*;
use stbc_core::SystemConfig;
fn main() {
    let t = std::time::Instant::now();
    let mut worst: f64 = 0.0;
    for m in 1..=2 {
        for n in 1..=2 {
            for k in 1..=2 {
                for l in 1..=2 {
                    for r in [1.0, 2.0, 3.0] {
                        for p in [1.0, 10.0, 100.0] {
                            let c = SystemConfig::new(m, n, k, l, r, p).unwrap();
                            let i = integral_lowerbound(&c).unwrap();
                            let o = mc_oracle_lowerbound(&c, 1_000_000, 7).unwrap();
                            let z = (i.value - o.value).abs() / o.mc_ci.unwrap().max(1e-300);
                            let b1 = bound1(&c).unwrap().value;
                            let b2 = bound2(&c).unwrap().value;
                            if b1 > i.value || b2 > i.value * (1.0 + 1e-9) {
                                println!("order viol {m}{n}{k}{l} {r} {p}: {b1} {b2} {}", i.value);
                            }
                            if z > 1.0 {
                                println!(
                                    "{m}{n}{k}{l} R={r} P={p}: int={:e} mc={:e} ci={:e} z={z}",
                                    i.value,
                                    o.value,
                                    o.mc_ci.unwrap()
                                );
                            }
                            worst = worst.max(z);
                        }
                    }
                }
            }
        }
    }
    println!("worst {worst} in {:.1}s", t.elapsed().as_secs_f64());
}
