#![allow(dead_code)]

use std::collections::HashMap;

/// Reference values computed offline at 50 significant digits by
/// `data/oracles.py`.
pub struct Oracles {
    pub zeta_minus_one: Vec<(u32, f64)>,
    /// (n, x / n, P, Q)
    pub gamma_grid: Vec<(f64, f64, f64, f64)>,
    pub misc: HashMap<String, f64>,
}

pub fn load() -> Oracles {
    let text = include_str!("../data/oracles.txt");
    let mut section = "";
    let mut out = Oracles { zeta_minus_one: Vec::new(), gamma_grid: Vec::new(), misc: HashMap::new() };
    for line in text.lines() {
        if let Some(head) = line.strip_prefix("# ") {
            section = if head.starts_with("zeta") {
                "zeta"
            } else if head.starts_with("gamma grid") {
                "grid"
            } else {
                "misc"
            };
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        match section {
            "zeta" => out.zeta_minus_one.push((fields[0].parse().unwrap(), fields[1].parse().unwrap())),
            "grid" => {
                let v: Vec<f64> = fields.iter().map(|f| f.parse().unwrap()).collect();
                out.gamma_grid.push((v[0], v[1], v[2], v[3]));
            }
            _ => {
                // key is everything but the last number; list values keep only numbers
                let (key, value) = line.rsplit_once(' ').unwrap();
                if let Ok(v) = value.parse::<f64>() {
                    out.misc.insert(key.to_string(), v);
                } else {
                    let (key, list) = line.split_once(' ').unwrap();
                    let nums: Vec<f64> =
                        list.split(['[', ']', ',', '\'']).filter_map(|t| t.trim().parse().ok()).collect();
                    for (i, v) in nums.iter().enumerate() {
                        out.misc.insert(format!("{key}[{i}]"), *v);
                    }
                }
            }
        }
    }
    out
}

impl Oracles {
    pub fn get(&self, key: &str) -> f64 {
        *self.misc.get(key).unwrap_or_else(|| panic!("no oracle value '{key}'"))
    }
}

/// Relative error, with reference values below the f64 range treated as 0.
pub fn rel_err(got: f64, want: f64) -> f64 {
    if want == 0.0 || want.abs() < f64::MIN_POSITIVE {
        if got.abs() < f64::MIN_POSITIVE {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        ((got - want) / want).abs()
    }
}
