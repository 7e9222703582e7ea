use rand_distr::{Distribution, Gamma};

use super::{geometry_for, BoundKind, BoundResult, BoundsError, SystemConfig};
use crate::channel::rng::{run_chunks, RngStream};
use crate::numerics::gamma_interval_mass;

pub const MIN_ORACLE_TRIALS: u64 = 1_000;

/// Running mean / sum of squared deviations, mergeable in a fixed order.
#[derive(Debug, Clone, Copy, Default)]
struct Moments {
    count: u64,
    mean: f64,
    m2: f64,
}

impl Moments {
    fn push(&mut self, x: f64) {
        self.count += 1;
        let d = x - self.mean;
        self.mean += d / self.count as f64;
        self.m2 += d * (x - self.mean);
    }

    fn merge(self, other: Moments) -> Moments {
        if self.count == 0 {
            return other;
        }
        if other.count == 0 {
            return self;
        }
        let count = self.count + other.count;
        let d = other.mean - self.mean;
        let w = other.count as f64 / count as f64;
        Moments { count, mean: self.mean + d * w, m2: self.m2 + other.m2 + d * d * self.count as f64 * w }
    }
}

/// Monte Carlo estimate of the averaged bound: the mean over
/// h ~ Gamma(MNK, 1) of the Gamma(NLK, 1) mass on `[aPh, bPh]`.
///
/// Deterministic in `seed`; `mc_ci` is the 3σ half-width of the mean.
pub fn mc_oracle_lowerbound(cfg: &SystemConfig<f64>, trials: u64, seed: u64) -> Result<BoundResult<f64>, BoundsError> {
    if trials < MIN_ORACLE_TRIALS {
        return Err(BoundsError::InvalidInput(format!(
            "oracle needs at least {MIN_ORACLE_TRIALS} trials, got {trials}"
        )));
    }
    let geometry = geometry_for(cfg)?;
    let n_rx = f64::from(cfg.rx_dims());
    let trace =
        Gamma::new(f64::from(cfg.channel_dims()), 1.0).map_err(|e| BoundsError::InvalidConfig(e.to_string()))?;
    let lo = geometry.a * cfg.power;
    let hi = geometry.b * cfg.power;

    let partials = run_chunks(0, trials, |chunk, len| -> Result<Moments, BoundsError> {
        let mut rng = RngStream::new(seed, chunk).rng();
        let mut acc = Moments::default();
        for _ in 0..len {
            let h = trace.sample(&mut rng);
            acc.push(gamma_interval_mass(n_rx, lo * h, hi * h)?.max(0.0));
        }
        Ok(acc)
    });
    let mut total = Moments::default();
    for part in partials {
        total = total.merge(part?);
    }
    let variance = total.m2 / (total.count - 1) as f64;
    let half_width = 3.0 * (variance / total.count as f64).sqrt();
    Ok(BoundResult {
        kind: BoundKind::McOracle,
        value: total.mean.clamp(0.0, 1.0),
        geometry,
        mc_ci: Some(half_width),
        clamped: false,
    })
}
