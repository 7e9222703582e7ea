use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::beamform::{nearest, principal_gain};
use super::rng::{point_seed, run_chunks, RngStream, CHUNK_TRIALS};
use super::{awgn, ChannelError, ChannelRealization, Constellation};
use crate::SystemConfig;

/// z-score of a two-sided 95% normal interval.
const Z95: f64 = 1.959_963_984_540_054;

/// Monte Carlo symbol error rate with a binomial 95% half-width.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SerEstimate {
    pub errors: u64,
    pub trials: u64,
    pub ser: f64,
    pub ci95: f64,
    pub seed: u64,
}

impl SerEstimate {
    /// Normal-approximation interval; with no errors the rule-of-three
    /// bound 3/n stands in for the degenerate zero width.
    pub fn from_counts(errors: u64, trials: u64, seed: u64) -> Self {
        let n = trials as f64;
        let ser = errors as f64 / n;
        let ci95 = if errors == 0 { 3.0 / n } else { Z95 * (ser * (1.0 - ser) / n).sqrt() };
        Self { errors, trials, ser, ci95, seed }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NoiseMode {
    Awgn,
    /// Noise forced to zero; used to check the detector.
    Silent,
}

/// How many trials to run for one SNR point.
///
/// `base_trials` always run. While fewer than `min_errors` errors have been
/// seen the run is extended, up to `max_trials`, unless even an optimistic
/// projection says the target cannot be reached within the cap.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SerPolicy {
    pub base_trials: u64,
    pub min_errors: u64,
    pub max_trials: u64,
    pub noise: NoiseMode,
}

impl SerPolicy {
    pub fn fixed(trials: u64) -> Self {
        Self { base_trials: trials, min_errors: 0, max_trials: trials, noise: NoiseMode::Awgn }
    }

    pub fn adaptive(base_trials: u64, min_errors: u64, max_trials: u64) -> Self {
        Self { base_trials, min_errors, max_trials: max_trials.max(base_trials), noise: NoiseMode::Awgn }
    }
}

fn check_setup(cfg: &SystemConfig, constellation: &Constellation) -> Result<(), ChannelError> {
    cfg.validate()?;
    if cfg.blocks != 1 || cfg.block_len != 1 {
        return Err(ChannelError::Unsupported(format!(
            "the SVD simulator covers K = L = 1 only (got K={} L={})",
            cfg.blocks, cfg.block_len
        )));
    }
    if f64::from(constellation.bits_per_symbol) != cfg.rate {
        return Err(ChannelError::RateMismatch { bits: constellation.bits_per_symbol, rate: cfg.rate });
    }
    if constellation.is_empty() {
        return Err(ChannelError::InvalidInput("empty constellation".into()));
    }
    Ok(())
}

/// Symbol errors in `len` trials drawn from stream `chunk`.
fn count_chunk(cfg: &SystemConfig, points: &[Complex64], noise: NoiseMode, seed: u64, chunk: u64, len: u64) -> u64 {
    let mut rng = RngStream::new(seed, chunk).rng();
    let mut channel = ChannelRealization::zeros(cfg.tx as usize, cfg.rx as usize, 1);
    let amp_scale = cfg.power.sqrt();
    let mut errors = 0;
    for _ in 0..len {
        channel.resample(&mut rng);
        let sent = rng.random_range(0..points.len());
        let amplitude = amp_scale * principal_gain(&channel.blocks[0]);
        let mut y = points[sent] * amplitude;
        if noise == NoiseMode::Awgn {
            y += awgn(&mut rng);
        }
        if nearest(y, amplitude, points) != sent {
            errors += 1;
        }
    }
    errors
}

/// Incremental error tally whose result for `n` trials equals a single
/// run of `n` trials.
struct Tally<'a> {
    cfg: &'a SystemConfig,
    points: &'a [Complex64],
    noise: NoiseMode,
    seed: u64,
    full_chunks: u64,
    full_errors: u64,
}

impl Tally<'_> {
    fn errors_for(&mut self, trials: u64) -> u64 {
        let full = trials / CHUNK_TRIALS;
        let rem = trials % CHUNK_TRIALS;
        if full > self.full_chunks {
            let span = (full - self.full_chunks) * CHUNK_TRIALS;
            let (cfg, points, noise, seed) = (self.cfg, self.points, self.noise, self.seed);
            let counts =
                run_chunks(self.full_chunks, span, |chunk, len| count_chunk(cfg, points, noise, seed, chunk, len));
            self.full_errors += counts.iter().sum::<u64>();
            self.full_chunks = full;
        }
        let partial = if rem > 0 { count_chunk(self.cfg, self.points, self.noise, self.seed, full, rem) } else { 0 };
        self.full_errors + partial
    }
}

/// Uncoded SVD-beamforming SER at the configuration's power, `trials`
/// trials, deterministic in `seed` and independent of the worker count.
pub fn estimate_ser(
    cfg: &SystemConfig,
    constellation: &Constellation,
    trials: u64,
    seed: u64,
) -> Result<SerEstimate, ChannelError> {
    estimate_ser_with(cfg, constellation, SerPolicy::fixed(trials), seed)
}

pub fn estimate_ser_with(
    cfg: &SystemConfig,
    constellation: &Constellation,
    policy: SerPolicy,
    seed: u64,
) -> Result<SerEstimate, ChannelError> {
    check_setup(cfg, constellation)?;
    if policy.base_trials == 0 {
        return Err(ChannelError::InvalidInput("trials must be ≥ 1".into()));
    }
    let mut tally =
        Tally { cfg, points: &constellation.points, noise: policy.noise, seed, full_chunks: 0, full_errors: 0 };
    let mut trials = policy.base_trials;
    let mut errors = tally.errors_for(trials);
    while errors < policy.min_errors && trials < policy.max_trials {
        // optimistic rate (errors + 1) / trials gives the fewest trials that
        // could reach the target
        let needed = (policy.min_errors as f64 * trials as f64 / (errors + 1) as f64).ceil();
        if needed > policy.max_trials as f64 {
            break;
        }
        let next = ((1.1 * needed) as u64).max(trials + trials / 4).min(policy.max_trials);
        trials = next;
        errors = tally.errors_for(trials);
    }
    Ok(SerEstimate::from_counts(errors, trials, seed))
}

/// Storage for finished sweep points so an interrupted sweep can resume.
pub trait PointCache {
    fn load(&self, snr_db: f64) -> Option<SerEstimate>;
    fn store(&self, snr_db: f64, estimate: &SerEstimate);
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub snr_db: f64,
    pub estimate: SerEstimate,
}

/// SER at each SNR of `grid_db` (ascending).
///
/// Each point runs on its own seed derived from `(seed, snr_db)`. Once a point
/// ends short of `policy.min_errors`, higher-SNR points run only their base
/// trials: the SER only falls from there.
pub fn ser_sweep(
    cfg: &SystemConfig,
    constellation: &Constellation,
    grid_db: &[f64],
    policy: SerPolicy,
    seed: u64,
    cache: Option<&dyn PointCache>,
    mut progress: impl FnMut(&SweepPoint),
) -> Result<Vec<SweepPoint>, ChannelError> {
    let mut out = Vec::with_capacity(grid_db.len());
    let mut extend = true;
    for &snr_db in grid_db {
        let point_policy = if extend { policy } else { SerPolicy { max_trials: policy.base_trials, ..policy } };
        let estimate = match cache.and_then(|c| c.load(snr_db)) {
            Some(hit) => hit,
            None => {
                let est =
                    estimate_ser_with(&cfg.at_snr_db(snr_db), constellation, point_policy, point_seed(seed, snr_db))?;
                if let Some(c) = cache {
                    c.store(snr_db, &est);
                }
                est
            }
        };
        if estimate.errors < policy.min_errors {
            extend = false;
        }
        let point = SweepPoint { snr_db, estimate };
        progress(&point);
        out.push(point);
    }
    Ok(out)
}
