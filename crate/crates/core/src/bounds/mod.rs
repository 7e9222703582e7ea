//! Sphere-packing lower bounds on the codeword error probability P_E.
//!
//! Notation used throughout: `n_rx = N·L·K` is the complex dimension of the
//! receive space and `n_ch = M·N·K` the number of fading coefficients, so
//! tr(HH*) ~ Gamma(n_ch, 1). For a rate R the packing and noise spheres meet
//! the received energy at the fixed multiples `a·P·h` and `b·P·h` of the
//! channel trace h.

mod analytic;
mod diversity;
mod oracle;

pub use analytic::{
    bound1, bound2, conditional_lowerbound, geometry_for, integral_lowerbound, integral_lowerbound_with,
};
pub use diversity::diversity_slope;
pub use oracle::{mc_oracle_lowerbound, MIN_ORACLE_TRIALS};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::numerics::NumericsError;
use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BoundsError {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("need at least {needed} points in the window, found {found}")]
    InsufficientPoints { found: usize, needed: usize },
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

/// One experiment: M×N antennas, K fading blocks of L channel uses, rate R
/// bits per channel use and average power P (noise variance 1, so SNR = P).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SystemConfig<T> {
    #[serde(rename = "M")]
    pub tx: u32,
    #[serde(rename = "N")]
    pub rx: u32,
    #[serde(rename = "K")]
    pub blocks: u32,
    #[serde(rename = "L")]
    pub block_len: u32,
    #[serde(rename = "R")]
    pub rate: T,
    #[serde(rename = "P")]
    pub power: T,
}

impl<T: Real> SystemConfig<T> {
    pub fn new(tx: u32, rx: u32, blocks: u32, block_len: u32, rate: T, power: T) -> Result<Self, BoundsError> {
        let cfg = Self { tx, rx, blocks, block_len, rate, power };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), BoundsError> {
        if self.tx == 0 || self.rx == 0 || self.blocks == 0 || self.block_len == 0 {
            return Err(BoundsError::InvalidConfig(format!(
                "M, N, K, L must all be ≥ 1 (got M={} N={} K={} L={})",
                self.tx, self.rx, self.blocks, self.block_len
            )));
        }
        if !(self.rate > T::zero()) || !self.rate.is_finite() {
            return Err(BoundsError::InvalidConfig(format!("rate R = {} must be positive", self.rate)));
        }
        if !(self.power > T::zero()) || !self.power.is_finite() {
            return Err(BoundsError::InvalidConfig(format!("power P = {} must be positive", self.power)));
        }
        Ok(())
    }

    pub fn with_power(self, power: T) -> Self {
        Self { power, ..self }
    }

    /// Same configuration at `snr_db` (P = 10^(snr_db/10)).
    pub fn at_snr_db(self, snr_db: T) -> Self {
        self.with_power(T::lit(10.0).powf(snr_db / T::lit(10.0)))
    }

    pub fn snr_db(&self) -> T {
        T::lit(10.0) * self.power.log10()
    }

    /// N·L·K, the receive-space dimension.
    pub fn rx_dims(&self) -> u32 {
        self.rx * self.block_len * self.blocks
    }

    /// M·N·K, the diversity ceiling.
    pub fn channel_dims(&self) -> u32 {
        self.tx * self.rx * self.blocks
    }
}

/// Sphere geometry of one configuration.
///
/// `a` and `b` are the integration limits of the averaged bound; `delta` is
/// the noise-sphere parameter per unit of tr(HH*); `r_o_sq` is only set on
/// conditional results, where the channel trace is known.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SphereGeometry<T> {
    pub a: T,
    pub b: T,
    pub delta: T,
    pub r_o_sq: Option<T>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    Conditional,
    Integral,
    Bound1,
    Bound2,
    McOracle,
}

impl BoundKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            BoundKind::Conditional => "conditional",
            BoundKind::Integral => "integral",
            BoundKind::Bound1 => "bound1",
            BoundKind::Bound2 => "bound2",
            BoundKind::McOracle => "mc_oracle",
        }
    }
}

impl std::fmt::Display for BoundKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A lower bound on P_E together with the geometry that produced it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundResult<T> {
    pub kind: BoundKind,
    pub value: T,
    pub geometry: SphereGeometry<T>,
    /// 3σ half-width of the Monte Carlo mean (oracle only).
    pub mc_ci: Option<T>,
    /// Set when a slightly negative round-off result was clamped to 0.
    pub clamped: bool,
}
