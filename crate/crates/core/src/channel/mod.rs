//! Monte Carlo simulation of uncoded SVD beamforming over Rayleigh
//! block-fading MIMO channels.
//!
//! Each trial draws an N×M channel with i.i.d. CN(0,1) entries, sends one
//! symbol along the principal right singular vector at power P, combines
//! with the matching left singular vector, adds CN(0,1) noise at the
//! combiner output and detects by minimum distance.

mod beamform;
mod constellation;
pub mod rng;
mod sampling;
mod ser;

pub use beamform::{ml_detect, principal_gain, svd_beamform_transmit, Beamformer};
pub use constellation::{Constellation, ConstellationName};
pub use rng::{derive_seed, point_seed, RngStream, CHUNK_TRIALS};
pub use sampling::{awgn, sample_channel, ChannelRealization};
pub use ser::{estimate_ser, estimate_ser_with, ser_sweep, NoiseMode, PointCache, SerEstimate, SerPolicy, SweepPoint};

use thiserror::Error;

use crate::bounds::BoundsError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ChannelError {
    #[error("constellation carries {bits} bits/symbol but the configuration asks for R = {rate}")]
    RateMismatch { bits: u32, rate: f64 },
    #[error("unsupported configuration: {0}")]
    Unsupported(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error(transparent)]
    Config(#[from] BoundsError),
}
