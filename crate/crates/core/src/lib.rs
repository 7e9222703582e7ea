//! Sphere-packing lower bounds on the codeword error probability of MIMO
//! block-fading links under short-term power, rate and delay constraints,
//! plus a Monte Carlo simulator of SVD beamforming to check them against.
//!
//! The analytic side ([`numerics`], [`bounds`]) is generic over the scalar
//! type through [`Real`]; the aliases below fix it to `f64`, which is what the
//! simulator and the CLI use.

// `!(x > 0)` is used on purpose to reject NaN along with non-positive values.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod bounds;
pub mod channel;
pub mod curve;
pub mod numerics;
mod scalar;

pub use scalar::Real;

pub type SystemConfig = bounds::SystemConfig<f64>;
pub type SphereGeometry = bounds::SphereGeometry<f64>;
pub type BoundResult = bounds::BoundResult<f64>;
pub type Interval = numerics::Interval<f64>;
pub type Tolerance = numerics::Tolerance<f64>;

pub type SystemConfig32 = bounds::SystemConfig<f32>;
pub type BoundResult32 = bounds::BoundResult<f32>;

pub use curve::{Curve, CurveKind, CurvePoint};
