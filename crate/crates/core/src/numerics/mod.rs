//! Special functions and quadrature shared by every bound evaluator.
//!
//! Everything here is a pure function of its arguments and generic over
//! [`Real`](crate::Real).

mod gamma;
mod quadrature;

pub(crate) use gamma::log_gamma_unchecked;
pub use gamma::{
    chi_square_cdf, chi_square_sf, gamma_interval_mass, gamma_p, gamma_q, ln_poisson_term, log1pmx, log_gamma,
    MAX_ITERATIONS,
};
pub use quadrature::{integrate, Interval, Tolerance, MAX_SEGMENTS};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NumericsError {
    #[error("{func}: domain error: {detail}")]
    Domain { func: &'static str, detail: String },
    #[error("{func}: no convergence after {iterations} iterations")]
    NonConvergence { func: &'static str, iterations: usize },
    #[error("quadrature budget exhausted after {segments} segments: estimate {estimate:e} ± {error_bound:e}")]
    QuadratureBudget { estimate: f64, error_bound: f64, segments: usize },
    #[error("integrand is not finite at x = {at}")]
    NonFinite { at: f64 },
}

impl NumericsError {
    pub(crate) fn domain(func: &'static str, detail: impl Into<String>) -> Self {
        Self::Domain { func, detail: detail.into() }
    }
}
