//! Differential-privacy primitives.
//!
//! Laplace sampling, k-fold advanced composition, amplification by
//! subsampling, the finite ordered answer grid `{0} ∪ {±(1+α)^a}`, and a
//! private median over that grid implemented as the exponential mechanism.
//! Natural logarithms are used wherever a bound is written with `log`.

mod compose;
mod grid;
mod laplace;
mod median;

pub use compose::{advanced_composition, subsample_epsilon};
pub use grid::{build_grid, OrderedGrid, Rounded};
pub use laplace::laplace_sample;
pub use median::{private_median, private_median_distribution, rank_condition_holds, MedianConfig};

use thiserror::Error;

/// An `(ε, δ)` privacy guarantee.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct PrivacyParams {
    pub epsilon: f64,
    pub delta: f64,
}

impl PrivacyParams {
    pub fn new(epsilon: f64, delta: f64) -> Result<Self, DpError> {
        if !(epsilon > 0.0) {
            return Err(DpError::InvalidArgument("epsilon must be positive".into()));
        }
        if !(0.0..=1.0).contains(&delta) {
            return Err(DpError::InvalidArgument("delta must lie in [0,1]".into()));
        }
        Ok(Self { epsilon, delta })
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum DpError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("sample value {0} is not a grid point")]
    OffGrid(f64),
    #[error("empty sample")]
    EmptySample,
}
