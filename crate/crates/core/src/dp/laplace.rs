//! Laplace noise by inverse-CDF transform.

use super::DpError;
use crate::rng::Rng;
use rand::Rng as _;

/// Draw from `Laplace(0, scale)`.
///
/// Deterministic given the RNG state; rejects non-positive scales.
pub fn laplace_sample(scale: f64, rng: &mut Rng) -> Result<f64, DpError> {
    if !(scale > 0.0) || !scale.is_finite() {
        return Err(DpError::InvalidArgument("scale must be a positive real".into()));
    }
    // p = 0 would map to -inf; redraw (probability 2^-53 per draw).
    let mut p: f64 = rng.random();
    while p <= 0.0 {
        p = rng.random();
    }
    Ok(if p < 0.5 { scale * (2.0 * p).ln() } else { -scale * (2.0 * (1.0 - p)).ln() })
}
