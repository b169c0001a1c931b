//! Private median over a finite ordered grid.
//!
//! Implemented as the exponential mechanism with utility
//! `u(x) = −max(0, s/2 − #{v ≤ x}, s/2 − #{v ≥ x})`, i.e. minus the rank
//! distance of `x` from the median interval of the sample. The utility has
//! sensitivity 1 under changing one sample row, so weighting grid points by
//! `exp(ε·u/2)` gives an `(ε, 0)`-DP mechanism whose output, with probability
//! at least `1 − β`, has at least `|S|/2 − Γ` sample elements on each side,
//! where `Γ = ⌈(2/ε)·ln(|X|/β)⌉`.

use super::{DpError, OrderedGrid};
use crate::rng::Rng;
use rand::Rng as _;

/// Parameters of one private-median invocation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MedianConfig {
    pub eps_med: f64,
    pub beta: f64,
    /// Rank-error bound `Γ`; the mechanism violates it with probability ≤ β.
    pub gamma_rank: u64,
}

impl MedianConfig {
    /// Derive `Γ = ⌈(2/ε)·ln(|X|/β)⌉` for a grid of `grid_len` points.
    pub fn derive(eps_med: f64, beta: f64, grid_len: usize) -> Result<Self, DpError> {
        if !(eps_med > 0.0) {
            return Err(DpError::InvalidArgument("eps_med must be positive".into()));
        }
        if !(beta > 0.0 && beta < 1.0) {
            return Err(DpError::InvalidArgument("beta must lie in (0,1)".into()));
        }
        let gamma = (2.0 / eps_med * (grid_len as f64 / beta).ln()).ceil();
        Ok(Self { eps_med, beta, gamma_rank: gamma as u64 })
    }
}

fn utilities(sample: &[f64], grid: &OrderedGrid) -> Result<Vec<f64>, DpError> {
    if sample.is_empty() {
        return Err(DpError::EmptySample);
    }
    for &v in sample {
        if !grid.contains(v) {
            return Err(DpError::OffGrid(v));
        }
    }
    let mut sorted = sample.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let s = sorted.len() as f64;
    let half = s / 2.0;
    let utils = grid
        .points()
        .iter()
        .map(|&x| {
            let le = sorted.partition_point(|&v| v <= x) as f64;
            let lt = sorted.partition_point(|&v| v < x) as f64;
            let ge = s - lt;
            -(0.0f64.max(half - le).max(half - ge))
        })
        .collect();
    Ok(utils)
}

/// Exact output distribution of the mechanism, indexed like `grid.points()`.
///
/// Used by tests to check the `e^ε` ratio bound pointwise; the sampling path
/// below draws from exactly this distribution.
pub fn private_median_distribution(
    sample: &[f64],
    grid: &OrderedGrid,
    cfg: &MedianConfig,
) -> Result<Vec<f64>, DpError> {
    let utils = utilities(sample, grid)?;
    let weights: Vec<f64> = utils.iter().map(|u| (cfg.eps_med / 2.0 * u).exp()).collect();
    let total: f64 = weights.iter().sum();
    Ok(weights.into_iter().map(|w| w / total).collect())
}

/// Draw the private median of `sample` over `grid`.
pub fn private_median(
    sample: &[f64],
    grid: &OrderedGrid,
    cfg: &MedianConfig,
    rng: &mut Rng,
) -> Result<f64, DpError> {
    let utils = utilities(sample, grid)?;
    let weights: Vec<f64> = utils.iter().map(|u| (cfg.eps_med / 2.0 * u).exp()).collect();
    let total: f64 = weights.iter().sum();
    let mut draw = rng.random::<f64>() * total;
    let mut idx = weights.len() - 1;
    for (i, w) in weights.iter().enumerate() {
        if draw < *w {
            idx = i;
            break;
        }
        draw -= w;
    }
    Ok(grid.points()[idx])
}

/// Rank condition from the median guarantee: at least `|S|/2 − Γ` sample
/// elements are ≥ the output and at least that many are ≤ it.
pub fn rank_condition_holds(sample: &[f64], output: f64, gamma_rank: u64) -> bool {
    let s = sample.len() as f64;
    let le = sample.iter().filter(|&&v| v <= output).count() as f64;
    let ge = sample.iter().filter(|&&v| v >= output).count() as f64;
    let bound = s / 2.0 - gamma_rank as f64;
    le >= bound && ge >= bound
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dp::build_grid;
    use crate::rng::rng_from_seed;

    #[test]
    fn rejects_bad_input() {
        let grid = build_grid(2.0, 1.0).unwrap();
        let cfg = MedianConfig::derive(0.5, 0.1, grid.len()).unwrap();
        let mut rng = rng_from_seed(3);
        assert_eq!(
            private_median(&[], &grid, &cfg, &mut rng).unwrap_err(),
            DpError::EmptySample
        );
        assert_eq!(
            private_median(&[0.7], &grid, &cfg, &mut rng).unwrap_err(),
            DpError::OffGrid(0.7)
        );
    }

    #[test]
    fn unanimous_sample_returns_the_value() {
        // s > 2*Gamma copies of 1.0: only x = 1 satisfies both rank
        // conditions, and the mechanism picks it with probability >= 1-beta.
        let grid = build_grid(2.0, 1.0).unwrap();
        let beta = 0.2;
        let cfg = MedianConfig::derive(0.5, beta, grid.len()).unwrap();
        let s = (2 * cfg.gamma_rank + 10) as usize;
        let sample = vec![1.0; s];
        let dist = private_median_distribution(&sample, &grid, &cfg).unwrap();
        let idx = grid.points().iter().position(|&p| p == 1.0).unwrap();
        assert!(dist[idx] >= 1.0 - beta, "P[1.0] = {}", dist[idx]);
    }

    #[test]
    fn derive_validates() {
        assert!(MedianConfig::derive(0.0, 0.1, 7).is_err());
        assert!(MedianConfig::derive(0.5, 0.0, 7).is_err());
        assert!(MedianConfig::derive(0.5, 1.0, 7).is_err());
    }

    #[test]
    fn distribution_matches_sampling_frequencies() {
        let grid = build_grid(2.0, 1.0).unwrap();
        let cfg = MedianConfig { eps_med: 1.0, beta: 0.1, gamma_rank: 4 };
        let sample = [0.5, 0.5, 1.0, 2.0, -1.0];
        let dist = private_median_distribution(&sample, &grid, &cfg).unwrap();
        let mut rng = rng_from_seed(11);
        let trials = 200_000;
        let mut counts = vec![0u64; grid.len()];
        for _ in 0..trials {
            let out = private_median(&sample, &grid, &cfg, &mut rng).unwrap();
            let idx = grid.points().iter().position(|&p| p == out).unwrap();
            counts[idx] += 1;
        }
        for (i, &p) in dist.iter().enumerate() {
            let emp = counts[i] as f64 / trials as f64;
            let sd = (p * (1.0 - p) / trials as f64).sqrt();
            assert!(
                (emp - p).abs() <= 5.0 * sd + 1e-4,
                "point {i}: emp {emp} vs exact {p}"
            );
        }
    }
}
