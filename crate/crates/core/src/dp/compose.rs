//! Composition accounting: k-fold advanced composition and amplification by
//! subsampling.

use super::{DpError, PrivacyParams};

/// k-fold advanced composition of `(ε, δ)`-DP mechanisms.
///
/// Returns `(ε', δ' + kδ)` with `ε' = √(2k·ln(1/δ'))·ε + 2kε²`. Requires
/// `ε ∈ [0, 1]`, `δ ∈ [0, 1]`, `δ' ∈ (0, 1]`.
pub fn advanced_composition(
    k: u64,
    eps: f64,
    delta: f64,
    delta_prime: f64,
) -> Result<PrivacyParams, DpError> {
    if k == 0 {
        return Err(DpError::InvalidArgument("k must be a positive integer".into()));
    }
    if !(0.0..=1.0).contains(&eps) {
        return Err(DpError::InvalidArgument("eps must lie in [0,1]".into()));
    }
    if !(0.0..=1.0).contains(&delta) {
        return Err(DpError::InvalidArgument("delta must lie in [0,1]".into()));
    }
    if !(delta_prime > 0.0 && delta_prime <= 1.0) {
        return Err(DpError::InvalidArgument("delta_prime must lie in (0,1]".into()));
    }
    let kf = k as f64;
    let eps_prime = (2.0 * kf * (1.0 / delta_prime).ln()).sqrt() * eps + 2.0 * kf * eps * eps;
    Ok(PrivacyParams { epsilon: eps_prime, delta: delta_prime + kf * delta })
}

/// Privacy amplification by subsampling `k ≤ n/2` rows with repetition:
/// an ε-DP mechanism run on the subsample is `(6k/n)·ε`-DP.
pub fn subsample_epsilon(eps: f64, k: u64, n: u64) -> Result<f64, DpError> {
    if !(0.0..=1.0).contains(&eps) {
        return Err(DpError::InvalidArgument("eps must lie in [0,1]".into()));
    }
    if k == 0 || n == 0 {
        return Err(DpError::InvalidArgument("k and n must be positive".into()));
    }
    if 2 * k > n {
        return Err(DpError::InvalidArgument(format!(
            "subsampling requires k <= n/2 (got k={k}, n={n})"
        )));
    }
    Ok(6.0 * k as f64 / n as f64 * eps)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn composition_worked_examples() {
        // k=1, delta'=e^-2, eps=0.1, delta=0: eps' = 2*0.1 + 2*0.01 = 0.22.
        let p = advanced_composition(1, 0.1, 0.0, (-2.0f64).exp()).unwrap();
        assert!((p.epsilon - 0.22).abs() < 1e-12);
        assert!((p.delta - (-2.0f64).exp()).abs() < 1e-15);

        // k=2, delta'=e^-2, eps=0.5, delta=0.01: eps' = sqrt(8)*0.5 + 4*0.25
        // = sqrt(2) + 1.
        let p = advanced_composition(2, 0.5, 0.01, (-2.0f64).exp()).unwrap();
        assert!((p.epsilon - (2.0f64.sqrt() + 1.0)).abs() < 1e-12);
        assert!((p.delta - ((-2.0f64).exp() + 0.02)).abs() < 1e-15);
    }

    #[test]
    fn zero_epsilon_composes_to_zero() {
        for k in [1u64, 5, 1000] {
            let p = advanced_composition(k, 0.0, 0.0, 0.5).unwrap();
            assert_eq!(p.epsilon, 0.0);
        }
    }

    #[test]
    fn composition_rejects_out_of_range() {
        assert!(advanced_composition(0, 0.1, 0.0, 0.5).is_err());
        assert!(advanced_composition(1, 1.5, 0.0, 0.5).is_err());
        assert!(advanced_composition(1, -0.1, 0.0, 0.5).is_err());
        assert!(advanced_composition(1, 0.1, 1.5, 0.5).is_err());
        assert!(advanced_composition(1, 0.1, 0.0, 0.0).is_err());
    }

    #[test]
    fn subsample_worked_examples() {
        assert_eq!(subsample_epsilon(1.0, 1, 6).unwrap(), 1.0);
        assert_eq!(subsample_epsilon(0.0, 3, 100).unwrap(), 0.0);
        assert!((subsample_epsilon(0.5, 10, 600).unwrap() - 0.05).abs() < 1e-15);
    }

    #[test]
    fn subsample_requires_half() {
        assert!(subsample_epsilon(1.0, 4, 6).is_err());
        assert_eq!(subsample_epsilon(1.0, 3, 6).unwrap(), 3.0);
    }

    #[test]
    fn pure_functions_are_reproducible() {
        for _ in 0..3 {
            assert_eq!(
                advanced_composition(7, 0.3, 0.001, 0.01).unwrap(),
                advanced_composition(7, 0.3, 0.001, 0.01).unwrap()
            );
            assert_eq!(subsample_epsilon(0.7, 5, 50), subsample_epsilon(0.7, 5, 50));
        }
    }
}
