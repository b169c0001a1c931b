//! Small statistics helpers shared by tests and experiments.

use statrs::distribution::{ChiSquared, ContinuousCDF};

/// Upper-tail p-value of a chi-square statistic with `dof` degrees of freedom.
pub fn chi_square_pvalue(stat: f64, dof: f64) -> f64 {
    if dof <= 0.0 {
        return 1.0;
    }
    let dist = ChiSquared::new(dof).expect("dof > 0");
    1.0 - dist.cdf(stat)
}

/// Pearson chi-square statistic for observed counts against expected counts.
/// Cells with expected < `min_expected` are pooled into their neighbor.
pub fn pearson_statistic(observed: &[f64], expected: &[f64], min_expected: f64) -> (f64, f64) {
    assert_eq!(observed.len(), expected.len());
    let mut stat = 0.0;
    let mut cells = 0.0f64;
    let mut obs_acc = 0.0;
    let mut exp_acc = 0.0;
    for i in 0..observed.len() {
        obs_acc += observed[i];
        exp_acc += expected[i];
        if exp_acc >= min_expected || i == observed.len() - 1 {
            if exp_acc > 0.0 {
                stat += (obs_acc - exp_acc) * (obs_acc - exp_acc) / exp_acc;
                cells += 1.0;
            }
            obs_acc = 0.0;
            exp_acc = 0.0;
        }
    }
    (stat, (cells - 1.0).max(1.0))
}

/// Standard deviation of a Bernoulli(p) frequency over `trials` samples.
pub fn binomial_sd(p: f64, trials: u64) -> f64 {
    (p * (1.0 - p) / trials as f64).sqrt()
}
