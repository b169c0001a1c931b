//! Parameter derivation for the copy-farm reduction.
//!
//! Paper-faithful mode pins every derived quantity to the formulas
//! `β = δ_fail / 2T`, `ε_med = 1/2`, `Γ = ⌈(2/ε_med)·ln(|X_med|/β)⌉`,
//! `s = 100·Γ`, `c = ⌈200·6·s·ε_med·√(2T·ln(100/β))⌉`; that algebra makes
//! the whole transcript `(1/100, β/100)`-DP with respect to the copies'
//! random strings, and is asserted as a pure inequality by the acceptance
//! suite. Experiments run in scaled mode: the multipliers shrink (or `c`
//! and `s` are pinned outright), the privacy algebra no longer applies, and
//! each experiment states its weaker empirical target explicitly.

use crate::dp::{build_grid, DpError, MedianConfig, OrderedGrid};

/// Constant multipliers for the derived parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WrapperConstants {
    pub eps_med: f64,
    /// `s = ⌈s_mult · Γ⌉`; paper value 100.
    pub s_mult: f64,
    /// `c = ⌈c_mult · 6 · s · ε_med · √(2T ln(100/β))⌉`; paper value 200.
    pub c_mult: f64,
    /// Desk-scale overrides; when set they win over the multipliers.
    pub s_override: Option<usize>,
    pub c_override: Option<usize>,
}

impl WrapperConstants {
    pub fn paper() -> Self {
        Self { eps_med: 0.5, s_mult: 100.0, c_mult: 200.0, s_override: None, c_override: None }
    }

    /// Desk-scale experiment constants: `c` and `s` pinned directly. The
    /// paper's scaled multipliers still give copy farms in the thousands, so
    /// experiments pin counts that keep the empirical failure target while
    /// staying runnable.
    pub fn pinned(c: usize, s: usize) -> Self {
        Self {
            eps_med: 0.5,
            s_mult: 100.0,
            c_mult: 200.0,
            s_override: Some(s),
            c_override: Some(c),
        }
    }

    /// Pinned counts with a scaled median privacy parameter: a larger
    /// `ε_med` buys a sharper exponential-mechanism tail at small `s`.
    pub fn pinned_with_eps(c: usize, s: usize, eps_med: f64) -> Self {
        Self { eps_med, ..Self::pinned(c, s) }
    }
}

/// Fully derived wrapper parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct WrapperParams {
    pub t_phase: u64,
    pub u_bound: f64,
    pub alpha: f64,
    pub delta_fail: f64,
    pub beta: f64,
    pub eps_med: f64,
    pub grid: OrderedGrid,
    pub gamma_rank: u64,
    pub s: usize,
    pub c: usize,
    /// Restart automatically when the phase budget is spent instead of
    /// erroring on the next query.
    pub auto_restart: bool,
}

/// Derive all wrapper parameters from `(T, U, α, δ_fail)` and the constants.
pub fn derive_params(
    t_phase: u64,
    u_bound: f64,
    alpha: f64,
    delta_fail: f64,
    consts: WrapperConstants,
) -> Result<WrapperParams, DpError> {
    if t_phase == 0 {
        return Err(DpError::InvalidArgument("T must be at least 1".into()));
    }
    if !(delta_fail > 0.0 && delta_fail < 1.0) {
        return Err(DpError::InvalidArgument("delta_fail must lie in (0,1)".into()));
    }
    let grid = build_grid(u_bound, alpha)?;
    let beta = delta_fail / (2.0 * t_phase as f64);
    let med = MedianConfig::derive(consts.eps_med, beta, grid.len())?;
    let gamma_rank = med.gamma_rank;
    let s = consts
        .s_override
        .unwrap_or_else(|| (consts.s_mult * gamma_rank as f64).ceil() as usize)
        .max(1);
    let c = consts.c_override.unwrap_or_else(|| {
        (consts.c_mult
            * 6.0
            * s as f64
            * consts.eps_med
            * (2.0 * t_phase as f64 * (100.0 / beta).ln()).sqrt())
        .ceil() as usize
    });
    if s * 2 > c {
        return Err(DpError::InvalidArgument(format!(
            "need s <= c/2 for subsampling amplification (s={s}, c={c})"
        )));
    }
    Ok(WrapperParams {
        t_phase,
        u_bound,
        alpha,
        delta_fail,
        beta,
        eps_med: consts.eps_med,
        grid,
        gamma_rank,
        s,
        c,
        auto_restart: true,
    })
}

impl WrapperParams {
    pub fn median_config(&self) -> MedianConfig {
        MedianConfig { eps_med: self.eps_med, beta: self.beta, gamma_rank: self.gamma_rank }
    }

    /// Per-step transcript privacy after subsampling amplification.
    pub fn per_step_epsilon(&self) -> f64 {
        6.0 * self.s as f64 / self.c as f64 * self.eps_med
    }

    /// The composed `ε'` over one phase at `δ' = β/100`; paper-faithful
    /// configurations keep this at most 1/100.
    pub fn composed_epsilon(&self) -> f64 {
        let e = self.per_step_epsilon();
        let t = self.t_phase as f64;
        (2.0 * t * (100.0 / self.beta).ln()).sqrt() * e + 2.0 * t * e * e
    }
}
