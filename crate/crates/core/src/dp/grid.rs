//! The finite ordered answer domain `{0} ∪ {±(1+α)^a}` for `|a| ≤ ⌈log_{1+α} U⌉`.

use super::DpError;

/// Result of rounding a value onto the grid. `clamped` is set when the value
/// exceeded the grid extreme and was pulled back; callers surface that in
/// their metrics instead of aborting.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rounded {
    pub value: f64,
    pub clamped: bool,
}

/// Sorted, sign-symmetric grid of powers of `(1+α)` together with zero.
#[derive(Debug, Clone, PartialEq)]
pub struct OrderedGrid {
    u_bound: f64,
    alpha: f64,
    max_exp: i32,
    points: Vec<f64>,
}

/// Build the grid for value bound `U > 1` and rounding ratio `α ∈ (0, 1]`.
///
/// The exponent range is `−A ..= A` with `A = ⌈log_{1+α} U⌉`, so the grid has
/// `4A + 3` points and its extreme is the smallest power of `(1+α)` at least
/// `U`.
pub fn build_grid(u_bound: f64, alpha: f64) -> Result<OrderedGrid, DpError> {
    if !(u_bound > 1.0) || !u_bound.is_finite() {
        return Err(DpError::InvalidArgument("U must be a finite real > 1".into()));
    }
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(DpError::InvalidArgument("alpha must lie in (0,1]".into()));
    }
    let raw = u_bound.ln() / (1.0 + alpha).ln();
    // Guard against 1.0000000000004-style float dust before taking the ceiling.
    let max_exp = (raw - 1e-12).ceil().max(1.0) as i32;
    let mut points = Vec::with_capacity(4 * max_exp as usize + 3);
    for a in (-max_exp..=max_exp).rev() {
        points.push(-pow1p(alpha, a));
    }
    points.push(0.0);
    for a in -max_exp..=max_exp {
        points.push(pow1p(alpha, a));
    }
    debug_assert!(points.windows(2).all(|w| w[0] < w[1]));
    Ok(OrderedGrid { u_bound, alpha, max_exp, points })
}

fn pow1p(alpha: f64, a: i32) -> f64 {
    (1.0 + alpha).powi(a)
}

impl OrderedGrid {
    pub fn u_bound(&self) -> f64 {
        self.u_bound
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Largest grid point, `(1+α)^A ≥ U`.
    pub fn extreme(&self) -> f64 {
        *self.points.last().unwrap()
    }

    /// Smallest positive grid point, `(1+α)^{-A}`.
    pub fn min_positive(&self) -> f64 {
        pow1p(self.alpha, -self.max_exp)
    }

    pub fn contains(&self, v: f64) -> bool {
        self.points.binary_search_by(|p| p.partial_cmp(&v).unwrap()).is_ok()
    }

    /// Round `v` up in magnitude to the nearest grid point, preserving sign.
    ///
    /// Zero maps to zero. Magnitudes above the grid extreme clamp to the
    /// extreme and set the `clamped` flag.
    pub fn round(&self, v: f64) -> Rounded {
        if v == 0.0 {
            return Rounded { value: 0.0, clamped: false };
        }
        let mag = v.abs();
        let sign = v.signum();
        if mag > self.extreme() || !mag.is_finite() {
            return Rounded { value: sign * self.extreme(), clamped: true };
        }
        // Smallest power of (1+alpha) with magnitude >= mag.
        let raw = mag.ln() / (1.0 + self.alpha).ln();
        let mut a = (raw - 1e-12).ceil() as i32;
        a = a.clamp(-self.max_exp, self.max_exp);
        let mut p = pow1p(self.alpha, a);
        if p < mag && a < self.max_exp {
            p = pow1p(self.alpha, a + 1);
        }
        Rounded { value: sign * p, clamped: false }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_u2_alpha1_matches_enumeration() {
        let g = build_grid(2.0, 1.0).unwrap();
        assert_eq!(g.points(), &[-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0]);
    }

    #[test]
    fn grid_u1_5_alpha1_has_seven_points() {
        // ceil(log2 1.5) = 1, same exponent range as U = 2.
        let g = build_grid(1.5, 1.0).unwrap();
        assert_eq!(g.len(), 7);
        assert_eq!(g.extreme(), 2.0);
    }

    #[test]
    fn invalid_parameters_rejected() {
        assert!(build_grid(1.0, 1.0).is_err());
        assert!(build_grid(0.5, 1.0).is_err());
        assert!(build_grid(2.0, 0.0).is_err());
        assert!(build_grid(2.0, 1.5).is_err());
    }

    #[test]
    fn round_examples() {
        let g = build_grid(2.0, 1.0).unwrap();
        assert_eq!(g.round(0.0), Rounded { value: 0.0, clamped: false });
        assert_eq!(g.round(0.6), Rounded { value: 1.0, clamped: false });
        assert_eq!(g.round(-0.6), Rounded { value: -1.0, clamped: false });
        assert_eq!(g.round(2.0), Rounded { value: 2.0, clamped: false });
        let r = g.round(5.0);
        assert!(r.clamped);
        assert_eq!(r.value, 2.0);
        let r = g.round(-5.0);
        assert!(r.clamped);
        assert_eq!(r.value, -2.0);
    }

    #[test]
    fn round_below_range_goes_to_min_positive() {
        let g = build_grid(2.0, 1.0).unwrap();
        let r = g.round(1e-9);
        assert!(!r.clamped);
        assert_eq!(r.value, 0.5);
        assert_eq!(g.round(-1e-9).value, -0.5);
    }

    #[test]
    fn rounded_points_are_grid_members() {
        let g = build_grid(100.0, 0.3).unwrap();
        for i in 0..500 {
            let v = -110.0 + 0.44 * i as f64;
            let r = g.round(v);
            assert!(g.contains(r.value), "{v} -> {:?}", r);
        }
    }
}
