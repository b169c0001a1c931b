//! Per-piece sampling machinery: approximate degrees, edge ownership, the
//! sampling probability, and geometric-skip subset sampling.

use crate::rng::Rng;
use rand::Rng as _;
use std::collections::BTreeMap;

/// Degree rounded up to the closest power of two, so `d ≤ d̃ ≤ 2d`.
pub fn approx_degree(d: usize) -> usize {
    if d == 0 {
        0
    } else {
        d.next_power_of_two()
    }
}

/// Sampling probability `p̃_u = min{1, (c·ln n / (ε φ²))² · 2 / d̃_u}` with the
/// paper constant `c = 24`.
pub fn piece_sampling_prob(n: usize, eps: f64, phi: f64, deg_tilde: usize) -> f64 {
    piece_sampling_prob_with_const(24.0, n, eps, phi, deg_tilde)
}

pub fn piece_sampling_prob_with_const(
    c: f64,
    n: usize,
    eps: f64,
    phi: f64,
    deg_tilde: usize,
) -> f64 {
    assert!(n >= 2 && eps > 0.0 && phi > 0.0 && deg_tilde >= 1, "parameters must be positive");
    let base = c * (n as f64).ln() / (eps * phi * phi);
    (base * base * 2.0 / deg_tilde as f64).min(1.0)
}

/// Sample each index of `0..n` independently with probability `p`, touching
/// `O(pn + 1)` indices via geometric skip lengths. `touches` counts the
/// random draws actually performed.
pub fn subset_sample(n: usize, p: f64, rng: &mut Rng, touches: &mut u64) -> Vec<usize> {
    assert!((0.0..=1.0).contains(&p), "p must lie in [0,1]");
    if n == 0 || p <= 0.0 {
        return Vec::new();
    }
    if p >= 1.0 {
        *touches += n as u64;
        return (0..n).collect();
    }
    let mut out = Vec::new();
    let log1mp = (-p).ln_1p();
    let mut i: i64 = -1;
    loop {
        // u in (0, 1]; skip = floor(ln u / ln(1-p)) is geometric.
        let u = 1.0 - rng.random::<f64>();
        *touches += 1;
        let skip = (u.ln() / log1mp).floor();
        if !skip.is_finite() || skip >= n as f64 {
            break;
        }
        i += skip as i64 + 1;
        if i >= n as i64 {
            break;
        }
        out.push(i as usize);
    }
    out
}

/// Edge ownership inside one piece: `u` owns `{u,v}` iff
/// `d̃(u) < d̃(v)`, ties broken toward the smaller vertex id. Owned lists are
/// index-addressable so the subset sampler can fetch the k-th owned edge
/// directly.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct OwnershipIndex {
    pub degt: BTreeMap<usize, usize>,
    pub owned: BTreeMap<usize, Vec<(usize, usize)>>,
}

/// Ownership rule given approximate degrees.
pub fn owner_of(u: usize, v: usize, degt_u: usize, degt_v: usize) -> usize {
    if degt_u < degt_v || (degt_u == degt_v && u < v) {
        u
    } else {
        v
    }
}

impl OwnershipIndex {
    /// Build from a piece's unweighted degree counts and edge list.
    pub fn build(deg_count: &BTreeMap<usize, usize>, edges: &[(usize, usize)]) -> Self {
        let degt: BTreeMap<usize, usize> =
            deg_count.iter().map(|(&v, &d)| (v, approx_degree(d))).collect();
        let mut owned: BTreeMap<usize, Vec<(usize, usize)>> =
            deg_count.keys().map(|&v| (v, Vec::new())).collect();
        for &(u, v) in edges {
            let o = owner_of(u, v, degt[&u], degt[&v]);
            owned.get_mut(&o).unwrap().push((u, v));
        }
        Self { degt, owned }
    }

    pub fn kth_owned(&self, u: usize, k: usize) -> Option<(usize, usize)> {
        self.owned.get(&u).and_then(|list| list.get(k).copied())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::rng_from_seed;

    #[test]
    fn approx_degree_brackets() {
        for d in 1..200usize {
            let dt = approx_degree(d);
            assert!(d <= dt && dt <= 2 * d);
            assert!(dt.is_power_of_two());
        }
        assert_eq!(approx_degree(0), 0);
    }

    #[test]
    fn sampling_prob_examples() {
        // Small deg̃ clamps to 1.
        assert_eq!(piece_sampling_prob(16, 0.5, 0.5, 2), 1.0);
        // n=16, eps=0.5, phi=0.5, deg̃ = 2^20: substitute the formula.
        let expect = {
            let base = 24.0 * (16.0f64).ln() / (0.5 * 0.25);
            base * base * 2.0 / (1u64 << 20) as f64
        };
        let got = piece_sampling_prob(16, 0.5, 0.5, 1 << 20);
        assert!((got - expect).abs() < 1e-12);
        assert!(got < 1.0);
        // Monotone nonincreasing in deg̃.
        let mut prev = 2.0;
        for k in 0..30 {
            let p = piece_sampling_prob(16, 0.5, 0.5, 1 << k);
            assert!(p <= prev);
            prev = p;
        }
    }

    #[test]
    fn subset_sample_edges() {
        let mut rng = rng_from_seed(1);
        let mut touches = 0;
        assert!(subset_sample(20, 0.0, &mut rng, &mut touches).is_empty());
        assert_eq!(touches, 0);
        let all = subset_sample(20, 1.0, &mut rng, &mut touches);
        assert_eq!(all, (0..20).collect::<Vec<_>>());
        assert_eq!(touches, 20);
    }

    #[test]
    fn subset_sample_is_sorted_and_in_range() {
        let mut rng = rng_from_seed(2);
        let mut touches = 0;
        for _ in 0..200 {
            let s = subset_sample(37, 0.3, &mut rng, &mut touches);
            assert!(s.windows(2).all(|w| w[0] < w[1]));
            assert!(s.iter().all(|&i| i < 37));
        }
    }

    #[test]
    fn ownership_unique_and_bounded() {
        let edges = vec![(0, 1), (0, 2), (1, 2), (2, 3), (3, 4), (0, 4), (1, 4)];
        let mut deg: BTreeMap<usize, usize> = BTreeMap::new();
        for &(u, v) in &edges {
            *deg.entry(u).or_default() += 1;
            *deg.entry(v).or_default() += 1;
        }
        let idx = OwnershipIndex::build(&deg, &edges);
        let total: usize = idx.owned.values().map(|l| l.len()).sum();
        assert_eq!(total, edges.len());
        for (&v, &d) in &deg {
            let dt = idx.degt[&v];
            assert!(d <= dt && dt <= 2 * d);
        }
        assert_eq!(idx.kth_owned(0, 99), None);
    }
}
