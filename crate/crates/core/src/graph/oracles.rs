//! Exact ground-truth oracles.
//!
//! These are intentionally slow (dense solves, full enumeration); they exist
//! for verification, not performance, and refuse inputs beyond their size
//! guards so misuse is loud.

use super::{Cut, Graph, GraphError};
use nalgebra::DMatrix;
use std::cmp::Reverse;
use std::collections::BinaryHeap;

/// Total weight crossing the cut, `δ_G(S)`.
pub fn cut_weight(g: &Graph, cut: &Cut) -> Result<f64, GraphError> {
    cut.validate(g.n())?;
    let mask = cut.mask(g.n());
    let mut total = 0.0;
    for (u, v, w) in g.edges() {
        if mask[u] != mask[v] {
            total += w;
        }
    }
    Ok(total)
}

/// `vol_G(S) = Σ_{u∈S} deg_G(u)`.
pub fn volume(g: &Graph, cut: &Cut) -> Result<f64, GraphError> {
    cut.validate(g.n())?;
    Ok(cut.side.iter().map(|&u| g.weighted_degree(u)).sum())
}

/// Conductance of one cut: `δ(S) / min{vol(S), vol(V∖S)}`.
pub fn conductance_of_cut(g: &Graph, cut: &Cut) -> Result<f64, GraphError> {
    let delta = cut_weight(g, cut)?;
    let vol_s = volume(g, cut)?;
    let vol_rest = 2.0 * g.total_weight() - vol_s;
    let denom = vol_s.min(vol_rest);
    if denom <= 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(delta / denom)
}

const CONDUCTANCE_EXACT_LIMIT: usize = 20;

/// Exact minimum conductance `Φ(G)` and a minimizing cut, by enumerating all
/// `2^{n-1} - 1` cuts. Requires `n ≤ 20`; disconnected graphs give `Φ = 0`
/// with a component as witness.
pub fn conductance_min(g: &Graph) -> Result<(f64, Cut), GraphError> {
    let n = g.n();
    if n > CONDUCTANCE_EXACT_LIMIT {
        return Err(GraphError::SizeLimit { n, limit: CONDUCTANCE_EXACT_LIMIT });
    }
    if n < 2 || g.m() == 0 {
        return Err(GraphError::InvalidArgument("conductance needs n >= 2 and m >= 1".into()));
    }
    let comps = g.components();
    if comps.len() > 1 {
        return Ok((0.0, Cut::new(comps[0].clone())));
    }
    let edges = g.edges();
    let degs: Vec<f64> = (0..n).map(|u| g.weighted_degree(u)).collect();
    let vol_total: f64 = degs.iter().sum();
    let mut best = f64::INFINITY;
    let mut best_mask = 1usize;
    // Vertex n-1 always on the complement side, so each cut appears once.
    for mask in 1usize..(1 << (n - 1)) {
        let mut delta = 0.0;
        for &(u, v, w) in &edges {
            let bu = u < n - 1 && (mask >> u) & 1 == 1;
            let bv = v < n - 1 && (mask >> v) & 1 == 1;
            if bu != bv {
                delta += w;
            }
        }
        let mut vol_s = 0.0;
        for (u, d) in degs.iter().enumerate().take(n - 1) {
            if (mask >> u) & 1 == 1 {
                vol_s += d;
            }
        }
        let denom = vol_s.min(vol_total - vol_s);
        if denom <= 0.0 {
            continue;
        }
        let phi = delta / denom;
        if phi < best {
            best = phi;
            best_mask = mask;
        }
    }
    let side: Vec<usize> = (0..n - 1).filter(|&u| (best_mask >> u) & 1 == 1).collect();
    Ok((best, Cut::new(side)))
}

const MIN_CUT_LIMIT: usize = 400;

/// Exact global minimum cut value and a witness side (Stoer–Wagner).
///
/// Disconnected graphs return `0` with one component as the (empty-crossing)
/// witness.
pub fn min_cut_exact(g: &Graph) -> Result<(f64, Cut), GraphError> {
    let n = g.n();
    if n > MIN_CUT_LIMIT {
        return Err(GraphError::SizeLimit { n, limit: MIN_CUT_LIMIT });
    }
    if n < 2 {
        return Err(GraphError::InvalidArgument("min cut needs n >= 2".into()));
    }
    // Dense weight matrix over supernodes; groups track merged originals.
    // Flat arrays keep the O(n³) inner loops tight. Disconnected graphs fall
    // out naturally as a zero cut-of-phase.
    let mut w = vec![0.0f64; n * n];
    for u in 0..n {
        for (v, wt) in g.neighbors(u) {
            w[u * n + v] = wt;
        }
    }
    let mut groups: Vec<Vec<usize>> = (0..n).map(|v| vec![v]).collect();
    let mut active: Vec<usize> = (0..n).collect();
    let mut in_a = vec![0.0f64; n];
    let mut added = vec![false; n];
    let mut best = f64::INFINITY;
    let mut best_side: Vec<usize> = Vec::new();
    while active.len() > 1 {
        // Maximum adjacency order starting from active[0].
        let start = active[0];
        for &v in &active {
            in_a[v] = w[start * n + v];
            added[v] = false;
        }
        added[start] = true;
        let (mut s, mut t) = (start, start);
        for _ in 1..active.len() {
            let mut next = usize::MAX;
            let mut next_w = f64::NEG_INFINITY;
            for &v in &active {
                if !added[v] && in_a[v] > next_w {
                    next_w = in_a[v];
                    next = v;
                }
            }
            added[next] = true;
            let row = next * n;
            for &v in &active {
                if !added[v] {
                    in_a[v] += w[row + v];
                }
            }
            s = t;
            t = next;
        }
        let cut_of_phase = in_a[t];
        if cut_of_phase < best {
            best = cut_of_phase;
            best_side = groups[t].clone();
        }
        // Merge t into s.
        for &v in &active {
            if v != s && v != t {
                w[s * n + v] += w[t * n + v];
                w[v * n + s] = w[s * n + v];
            }
        }
        let moved = std::mem::take(&mut groups[t]);
        groups[s].extend(moved);
        active.retain(|&v| v != t);
    }
    Ok((best, Cut::new(best_side)))
}

/// Laplacian quadratic form `xᵀ L_G x = Σ_{(u,v)∈E} w(u,v) (x_u − x_v)²`.
pub fn quadratic_form(g: &Graph, x: &[f64]) -> Result<f64, GraphError> {
    if x.len() != g.n() {
        return Err(GraphError::InvalidArgument(format!(
            "vector length {} does not match n={}",
            x.len(),
            g.n()
        )));
    }
    Ok(g.edges().iter().map(|&(u, v, w)| w * (x[u] - x[v]) * (x[u] - x[v])).sum())
}

const RESISTANCE_LIMIT: usize = 500;

/// Effective resistance `R_G(u,v) = (e_u − e_v)ᵀ L⁺ (e_u − e_v)` via a dense
/// grounded-Laplacian solve over the component containing both endpoints.
pub fn effective_resistance_exact(g: &Graph, u: usize, v: usize) -> Result<f64, GraphError> {
    if u >= g.n() || v >= g.n() {
        return Err(GraphError::InvalidArgument("endpoint out of range".into()));
    }
    if g.n() > RESISTANCE_LIMIT {
        return Err(GraphError::SizeLimit { n: g.n(), limit: RESISTANCE_LIMIT });
    }
    if u == v {
        return Ok(0.0);
    }
    let comp = g
        .components()
        .into_iter()
        .find(|c| c.binary_search(&u).is_ok())
        .expect("vertex must be in some component");
    if comp.binary_search(&v).is_err() {
        return Err(GraphError::InfiniteResistance(u, v));
    }
    let k = comp.len();
    let index: std::collections::BTreeMap<usize, usize> =
        comp.iter().enumerate().map(|(i, &vv)| (vv, i)).collect();
    // Ground the last component vertex: solve over the first k-1 coordinates.
    let dim = k - 1;
    let mut l = DMatrix::<f64>::zeros(dim, dim);
    for &a in &comp {
        let ia = index[&a];
        for (b, wt) in g.neighbors(a) {
            let ib = index[&b];
            if ia < dim {
                l[(ia, ia)] += wt;
                if ib < dim {
                    l[(ia, ib)] -= wt;
                }
            }
        }
    }
    let mut b = nalgebra::DVector::<f64>::zeros(dim);
    let iu = index[&u];
    let iv = index[&v];
    if iu < dim {
        b[iu] = 1.0;
    }
    if iv < dim {
        b[iv] = -1.0;
    }
    let x = l
        .lu()
        .solve(&b)
        .ok_or_else(|| GraphError::InvalidArgument("singular grounded Laplacian".into()))?;
    let pu = if iu < dim { x[iu] } else { 0.0 };
    let pv = if iv < dim { x[iv] } else { 0.0 };
    Ok(pu - pv)
}

#[derive(PartialEq)]
struct MinF64(f64);

impl Eq for MinF64 {}

impl PartialOrd for MinF64 {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for MinF64 {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.total_cmp(&other.0)
    }
}

/// Single-pair shortest-path distance (Dijkstra); `∞` when unreachable.
pub fn distance_exact(g: &Graph, s: usize, t: usize) -> f64 {
    if s == t {
        return 0.0;
    }
    let mut dist = vec![f64::INFINITY; g.n()];
    dist[s] = 0.0;
    let mut heap = BinaryHeap::new();
    heap.push(Reverse((MinF64(0.0), s)));
    while let Some(Reverse((MinF64(d), u))) = heap.pop() {
        if d > dist[u] {
            continue;
        }
        if u == t {
            return d;
        }
        for (v, w) in g.neighbors(u) {
            let nd = d + w;
            if nd < dist[v] {
                dist[v] = nd;
                heap.push(Reverse((MinF64(nd), v)));
            }
        }
    }
    f64::INFINITY
}

/// All distances from `s` (used by the landmark estimator).
pub fn sssp(g: &Graph, s: usize) -> Vec<f64> {
    let mut dist = vec![f64::INFINITY; g.n()];
    dist[s] = 0.0;
    let mut heap = BinaryHeap::new();
    heap.push(Reverse((MinF64(0.0), s)));
    while let Some(Reverse((MinF64(d), u))) = heap.pop() {
        if d > dist[u] {
            continue;
        }
        for (v, w) in g.neighbors(u) {
            let nd = d + w;
            if nd < dist[v] {
                dist[v] = nd;
                heap.push(Reverse((MinF64(nd), v)));
            }
        }
    }
    dist
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::GraphUpdate;

    fn complete(n: usize) -> Graph {
        let mut g = Graph::new(n);
        for u in 0..n {
            for v in u + 1..n {
                g.insert_edge_f64(u, v, 1.0).unwrap();
            }
        }
        g
    }

    fn cycle(n: usize) -> Graph {
        let mut g = Graph::new(n);
        for u in 0..n {
            g.insert_edge_f64(u, (u + 1) % n, 1.0).unwrap();
        }
        g
    }

    fn path(n: usize) -> Graph {
        let mut g = Graph::new(n);
        for u in 0..n - 1 {
            g.insert_edge_f64(u, u + 1, 1.0).unwrap();
        }
        g
    }

    #[test]
    fn k4_cut_and_volume() {
        let g = complete(4);
        let cut = Cut::new(vec![0]);
        assert_eq!(cut_weight(&g, &cut).unwrap(), 3.0);
        assert_eq!(volume(&g, &cut).unwrap(), 3.0);
    }

    #[test]
    fn c6_three_consecutive() {
        let g = cycle(6);
        let cut = Cut::new(vec![0, 1, 2]);
        assert_eq!(cut_weight(&g, &cut).unwrap(), 2.0);
    }

    #[test]
    fn cut_validation() {
        let g = complete(4);
        assert!(cut_weight(&g, &Cut::new(vec![])).is_err());
        assert!(cut_weight(&g, &Cut::new(vec![0, 1, 2, 3])).is_err());
    }

    #[test]
    fn p4_conductance_is_one_third() {
        let (phi, cut) = conductance_min(&path(4)).unwrap();
        assert!((phi - 1.0 / 3.0).abs() < 1e-12);
        // S = {a, b}: delta 1, vol 3.
        assert_eq!(cut.side.len(), 2);
    }

    #[test]
    fn k4_conductance_two_thirds() {
        let (phi, _) = conductance_min(&complete(4)).unwrap();
        assert!((phi - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn single_edge_conductance_one() {
        let mut g = Graph::new(2);
        g.insert_edge_f64(0, 1, 1.0).unwrap();
        let (phi, _) = conductance_min(&g).unwrap();
        assert_eq!(phi, 1.0);
    }

    #[test]
    fn conductance_size_guard() {
        let g = complete(21);
        assert!(matches!(conductance_min(&g), Err(GraphError::SizeLimit { .. })));
    }

    #[test]
    fn cycle_min_cut_is_two_and_k4_three() {
        for n in [4, 7, 10] {
            let (w, _) = min_cut_exact(&cycle(n)).unwrap();
            assert_eq!(w, 2.0);
        }
        let (w, cut) = min_cut_exact(&complete(4)).unwrap();
        assert_eq!(w, 3.0);
        assert!(cut.side.len() == 1 || cut.side.len() == 3);
    }

    #[test]
    fn disconnected_min_cut_zero() {
        let mut g = Graph::new(4);
        g.insert_edge_f64(0, 1, 1.0).unwrap();
        g.insert_edge_f64(2, 3, 1.0).unwrap();
        let (w, cut) = min_cut_exact(&g).unwrap();
        assert_eq!(w, 0.0);
        assert_eq!(cut_weight(&g, &cut).unwrap(), 0.0);
    }

    #[test]
    fn path_and_cycle_resistance() {
        let g = path(5);
        assert!((effective_resistance_exact(&g, 0, 4).unwrap() - 4.0).abs() < 1e-9);
        assert!((effective_resistance_exact(&g, 1, 3).unwrap() - 2.0).abs() < 1e-9);
        let c = cycle(8);
        // Adjacent on C_n: 1 || (n-1) = (n-1)/n.
        assert!((effective_resistance_exact(&c, 0, 1).unwrap() - 7.0 / 8.0).abs() < 1e-9);
    }

    #[test]
    fn resistance_errors() {
        let mut g = Graph::new(4);
        g.insert_edge_f64(0, 1, 1.0).unwrap();
        g.insert_edge_f64(2, 3, 1.0).unwrap();
        assert_eq!(
            effective_resistance_exact(&g, 0, 2).unwrap_err(),
            GraphError::InfiniteResistance(0, 2)
        );
        assert_eq!(effective_resistance_exact(&g, 1, 1).unwrap(), 0.0);
    }

    #[test]
    fn quadratic_form_matches_cut_weight_on_indicators() {
        let g = complete(5);
        let cut = Cut::new(vec![0, 2]);
        let mask = cut.mask(5);
        let x: Vec<f64> = mask.iter().map(|&b| if b { 1.0 } else { 0.0 }).collect();
        assert_eq!(quadratic_form(&g, &x).unwrap(), cut_weight(&g, &cut).unwrap());
        assert!(quadratic_form(&g, &[0.0; 3]).is_err());
    }

    #[test]
    fn distances() {
        let g = path(6);
        assert_eq!(distance_exact(&g, 0, 5), 5.0);
        assert_eq!(distance_exact(&g, 3, 3), 0.0);
        let mut g = Graph::new(3);
        g.apply_update(&GraphUpdate::Insert { u: 0, v: 1, w: 2 }).unwrap();
        assert_eq!(distance_exact(&g, 0, 2), f64::INFINITY);
    }
}
