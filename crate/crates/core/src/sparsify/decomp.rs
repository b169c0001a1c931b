//! Edge-disjoint φ-expander decomposition with a rebuild-based maintenance
//! policy.
//!
//! Build: edges are grouped into power-of-two weight buckets, each bucket is
//! split into connected components, and every component is either certified
//! as a φ-expander (exactly for at most 16 vertices, by a spectral sweep
//! above) or split along the certifying cut and recursed. A single edge has
//! conductance 1, so singleton pieces are always a legal fallback.
//!
//! Maintenance: deletions are applied in place inside the owning piece;
//! insertions become buffered singleton pieces; a piece whose deletions
//! exceed a configured fraction of its build-time size is rebuilt. The
//! output of an update is a list of piece-level changes of the three kinds
//! consumed by the sparsifier, and `cnt` advances by the number of
//! edge-granular changes.

use super::{SparsifyConfig, SparsifyError};
use crate::counters::WorkCounter;
use crate::graph::{conductance_min, Cut, Graph, GraphUpdate};
use serde::Serialize;
use std::collections::BTreeMap;

pub type PieceId = u64;

/// How a piece's expansion was certified.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Certificate {
    /// Exact minimum conductance from full enumeration.
    Exact(f64),
    /// Cheeger-style lower bound `λ̂₂ / 2` from a deterministic power
    /// iteration; heuristic.
    Sweep(f64),
    /// A single edge, conductance exactly 1.
    Singleton,
}

/// One edge-induced subgraph of the decomposition.
#[derive(Debug, Clone, PartialEq)]
pub struct Piece {
    pub id: PieceId,
    adj: BTreeMap<usize, BTreeMap<usize, f64>>,
    m: usize,
    initial_m: usize,
    deletions: usize,
    pub cert: Certificate,
}

impl Piece {
    fn from_edges(id: PieceId, edges: &[(usize, usize, f64)], cert: Certificate) -> Self {
        let mut adj: BTreeMap<usize, BTreeMap<usize, f64>> = BTreeMap::new();
        for &(u, v, w) in edges {
            adj.entry(u).or_default().insert(v, w);
            adj.entry(v).or_default().insert(u, w);
        }
        Self { id, adj, m: edges.len(), initial_m: edges.len(), deletions: 0, cert }
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.m
    }

    pub fn vertices(&self) -> impl Iterator<Item = usize> + '_ {
        self.adj.keys().copied()
    }

    pub fn degree_count(&self, v: usize) -> usize {
        self.adj.get(&v).map_or(0, |a| a.len())
    }

    pub fn degree_counts(&self) -> BTreeMap<usize, usize> {
        self.adj.iter().map(|(&v, a)| (v, a.len())).collect()
    }

    pub fn edges(&self) -> Vec<(usize, usize, f64)> {
        let mut out = Vec::with_capacity(self.m);
        for (&u, a) in &self.adj {
            for (&v, &w) in a {
                if u < v {
                    out.push((u, v, w));
                }
            }
        }
        out
    }

    pub fn contains_edge(&self, u: usize, v: usize) -> bool {
        self.adj.get(&u).is_some_and(|a| a.contains_key(&v))
    }

    /// Remove an edge; returns its weight and any endpoints left isolated.
    fn remove_edge(&mut self, u: usize, v: usize) -> (f64, Vec<usize>) {
        let w = self.adj.get_mut(&u).unwrap().remove(&v).unwrap();
        self.adj.get_mut(&v).unwrap().remove(&u);
        self.m -= 1;
        self.deletions += 1;
        let mut isolated = Vec::new();
        for x in [u, v] {
            if self.adj.get(&x).is_some_and(|a| a.is_empty()) {
                self.adj.remove(&x);
                isolated.push(x);
            }
        }
        (w, isolated)
    }

    /// Build the piece as a compact-vertex graph together with the
    /// compact-to-original vertex map.
    pub fn as_graph(&self) -> (Graph, Vec<usize>) {
        let verts: Vec<usize> = self.vertices().collect();
        let index: BTreeMap<usize, usize> =
            verts.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut g = Graph::new(verts.len());
        for (u, v, w) in self.edges() {
            g.insert_edge_f64(index[&u], index[&v], w).unwrap();
        }
        (g, verts)
    }
}

/// Piece-level change records emitted by `decomp_update`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum PieceChange {
    EdgeDeleted { piece: PieceId, u: usize, v: usize, w: f64 },
    IsolatedVertexRemoved { piece: PieceId, v: usize },
    PieceRemoved { piece: PieceId, edges: Vec<(usize, usize, f64)> },
    PieceAdded { piece: PieceId, edges: Vec<(usize, usize, f64)> },
}

/// Number of edge-granular changes a batch of piece changes represents;
/// exactly the amount `cnt` advances by.
pub fn edge_change_count(changes: &[PieceChange]) -> u64 {
    changes
        .iter()
        .map(|c| match c {
            PieceChange::EdgeDeleted { .. } => 1,
            PieceChange::IsolatedVertexRemoved { .. } => 0,
            PieceChange::PieceRemoved { edges, .. } => edges.len() as u64,
            PieceChange::PieceAdded { edges, .. } => edges.len() as u64,
        })
        .sum()
}

#[derive(Debug, Clone)]
pub struct ExpanderDecomposition {
    n: usize,
    pub cfg: SparsifyConfig,
    pieces: BTreeMap<PieceId, Piece>,
    edge_piece: BTreeMap<(usize, usize), PieceId>,
    next_id: PieceId,
    /// Cumulative edge changes across all pieces.
    pub cnt: u64,
    /// Edge-granular change log length; equals `cnt` by construction.
    change_log_len: u64,
    /// Work spent building (bucketing plus certification sweeps).
    pub build_work: WorkCounter,
    /// Work spent applying updates.
    pub update_work: WorkCounter,
}

fn norm(u: usize, v: usize) -> (usize, usize) {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

/// Decompose `g` into certified φ-expander pieces.
pub fn decompose(g: &Graph, cfg: SparsifyConfig) -> ExpanderDecomposition {
    let mut d = ExpanderDecomposition {
        n: g.n(),
        cfg,
        pieces: BTreeMap::new(),
        edge_piece: BTreeMap::new(),
        next_id: 0,
        cnt: 0,
        change_log_len: 0,
        build_work: WorkCounter::default(),
        update_work: WorkCounter::default(),
    };
    // Group edges into power-of-two weight buckets.
    let mut buckets: BTreeMap<i64, Vec<(usize, usize, f64)>> = BTreeMap::new();
    for (u, v, w) in g.edges() {
        let class = w.log2().floor() as i64;
        buckets.entry(class).or_default().push((u, v, w));
        d.build_work.add(1);
    }
    let mut finished: Vec<(Vec<(usize, usize, f64)>, Certificate)> = Vec::new();
    for (_, edges) in buckets {
        let mut parts = Vec::new();
        split_components(&edges, &mut parts);
        for part in parts {
            certify_or_split(&part, &cfg, 0, &mut d.build_work, &mut |piece_edges, cert| {
                finished.push((piece_edges.to_vec(), cert));
            });
        }
    }
    for (edges, cert) in finished {
        d.install_piece(&edges, cert);
    }
    d
}

/// Split an edge list into connected components (by union-find).
fn split_components(edges: &[(usize, usize, f64)], out: &mut Vec<Vec<(usize, usize, f64)>>) {
    let mut parent: BTreeMap<usize, usize> = BTreeMap::new();
    fn find(parent: &mut BTreeMap<usize, usize>, x: usize) -> usize {
        let p = *parent.get(&x).unwrap_or(&x);
        if p == x {
            return x;
        }
        let r = find(parent, p);
        parent.insert(x, r);
        r
    }
    for &(u, v, _) in edges {
        let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
        if ru != rv {
            parent.insert(ru, rv);
        }
    }
    let mut groups: BTreeMap<usize, Vec<(usize, usize, f64)>> = BTreeMap::new();
    for &(u, v, w) in edges {
        let r = find(&mut parent, u);
        groups.entry(r).or_default().push((u, v, w));
    }
    out.extend(groups.into_values());
}

/// Recursively certify a connected edge set as a φ-expander or split it
/// along the certifying cut. `emit` receives finished pieces.
fn certify_or_split(
    edges: &[(usize, usize, f64)],
    cfg: &SparsifyConfig,
    depth: usize,
    work: &mut WorkCounter,
    emit: &mut impl FnMut(&[(usize, usize, f64)], Certificate),
) {
    if edges.is_empty() {
        return;
    }
    if edges.len() == 1 {
        emit(edges, Certificate::Singleton);
        return;
    }
    if depth > 64 {
        for e in edges {
            emit(std::slice::from_ref(e), Certificate::Singleton);
        }
        return;
    }
    // Compact local graph.
    let mut verts: Vec<usize> = edges.iter().flat_map(|&(u, v, _)| [u, v]).collect();
    verts.sort_unstable();
    verts.dedup();
    let index: BTreeMap<usize, usize> = verts.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut local = Graph::new(verts.len());
    for &(u, v, w) in edges {
        local.insert_edge_f64(index[&u], index[&v], w).unwrap();
    }

    let (phi_val, cut, cert) = if verts.len() <= cfg.exact_cert_limit {
        work.add((1u64 << (verts.len() - 1)) * edges.len() as u64);
        let (phi, cut) = conductance_min(&local).expect("within exact limit");
        (phi, cut, Certificate::Exact(phi))
    } else {
        work.add(cfg.sweep_iters as u64 * 2 * edges.len() as u64);
        let (phi_lb, cut) = sweep_certificate(&local, cfg.sweep_iters);
        (phi_lb, cut, Certificate::Sweep(phi_lb))
    };

    if phi_val >= cfg.phi {
        emit(edges, cert);
        return;
    }

    // Split along the certifying cut: both sides recurse, crossing edges
    // recurse as their own graph.
    let mask = cut.mask(verts.len());
    let mut side_a = Vec::new();
    let mut side_b = Vec::new();
    let mut crossing = Vec::new();
    for &(u, v, w) in edges {
        match (mask[index[&u]], mask[index[&v]]) {
            (true, true) => side_a.push((u, v, w)),
            (false, false) => side_b.push((u, v, w)),
            _ => crossing.push((u, v, w)),
        }
    }
    // A cut that separates nothing internal cannot make progress; fall back
    // to singletons for the crossing edges.
    if crossing.len() == edges.len() {
        for e in &crossing {
            emit(std::slice::from_ref(e), Certificate::Singleton);
        }
        return;
    }
    for part in [side_a, side_b, crossing] {
        let mut comps = Vec::new();
        split_components(&part, &mut comps);
        for comp in comps {
            certify_or_split(&comp, cfg, depth + 1, work, emit);
        }
    }
}

/// Deterministic power-iteration sweep: estimates λ₂ of the normalized
/// Laplacian and returns `(λ̂₂/2, best sweep cut)`.
fn sweep_certificate(g: &Graph, iters: usize) -> (f64, Cut) {
    let n = g.n();
    let deg: Vec<f64> = (0..n).map(|v| g.weighted_degree(v).max(1e-12)).collect();
    let sqrt_deg: Vec<f64> = deg.iter().map(|d| d.sqrt()).collect();
    let norm_v1: f64 = deg.iter().sum::<f64>().sqrt();
    // Deterministic pseudo-random start vector.
    let mut x: Vec<f64> = (0..n)
        .map(|i| {
            let h = crate::rng::child_seed(0x5eed, i as u64);
            (h as f64 / u64::MAX as f64) - 0.5
        })
        .collect();
    let project = |x: &mut Vec<f64>| {
        let dot: f64 = x.iter().zip(&sqrt_deg).map(|(a, b)| a * b).sum::<f64>() / norm_v1;
        for i in 0..n {
            x[i] -= dot * sqrt_deg[i] / norm_v1;
        }
    };
    project(&mut x);
    let mut mu = 0.5;
    for _ in 0..iters {
        // y = (B + I)/2 x with B = D^{-1/2} A D^{-1/2}.
        let mut y = vec![0.0; n];
        for u in 0..n {
            for (v, w) in g.neighbors(u) {
                y[v] += w * x[u] / (sqrt_deg[u] * sqrt_deg[v]);
            }
        }
        for i in 0..n {
            y[i] = 0.5 * (y[i] + x[i]);
        }
        project(&mut y);
        let norm: f64 = y.iter().map(|a| a * a).sum::<f64>().sqrt();
        if norm < 1e-300 {
            break;
        }
        let num: f64 = y.iter().zip(&x).map(|(a, b)| a * b).sum();
        let den: f64 = x.iter().map(|a| a * a).sum();
        mu = num / den;
        for i in 0..n {
            x[i] = y[i] / norm;
        }
    }
    let lambda2 = (2.0 * (1.0 - mu)).max(0.0);
    // Sweep the eigenvector for the best prefix cut (in D^{-1/2}-scaled order).
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| (x[a] / sqrt_deg[a]).total_cmp(&(x[b] / sqrt_deg[b])));
    let total_vol: f64 = deg.iter().sum();
    let mut in_side = vec![false; n];
    let mut vol = 0.0;
    let mut boundary = 0.0;
    let mut best = f64::INFINITY;
    let mut best_k = 1;
    for (k, &v) in order.iter().enumerate().take(n - 1) {
        in_side[v] = true;
        vol += deg[v];
        for (u, w) in g.neighbors(v) {
            if in_side[u] {
                boundary -= w;
            } else {
                boundary += w;
            }
        }
        let denom = vol.min(total_vol - vol);
        if denom > 0.0 {
            let phi = boundary / denom;
            if phi < best {
                best = phi;
                best_k = k + 1;
            }
        }
    }
    let cut = Cut::new(order[..best_k].to_vec());
    ((lambda2 / 2.0).min(best), cut)
}

impl ExpanderDecomposition {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn pieces(&self) -> impl Iterator<Item = &Piece> {
        self.pieces.values()
    }

    pub fn piece_count(&self) -> usize {
        self.pieces.len()
    }

    pub fn change_log_len(&self) -> u64 {
        self.change_log_len
    }

    /// `Σ_i |V(G_i)|`.
    pub fn vertex_occurrence_total(&self) -> usize {
        self.pieces.values().map(|p| p.vertex_count()).sum()
    }

    /// The `Σ|V(G_i)| ≤ C·n·log³n` cover bound.
    pub fn cover_bound_holds(&self) -> bool {
        let logn = (self.n.max(2) as f64).ln();
        self.vertex_occurrence_total() as f64
            <= self.cfg.cover_const * self.n as f64 * logn.powi(3)
    }

    /// Every current edge lies in exactly one piece.
    pub fn partition_holds(&self, g: &Graph) -> bool {
        let mut count = 0usize;
        for piece in self.pieces.values() {
            for (u, v, w) in piece.edges() {
                match g.edge_weight(u, v) {
                    Some(gw) if gw == w => count += 1,
                    _ => return false,
                }
            }
        }
        count == g.m() && self.edge_piece.len() == g.m()
    }

    fn install_piece(&mut self, edges: &[(usize, usize, f64)], cert: Certificate) -> PieceId {
        let id = self.next_id;
        self.next_id += 1;
        for &(u, v, _) in edges {
            self.edge_piece.insert(norm(u, v), id);
        }
        self.pieces.insert(id, Piece::from_edges(id, edges, cert));
        id
    }

    /// Apply a graph update; returns the resulting piece-level changes.
    pub fn decomp_update(&mut self, upd: &GraphUpdate) -> Result<Vec<PieceChange>, SparsifyError> {
        let mut changes = Vec::new();
        match *upd {
            GraphUpdate::Insert { u, v, w } => {
                if u == v || w == 0 {
                    return Err(SparsifyError::InvalidUpdate("bad insert".into()));
                }
                if self.edge_piece.contains_key(&norm(u, v)) {
                    return Err(SparsifyError::InvalidUpdate(format!(
                        "edge ({u},{v}) already present"
                    )));
                }
                let id = self.install_piece(&[(u, v, w as f64)], Certificate::Singleton);
                self.update_work.add(1);
                changes.push(PieceChange::PieceAdded {
                    piece: id,
                    edges: vec![(norm(u, v).0, norm(u, v).1, w as f64)],
                });
            }
            GraphUpdate::Delete { u, v } => {
                let key = norm(u, v);
                let pid = *self
                    .edge_piece
                    .get(&key)
                    .ok_or_else(|| SparsifyError::InvalidUpdate(format!(
                        "edge ({u},{v}) not present"
                    )))?;
                self.edge_piece.remove(&key);
                let piece = self.pieces.get_mut(&pid).unwrap();
                let (w, isolated) = piece.remove_edge(key.0, key.1);
                self.update_work.add(1);
                changes.push(PieceChange::EdgeDeleted { piece: pid, u: key.0, v: key.1, w });
                for x in isolated {
                    changes.push(PieceChange::IsolatedVertexRemoved { piece: pid, v: x });
                }
                let rebuild = piece.m == 0
                    || (!matches!(piece.cert, Certificate::Singleton)
                        && piece.deletions as f64
                            > self.cfg.rebuild_fraction * piece.initial_m as f64);
                if rebuild {
                    let old = self.pieces.remove(&pid).unwrap();
                    let remaining = old.edges();
                    for &(a, b, _) in &remaining {
                        self.edge_piece.remove(&norm(a, b));
                    }
                    changes.push(PieceChange::PieceRemoved { piece: pid, edges: remaining.clone() });
                    if !remaining.is_empty() {
                        let cfg = self.cfg;
                        let mut comps = Vec::new();
                        split_components(&remaining, &mut comps);
                        let mut new_pieces: Vec<(Vec<(usize, usize, f64)>, Certificate)> =
                            Vec::new();
                        let mut work = WorkCounter::default();
                        for comp in comps {
                            certify_or_split(&comp, &cfg, 0, &mut work, &mut |es, cert| {
                                new_pieces.push((es.to_vec(), cert));
                            });
                        }
                        self.update_work.add(work.get());
                        for (es, cert) in new_pieces {
                            let id = self.install_piece(&es, cert);
                            changes.push(PieceChange::PieceAdded { piece: id, edges: es });
                        }
                    }
                }
            }
        }
        let delta = edge_change_count(&changes);
        self.cnt += delta;
        self.change_log_len += delta;
        Ok(changes)
    }
}
