//! The refreshable sparsifier handle.
//!
//! `sparsify(d, t, seed)` samples every piece of the decomposition with fresh
//! randomness and returns `H = ∪ H_i` plus the mirror state needed to
//! maintain `H` under piece changes: when a vertex's approximate degree
//! class changes, only that vertex's owned edges are resampled. The handle
//! stays valid until `cnt` has increased by the budget `t`; feeding changes
//! past the budget is an error, at which point callers re-issue (refresh)
//! with fresh randomness at cost proportional to the vertex-occurrence total
//! of the decomposition, independent of the edge count.

use super::decomp::{ExpanderDecomposition, PieceChange, PieceId};
use super::sample::{approx_degree, owner_of, piece_sampling_prob_with_const, subset_sample};
use super::{edge_change_count, SparsifyError};
use crate::counters::WorkCounter;
use crate::graph::Graph;
use crate::rng::{rng_from_seed, Rng};
use rand::Rng as _;
use std::collections::BTreeMap;

fn norm(u: usize, v: usize) -> (usize, usize) {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

#[derive(Debug, Clone, Default)]
struct PieceMirror {
    deg_count: BTreeMap<usize, usize>,
    degt: BTreeMap<usize, usize>,
    adj: BTreeMap<usize, Vec<usize>>,
    owned: BTreeMap<usize, Vec<(usize, usize)>>,
    edge_owner: BTreeMap<(usize, usize), usize>,
    weights: BTreeMap<(usize, usize), f64>,
    sampled: BTreeMap<(usize, usize), f64>,
}

impl PieceMirror {
    fn from_edges(edges: &[(usize, usize, f64)]) -> Self {
        let mut m = Self::default();
        for &(u, v, w) in edges {
            let key = norm(u, v);
            m.weights.insert(key, w);
            *m.deg_count.entry(u).or_default() += 1;
            *m.deg_count.entry(v).or_default() += 1;
            m.adj.entry(u).or_default().push(v);
            m.adj.entry(v).or_default().push(u);
        }
        m.degt = m.deg_count.iter().map(|(&v, &d)| (v, approx_degree(d))).collect();
        for (&(u, v), _) in &m.weights {
            let o = owner_of(u, v, m.degt[&u], m.degt[&v]);
            m.owned.entry(o).or_default().push((u, v));
            m.edge_owner.insert((u, v), o);
        }
        for l in m.adj.values_mut() {
            l.sort_unstable();
        }
        m
    }
}

/// A sampled sparsifier `H` together with its maintenance state.
#[derive(Debug, Clone)]
pub struct SparsifierHandle {
    eps: f64,
    phi: f64,
    sample_const: f64,
    n_global: usize,
    budget: u64,
    consumed: u64,
    cnt_at_issue: u64,
    h: Graph,
    mirrors: BTreeMap<PieceId, PieceMirror>,
    rng: Rng,
    /// Work spent building this handle (the refresh cost).
    pub build_work: WorkCounter,
    /// Work spent maintaining it under piece changes.
    pub maint_work: WorkCounter,
    /// Length of H's edge change log since issue.
    pub h_changes: u64,
}

/// Issue a fresh sparsifier valid for the next `t` piece changes.
pub fn sparsify(d: &ExpanderDecomposition, t: u64, seed: u64) -> SparsifierHandle {
    let mut handle = SparsifierHandle {
        eps: d.cfg.eps,
        phi: d.cfg.phi,
        sample_const: d.cfg.sample_const,
        n_global: d.n().max(2),
        budget: t,
        consumed: 0,
        cnt_at_issue: d.cnt,
        h: Graph::new(d.n()),
        mirrors: BTreeMap::new(),
        rng: rng_from_seed(seed),
        build_work: WorkCounter::default(),
        maint_work: WorkCounter::default(),
        h_changes: 0,
    };
    for piece in d.pieces() {
        let mirror = PieceMirror::from_edges(&piece.edges());
        handle.sample_new_mirror(piece.id, mirror, true);
    }
    handle
}

impl SparsifierHandle {
    pub fn graph(&self) -> &Graph {
        &self.h
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn budget(&self) -> u64 {
        self.budget
    }

    pub fn consumed(&self) -> u64 {
        self.consumed
    }

    pub fn cnt_at_issue(&self) -> u64 {
        self.cnt_at_issue
    }

    pub fn exhausted(&self) -> bool {
        self.consumed >= self.budget
    }

    /// Re-issue against the current decomposition with fresh randomness.
    pub fn refresh(&self, d: &ExpanderDecomposition, seed: u64) -> SparsifierHandle {
        sparsify(d, self.budget, seed)
    }

    fn prob(&self, degt: usize) -> f64 {
        piece_sampling_prob_with_const(self.sample_const, self.n_global, self.eps, self.phi, degt)
    }

    fn sample_new_mirror(&mut self, id: PieceId, mut mirror: PieceMirror, at_build: bool) {
        let owners: Vec<usize> = mirror.owned.keys().copied().collect();
        let mut touches = 0u64;
        let mut per_vertex = 0u64;
        for u in mirror.deg_count.keys() {
            let _ = u;
            per_vertex += 1;
        }
        for u in owners {
            let list = mirror.owned[&u].clone();
            if list.is_empty() {
                continue;
            }
            let p = self.prob(mirror.degt[&u]);
            let idxs = subset_sample(list.len(), p, &mut self.rng, &mut touches);
            for i in idxs {
                let key = list[i];
                let scaled = mirror.weights[&key] / p;
                self.h.insert_edge_f64(key.0, key.1, scaled).unwrap();
                mirror.sampled.insert(key, scaled);
                if !at_build {
                    self.h_changes += 1;
                }
            }
        }
        let work = if at_build { &mut self.build_work } else { &mut self.maint_work };
        work.add(per_vertex + touches);
        self.mirrors.insert(id, mirror);
    }

    /// Feed a batch of piece-level changes; errors if the budget would be
    /// exceeded (call `refresh` then).
    pub fn apply_changes(&mut self, changes: &[PieceChange]) -> Result<(), SparsifyError> {
        let delta = edge_change_count(changes);
        if self.consumed + delta > self.budget {
            return Err(SparsifyError::BudgetExhausted {
                consumed: self.consumed + delta,
                budget: self.budget,
            });
        }
        self.consumed += delta;
        for change in changes {
            match change {
                PieceChange::EdgeDeleted { piece, u, v, .. } => {
                    self.edge_deleted(*piece, *u, *v);
                }
                PieceChange::IsolatedVertexRemoved { piece, v } => {
                    if let Some(m) = self.mirrors.get_mut(piece) {
                        m.deg_count.remove(v);
                        m.degt.remove(v);
                        m.adj.remove(v);
                        m.owned.remove(v);
                    }
                    self.maint_work.add(1);
                }
                PieceChange::PieceRemoved { piece, .. } => {
                    if let Some(m) = self.mirrors.remove(piece) {
                        for (key, _) in m.sampled {
                            self.h.remove_edge(key.0, key.1).unwrap();
                            self.h_changes += 1;
                        }
                    }
                    self.maint_work.add(1);
                }
                PieceChange::PieceAdded { piece, edges } => {
                    let mirror = PieceMirror::from_edges(edges);
                    self.sample_new_mirror(*piece, mirror, false);
                }
            }
        }
        Ok(())
    }

    fn edge_deleted(&mut self, piece: PieceId, u: usize, v: usize) {
        let key = norm(u, v);
        let mut class_changes: Vec<(usize, usize)> = Vec::new();
        {
            let Some(m) = self.mirrors.get_mut(&piece) else { return };
            m.weights.remove(&key);
            if let Some(owner) = m.edge_owner.remove(&key) {
                if let Some(list) = m.owned.get_mut(&owner) {
                    list.retain(|&e| e != key);
                }
            }
            if m.sampled.remove(&key).is_some() {
                self.h.remove_edge(key.0, key.1).unwrap();
                self.h_changes += 1;
            }
            for x in [key.0, key.1] {
                if let Some(d) = m.deg_count.get_mut(&x) {
                    *d -= 1;
                }
                if let Some(l) = m.adj.get_mut(&x) {
                    let other = if x == key.0 { key.1 } else { key.0 };
                    l.retain(|&y| y != other);
                }
            }
            // Degree-class changes trigger resampling of the affected vertex.
            for x in [key.0, key.1] {
                let new_degt = approx_degree(m.deg_count.get(&x).copied().unwrap_or(0));
                let old_degt = m.degt.get(&x).copied().unwrap_or(0);
                if new_degt != old_degt && new_degt > 0 {
                    class_changes.push((x, new_degt));
                } else if new_degt == 0 {
                    m.degt.remove(&x);
                }
            }
        }
        self.maint_work.add(1);
        for (x, new_degt) in class_changes {
            self.deg_class_changed(piece, x, new_degt);
        }
    }

    /// `deg̃(x)` changed: reassign ownership of x's incident edges, then draw
    /// a fresh sample of the list x now owns.
    fn deg_class_changed(&mut self, piece: PieceId, x: usize, new_degt: usize) {
        let (moves_out, incident) = {
            let m = self.mirrors.get_mut(&piece).unwrap();
            m.degt.insert(x, new_degt);
            let incident: Vec<usize> = m.adj.get(&x).cloned().unwrap_or_default();
            let mut moves_out = Vec::new();
            for &y in &incident {
                let key = norm(x, y);
                let old_owner = m.edge_owner[&key];
                let new_owner = owner_of(x, y, m.degt[&x], m.degt[&y]);
                if new_owner != old_owner {
                    m.owned.get_mut(&old_owner).unwrap().retain(|&e| e != key);
                    m.owned.entry(new_owner).or_default().push(key);
                    m.edge_owner.insert(key, new_owner);
                    if new_owner == y {
                        moves_out.push(key);
                    }
                }
            }
            (moves_out, incident)
        };
        self.maint_work.add(1 + incident.len() as u64);
        // Edges now owned by the far endpoint get an independent fresh coin
        // at the new owner's rate.
        for key in moves_out {
            let (p, w, was_sampled) = {
                let m = &self.mirrors[&piece];
                let owner = m.edge_owner[&key];
                (self.prob(m.degt[&owner]), m.weights[&key], m.sampled.contains_key(&key))
            };
            if was_sampled {
                self.h.remove_edge(key.0, key.1).unwrap();
                self.mirrors.get_mut(&piece).unwrap().sampled.remove(&key);
                self.h_changes += 1;
            }
            self.maint_work.add(1);
            if self.rng.random::<f64>() < p {
                let scaled = w / p;
                self.h.insert_edge_f64(key.0, key.1, scaled).unwrap();
                self.mirrors.get_mut(&piece).unwrap().sampled.insert(key, scaled);
                self.h_changes += 1;
            }
        }
        // Resample the whole list x owns.
        let (list, p) = {
            let m = &self.mirrors[&piece];
            (m.owned.get(&x).cloned().unwrap_or_default(), self.prob(new_degt))
        };
        for key in &list {
            if self.mirrors[&piece].sampled.contains_key(key) {
                self.h.remove_edge(key.0, key.1).unwrap();
                self.mirrors.get_mut(&piece).unwrap().sampled.remove(key);
                self.h_changes += 1;
            }
        }
        let mut touches = 0u64;
        let idxs = subset_sample(list.len(), p, &mut self.rng, &mut touches);
        for i in idxs {
            let key = list[i];
            let w = self.mirrors[&piece].weights[&key];
            let scaled = w / p;
            self.h.insert_edge_f64(key.0, key.1, scaled).unwrap();
            self.mirrors.get_mut(&piece).unwrap().sampled.insert(key, scaled);
            self.h_changes += 1;
        }
        self.maint_work.add(1 + touches);
    }

    /// Internal consistency: H equals the union of the mirrors' sampled sets.
    pub fn consistent(&self) -> bool {
        let mut count = 0usize;
        for m in self.mirrors.values() {
            for (&(u, v), &w) in &m.sampled {
                match self.h.edge_weight(u, v) {
                    Some(hw) if hw == w => count += 1,
                    _ => return false,
                }
            }
        }
        count == self.h.m()
    }
}
