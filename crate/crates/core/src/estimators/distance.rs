//! Landmark-based distance estimator.
//!
//! Keeps `k` random landmarks and answers `min_ℓ d(src, ℓ) + d(ℓ, snk)`,
//! recomputing single-source distances lazily after updates. The random
//! landmark choice is what an oblivious adversary cannot exploit; an
//! adaptive one can strip a revealed landmark's edges, and once a landmark
//! is isolated the estimator must recommit to a fresh one (counted).

use super::{Estimator, EstimatorSpec, GraphOp, GraphState};
use crate::counters::CostCounters;
use crate::graph::{sssp, Graph, GraphUpdate};
use crate::rng::{rng_from_seed, Rng};
use rand::seq::SliceRandom;
use rand::Rng as _;
use std::collections::BTreeMap;

#[derive(Debug, Clone)]
pub struct LandmarkDistanceEstimator {
    k: usize,
    graph: Graph,
    pair: (usize, usize),
    landmarks: Vec<usize>,
    dist: BTreeMap<usize, Vec<f64>>,
    dirty: bool,
    pub recommits: u64,
    rng: Rng,
    costs: CostCounters,
}

impl LandmarkDistanceEstimator {
    pub fn new(k: usize) -> Self {
        assert!(k >= 1);
        Self {
            k,
            graph: Graph::new(0),
            pair: (0, 0),
            landmarks: Vec::new(),
            dist: BTreeMap::new(),
            dirty: true,
            recommits: 0,
            rng: rng_from_seed(0),
            costs: CostCounters::default(),
        }
    }

    pub fn landmarks(&self) -> &[usize] {
        &self.landmarks
    }

    fn pick_landmarks(&mut self) {
        let n = self.graph.n();
        if self.k >= n {
            self.landmarks = (0..n).collect();
            return;
        }
        let mut verts: Vec<usize> = (0..n).collect();
        verts.shuffle(&mut self.rng);
        self.landmarks = verts.into_iter().take(self.k).collect();
        self.landmarks.sort_unstable();
    }

    fn recommit(&mut self, dead: usize) {
        let n = self.graph.n();
        let candidates: Vec<usize> = (0..n)
            .filter(|&v| self.graph.degree_count(v) > 0 && !self.landmarks.contains(&v))
            .collect();
        if let Some(&fresh) = candidates.get(self.rng.random_range(0..candidates.len().max(1)))
        {
            let pos = self.landmarks.iter().position(|&l| l == dead).unwrap();
            self.landmarks[pos] = fresh;
            self.landmarks.sort_unstable();
            self.recommits += 1;
            self.dirty = true;
        }
    }

    fn answer_from(&self, dist: &BTreeMap<usize, Vec<f64>>) -> f64 {
        let (s, t) = self.pair;
        if s == t {
            return 0.0;
        }
        let mut best = f64::INFINITY;
        for l in &self.landmarks {
            if let Some(d) = dist.get(l) {
                best = best.min(d[s] + d[t]);
            }
        }
        best
    }
}

impl Estimator for LandmarkDistanceEstimator {
    type Input = GraphState;
    type Update = GraphOp;

    fn reset(&mut self, input: &GraphState, seed: u64) {
        self.rng = rng_from_seed(seed);
        self.graph = input.graph.clone();
        self.pair = input.pair;
        self.dist.clear();
        self.dirty = true;
        self.costs.preprocess += input.graph.m() as u64;
        self.pick_landmarks();
    }

    fn update(&mut self, op: &GraphOp) {
        self.costs.update += 1;
        match *op {
            GraphOp::SetPair { s, t } => {
                self.pair = (s, t);
                return;
            }
            GraphOp::Insert { u, v, w } => {
                self.graph.apply_update(&GraphUpdate::Insert { u, v, w }).expect("validated");
            }
            GraphOp::Delete { u, v } => {
                self.graph.apply_update(&GraphUpdate::Delete { u, v }).expect("validated");
                // The oblivious trick breaks exactly here: an isolated
                // landmark forces a recommit.
                if self.landmarks.len() < self.graph.n() {
                    for x in [u, v] {
                        if self.graph.degree_count(x) == 0 && self.landmarks.contains(&x) {
                            self.recommit(x);
                        }
                    }
                }
            }
        }
        self.dirty = true;
    }

    fn query(&mut self) -> f64 {
        if self.dirty {
            self.dist.clear();
            for &l in &self.landmarks {
                self.dist.insert(l, sssp(&self.graph, l));
                self.costs.query += self.graph.m() as u64 + self.graph.n() as u64;
            }
            self.dirty = false;
        }
        self.costs.query += self.landmarks.len() as u64;
        self.answer_from(&self.dist.clone())
    }

    fn peek(&self) -> f64 {
        if self.dirty {
            let mut dist = BTreeMap::new();
            for &l in &self.landmarks {
                dist.insert(l, sssp(&self.graph, l));
            }
            self.answer_from(&dist)
        } else {
            self.answer_from(&self.dist)
        }
    }

    fn costs(&self) -> CostCounters {
        self.costs
    }

    fn spec(&self) -> EstimatorSpec {
        EstimatorSpec { name: "distance", gamma: 3.0, refresh_capable: false }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path_state(n: usize) -> GraphState {
        let mut g = Graph::new(n);
        for u in 0..n - 1 {
            g.insert_edge_f64(u, u + 1, 1.0).unwrap();
        }
        GraphState::new(g)
    }

    #[test]
    fn src_equals_snk_is_zero() {
        let mut st = path_state(6);
        st.pair = (3, 3);
        let mut e = LandmarkDistanceEstimator::new(2);
        e.reset(&st, 4);
        assert_eq!(e.query(), 0.0);
    }

    #[test]
    fn landmark_on_shortest_path_is_exact() {
        let mut st = path_state(7);
        st.pair = (0, 6);
        let mut e = LandmarkDistanceEstimator::new(7); // all vertices
        e.reset(&st, 4);
        assert_eq!(e.landmarks().len(), 7);
        // Some landmark lies on the path, so the triangle inequality is tight.
        assert_eq!(e.query(), 6.0);
    }

    #[test]
    fn all_vertices_means_no_recommits() {
        let mut st = path_state(5);
        st.pair = (0, 4);
        let mut e = LandmarkDistanceEstimator::new(5);
        e.reset(&st, 4);
        e.update(&GraphOp::Delete { u: 0, v: 1 });
        e.update(&GraphOp::Insert { u: 0, v: 1, w: 1 });
        assert_eq!(e.recommits, 0);
    }

    #[test]
    fn isolating_a_landmark_forces_recommit() {
        let mut st = path_state(6);
        st.pair = (0, 5);
        let mut e = LandmarkDistanceEstimator::new(1);
        e.reset(&st, 11);
        let l = e.landmarks()[0];
        // Remove all edges at the landmark.
        let nbrs: Vec<(usize, f64)> = e.graph.neighbors(l).collect();
        for (v, _) in nbrs {
            e.update(&GraphOp::Delete { u: l, v });
        }
        assert_eq!(e.recommits, 1);
        assert_ne!(e.landmarks()[0], l);
    }
}
