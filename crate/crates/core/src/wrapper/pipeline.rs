//! Sparsified blinking-refresh pipelines.
//!
//! Each copy runs on its own independently sampled sparsifier handle drawn
//! from a deterministic expander decomposition of the input; the phase is a
//! budget on `cnt`, and at phase end every handle is refreshed with fresh
//! randomness (the copies' protected database) instead of rebuilt. Since the
//! decomposition is deterministic, per-copy decompositions coincide and a
//! pre-warmed prototype lets clones skip straight to sampling.

use super::{RobustWrapper, WrapperParams};
use crate::counters::CostCounters;
use crate::estimators::{EffResEstimator, Estimator, EstimatorSpec, GraphOp, GraphState};
use crate::graph::{min_cut_exact, Graph, GraphUpdate};
use crate::sparsify::{decompose, sparsify, ExpanderDecomposition, SparsifierHandle, SparsifyConfig};
use std::cell::Cell;

/// Global-min-cut copy answering from a private sparsifier handle.
#[derive(Debug, Clone)]
pub struct SparsifiedMincut {
    eps: f64,
    cfg: SparsifyConfig,
    budget: u64,
    shadow: Option<Graph>,
    decomp: Option<ExpanderDecomposition>,
    handle: Option<SparsifierHandle>,
    needs_refresh: bool,
    costs: CostCounters,
    answer_cache: Cell<Option<f64>>,
}

impl SparsifiedMincut {
    /// `budget` is the cnt budget of each issued handle (the phase length).
    pub fn new(eps: f64, cfg: SparsifyConfig, budget: u64) -> Self {
        assert!(eps > 0.0);
        Self {
            eps,
            cfg: SparsifyConfig { eps, ..cfg },
            budget,
            shadow: None,
            decomp: None,
            handle: None,
            needs_refresh: false,
            costs: CostCounters::default(),
            answer_cache: Cell::new(None),
        }
    }

    pub fn handle(&self) -> Option<&SparsifierHandle> {
        self.handle.as_ref()
    }

    fn answer(&self) -> f64 {
        if let Some(a) = self.answer_cache.get() {
            return a;
        }
        let a = match &self.handle {
            Some(h) if h.graph().n() >= 2 => {
                let (w, _) = min_cut_exact(h.graph()).expect("within size limit");
                w * (1.0 + self.eps / 2.0)
            }
            _ => 0.0,
        };
        self.answer_cache.set(Some(a));
        a
    }
}

impl Estimator for SparsifiedMincut {
    type Input = GraphState;
    type Update = GraphOp;

    fn reset(&mut self, input: &GraphState, seed: u64) {
        // The decomposition is deterministic in the input, so a matching
        // shadow means only the handle randomness needs redrawing.
        let fresh_needed = self.shadow.as_ref() != Some(&input.graph);
        if fresh_needed {
            let d = decompose(&input.graph, self.cfg);
            self.costs.preprocess += d.build_work.get();
            self.decomp = Some(d);
            self.shadow = Some(input.graph.clone());
        }
        let d = self.decomp.as_ref().unwrap();
        let h = sparsify(d, self.budget, seed);
        self.costs.preprocess += h.build_work.get();
        self.handle = Some(h);
        self.needs_refresh = false;
        self.answer_cache.set(None);
    }

    fn update(&mut self, op: &GraphOp) {
        self.costs.update += 1;
        if !matches!(op, GraphOp::SetPair { .. }) {
            self.answer_cache.set(None);
        }
        let upd = match *op {
            GraphOp::Insert { u, v, w } => GraphUpdate::Insert { u, v, w },
            GraphOp::Delete { u, v } => GraphUpdate::Delete { u, v },
            GraphOp::SetPair { .. } => return,
        };
        if let Some(s) = &mut self.shadow {
            s.apply_update(&upd).expect("game validates updates");
        }
        let (Some(d), Some(h)) = (self.decomp.as_mut(), self.handle.as_mut()) else { return };
        let changes = d.decomp_update(&upd).expect("game validates updates");
        self.costs.update += crate::sparsify::edge_change_count(&changes);
        if h.apply_changes(&changes).is_err() {
            self.needs_refresh = true;
        }
    }

    fn query(&mut self) -> f64 {
        if let Some(h) = &self.handle {
            let g = h.graph();
            self.costs.query += (g.m() + g.n()) as u64;
        }
        self.answer()
    }

    fn peek(&self) -> f64 {
        self.answer()
    }

    fn refresh(&mut self, seed: u64) -> bool {
        let (Some(d), Some(h)) = (&self.decomp, &mut self.handle) else { return false };
        let fresh = h.refresh(d, seed);
        self.costs.preprocess += fresh.build_work.get();
        *h = fresh;
        self.needs_refresh = false;
        self.answer_cache.set(None);
        true
    }

    fn exhausted(&self) -> bool {
        self.needs_refresh || self.handle.as_ref().is_some_and(|h| h.exhausted())
    }

    fn costs(&self) -> CostCounters {
        self.costs
    }

    fn spec(&self) -> EstimatorSpec {
        EstimatorSpec { name: "pipeline-mincut", gamma: 1.0 + self.eps, refresh_capable: true }
    }
}

/// Re-export so pipelines and the standalone estimator share one type.
pub type SparsifiedEffRes = EffResEstimator;

/// Build the sparsified min-cut pipeline: a copy farm of
/// [`SparsifiedMincut`] estimators over `input`, phases ending whenever any
/// handle's cnt budget `t_cnt` is spent.
pub fn pipeline_mincut(
    input: &GraphState,
    eps: f64,
    cfg: SparsifyConfig,
    t_cnt: u64,
    params: WrapperParams,
    master_seed: u64,
) -> RobustWrapper<SparsifiedMincut> {
    let mut proto = SparsifiedMincut::new(eps, cfg, t_cnt);
    proto.reset(input, 0);
    RobustWrapper::new(&proto, input, params, master_seed)
}

/// Build the sparsified effective-resistance pipeline.
pub fn pipeline_effres(
    input: &GraphState,
    eps: f64,
    cfg: SparsifyConfig,
    t_cnt: u64,
    params: WrapperParams,
    master_seed: u64,
) -> RobustWrapper<SparsifiedEffRes> {
    let mut proto = EffResEstimator::new(eps, cfg, t_cnt);
    proto.reset(input, 0);
    RobustWrapper::new(&proto, input, params, master_seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wrapper::{derive_params, WrapperConstants};

    fn clique_pair_state() -> GraphState {
        // Two K8 cliques joined by 12 unit edges; clique edges weight 8.
        let mut g = Graph::new(16);
        for base in [0, 8] {
            for i in 0..8 {
                for j in i + 1..8 {
                    g.insert_edge_f64(base + i, base + j, 8.0).unwrap();
                }
            }
        }
        for i in 0..8 {
            g.insert_edge_f64(i, 8 + i, 1.0).unwrap();
        }
        for i in 0..4 {
            g.insert_edge_f64(i, 8 + ((i + 1) % 8), 1.0).unwrap();
        }
        GraphState::new(g)
    }

    #[test]
    fn handles_are_pairwise_distinct_under_sampling() {
        let st = clique_pair_state();
        let cfg = SparsifyConfig { phi: 0.2, sample_const: 0.01, ..Default::default() };
        let params =
            derive_params(50, 600.0, 0.25, 0.1, WrapperConstants::pinned(6, 3)).unwrap();
        let w = pipeline_mincut(&st, 0.5, cfg, 50, params, 31);
        let copies: Vec<Vec<(usize, usize, f64)>> = w
            .copies()
            .iter()
            .map(|c| c.handle().unwrap().graph().edges())
            .collect();
        for i in 0..copies.len() {
            for j in i + 1..copies.len() {
                assert_ne!(copies[i], copies[j], "handles {i} and {j} collided");
            }
        }
    }

    #[test]
    fn phase_ends_when_cnt_budget_spent() {
        let st = clique_pair_state();
        let cfg = SparsifyConfig { phi: 0.2, ..Default::default() };
        let params =
            derive_params(1000, 600.0, 0.25, 0.1, WrapperConstants::pinned(4, 2)).unwrap();
        let mut w = pipeline_mincut(&st, 0.5, cfg, 3, params, 8);
        let mut refreshes = 0;
        let edges = st.graph.edges();
        for &(u, v, _) in edges.iter().take(9) {
            if w.update(&GraphOp::Delete { u, v }).unwrap() {
                refreshes += 1;
            }
            w.query().unwrap();
        }
        assert!(refreshes >= 2, "refreshes: {refreshes}");
        assert_eq!(w.metrics.restarts, refreshes);
    }

    #[test]
    fn refresh_work_much_smaller_than_build() {
        let st = clique_pair_state();
        let cfg = SparsifyConfig { phi: 0.2, sample_const: 0.01, ..Default::default() };
        let mut proto = SparsifiedMincut::new(0.5, cfg, 10);
        proto.reset(&st, 0);
        let build = proto.costs().preprocess;
        let before = proto.costs().preprocess;
        proto.refresh(1);
        let refresh_cost = proto.costs().preprocess - before;
        assert!(
            (refresh_cost as f64) < 0.5 * build as f64,
            "refresh {refresh_cost} vs build {build}"
        );
    }
}
