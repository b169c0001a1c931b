//! Effective-resistance estimator over a privately sampled sparsifier.
//!
//! Holds its own expander decomposition of the input (deterministic) and a
//! sampled sparsifier handle (the protected randomness). The `(src, snk)`
//! register is state set by a query-update. `eps = 0` selects an exact mode
//! with no sampling at all. The handle is refresh-capable: re-sampling from
//! the maintained decomposition costs work proportional to the
//! vertex-occurrence total, not the edge count.

use super::{Estimator, EstimatorSpec, GraphOp, GraphState};
use crate::counters::CostCounters;
use crate::graph::{effective_resistance_exact, Graph, GraphUpdate};
use crate::sparsify::{decompose, sparsify, ExpanderDecomposition, SparsifierHandle, SparsifyConfig};

#[derive(Debug, Clone)]
pub struct EffResEstimator {
    eps: f64,
    cfg: SparsifyConfig,
    budget: u64,
    exact: Option<Graph>,
    shadow: Option<Graph>,
    decomp: Option<ExpanderDecomposition>,
    handle: Option<SparsifierHandle>,
    pair: (usize, usize),
    needs_refresh: bool,
    costs: CostCounters,
}

impl EffResEstimator {
    /// `eps = 0` gives the exact mode; otherwise `cfg` drives decomposition
    /// and sampling and `budget` is the handle's change budget (pipelines use
    /// the phase length, standalone estimators effectively unlimited).
    pub fn new(eps: f64, cfg: SparsifyConfig, budget: u64) -> Self {
        assert!(eps >= 0.0);
        Self {
            eps,
            cfg: SparsifyConfig { eps: if eps > 0.0 { eps } else { cfg.eps }, ..cfg },
            budget,
            exact: None,
            shadow: None,
            decomp: None,
            handle: None,
            pair: (0, 0),
            needs_refresh: false,
            costs: CostCounters::default(),
        }
    }

    pub fn standalone(eps: f64, cfg: SparsifyConfig) -> Self {
        Self::new(eps, cfg, u64::MAX / 4)
    }

    fn answer_graph(&self) -> Option<&Graph> {
        if let Some(g) = &self.exact {
            Some(g)
        } else {
            self.handle.as_ref().map(|h| h.graph())
        }
    }

    fn answer(&self) -> f64 {
        let (s, t) = self.pair;
        let Some(g) = self.answer_graph() else { return f64::INFINITY };
        if s == t {
            return 0.0;
        }
        let margin = if self.eps > 0.0 { 1.0 + self.eps / 2.0 } else { 1.0 };
        match effective_resistance_exact(g, s, t) {
            Ok(r) => r * margin,
            Err(_) => f64::INFINITY,
        }
    }
}

impl Estimator for EffResEstimator {
    type Input = GraphState;
    type Update = GraphOp;

    fn reset(&mut self, input: &GraphState, seed: u64) {
        self.pair = input.pair;
        self.needs_refresh = false;
        if self.eps == 0.0 {
            self.exact = Some(input.graph.clone());
            self.costs.preprocess += input.graph.m() as u64;
            return;
        }
        // The decomposition is deterministic in the input; when the shadow
        // already matches, only the handle randomness needs redrawing.
        if self.shadow.as_ref() != Some(&input.graph) {
            let d = decompose(&input.graph, self.cfg);
            self.costs.preprocess += d.build_work.get();
            self.decomp = Some(d);
            self.shadow = Some(input.graph.clone());
        }
        let h = sparsify(self.decomp.as_ref().unwrap(), self.budget, seed);
        self.costs.preprocess += h.build_work.get();
        self.handle = Some(h);
    }

    fn update(&mut self, op: &GraphOp) {
        self.costs.update += 1;
        match *op {
            GraphOp::SetPair { s, t } => {
                self.pair = (s, t);
                return;
            }
            _ => {}
        }
        if let Some(g) = &mut self.exact {
            let upd = match *op {
                GraphOp::Insert { u, v, w } => GraphUpdate::Insert { u, v, w },
                GraphOp::Delete { u, v } => GraphUpdate::Delete { u, v },
                GraphOp::SetPair { .. } => unreachable!(),
            };
            g.apply_update(&upd).expect("game validates updates");
            return;
        }
        let upd = match *op {
            GraphOp::Insert { u, v, w } => GraphUpdate::Insert { u, v, w },
            GraphOp::Delete { u, v } => GraphUpdate::Delete { u, v },
            GraphOp::SetPair { .. } => unreachable!(),
        };
        if let Some(s) = &mut self.shadow {
            s.apply_update(&upd).expect("game validates updates");
        }
        let (d, h) = (self.decomp.as_mut().unwrap(), self.handle.as_mut().unwrap());
        let changes = d.decomp_update(&upd).expect("game validates updates");
        self.costs.update += crate::sparsify::edge_change_count(&changes);
        if h.apply_changes(&changes).is_err() {
            // Budget spent mid-update: flag for refresh before the next query.
            self.needs_refresh = true;
        }
    }

    fn query(&mut self) -> f64 {
        if let Some(g) = self.answer_graph() {
            self.costs.query += g.n() as u64 * g.n() as u64;
        }
        self.answer()
    }

    fn peek(&self) -> f64 {
        self.answer()
    }

    fn refresh(&mut self, seed: u64) -> bool {
        if self.exact.is_some() {
            return true;
        }
        let (Some(d), Some(h)) = (&self.decomp, &mut self.handle) else { return false };
        let fresh = h.refresh(d, seed);
        self.costs.preprocess += fresh.build_work.get();
        *h = fresh;
        self.needs_refresh = false;
        true
    }

    fn exhausted(&self) -> bool {
        self.needs_refresh || self.handle.as_ref().is_some_and(|h| h.exhausted())
    }

    fn costs(&self) -> CostCounters {
        self.costs
    }

    fn spec(&self) -> EstimatorSpec {
        EstimatorSpec {
            name: "effres",
            gamma: 1.0 + self.eps.max(f64::EPSILON),
            refresh_capable: true,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;

    fn grid_state() -> GraphState {
        // 3x3 grid graph.
        let mut g = Graph::new(9);
        for r in 0..3 {
            for c in 0..3 {
                let v = 3 * r + c;
                if c + 1 < 3 {
                    g.insert_edge_f64(v, v + 1, 1.0).unwrap();
                }
                if r + 1 < 3 {
                    g.insert_edge_f64(v, v + 3, 1.0).unwrap();
                }
            }
        }
        GraphState::new(g)
    }

    #[test]
    fn exact_mode_returns_true_resistance() {
        let mut st = grid_state();
        st.pair = (0, 8);
        let mut e = EffResEstimator::standalone(0.0, SparsifyConfig::default());
        e.reset(&st, 5);
        let truth = effective_resistance_exact(&st.graph, 0, 8).unwrap();
        assert!((e.query() - truth).abs() < 1e-12);
    }

    #[test]
    fn pair_register_is_an_update() {
        let st = grid_state();
        let mut e = EffResEstimator::standalone(0.0, SparsifyConfig::default());
        e.reset(&st, 5);
        e.update(&GraphOp::SetPair { s: 2, t: 6 });
        let truth = effective_resistance_exact(&st.graph, 2, 6).unwrap();
        assert!((e.peek() - truth).abs() < 1e-12);
        e.update(&GraphOp::SetPair { s: 4, t: 4 });
        assert_eq!(e.peek(), 0.0);
    }

    #[test]
    fn paper_constants_give_one_sided_accuracy() {
        // With the default sample constant every p̃ is 1, so H = G and the
        // margin keeps the answer inside [R, (1+eps)R].
        let mut st = grid_state();
        st.pair = (0, 8);
        let mut e = EffResEstimator::standalone(0.25, SparsifyConfig::default());
        e.reset(&st, 9);
        let truth = effective_resistance_exact(&st.graph, 0, 8).unwrap();
        let ans = e.peek();
        assert!(ans >= truth - 1e-12 && ans <= 1.25 * truth + 1e-12);
        assert!(e.spec().refresh_capable);
    }

    #[test]
    fn refresh_redraws_randomness() {
        let mut g = Graph::new(16);
        for u in 0..16 {
            for v in u + 1..16 {
                g.insert_edge_f64(u, v, 1.0).unwrap();
            }
        }
        let mut st = GraphState::new(g);
        st.pair = (0, 15);
        let cfg = SparsifyConfig { sample_const: 0.08, phi: 0.4, ..Default::default() };
        let mut e = EffResEstimator::standalone(0.5, cfg);
        e.reset(&st, 9);
        let before = e.handle.as_ref().unwrap().graph().edges();
        assert!(e.refresh(123));
        let after = e.handle.as_ref().unwrap().graph().edges();
        assert_ne!(before, after);
    }
}
