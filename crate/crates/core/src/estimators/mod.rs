//! Oblivious randomized dynamic estimators behind one shared interface.
//!
//! Each estimator answers a single number `g(x)` for the current input and,
//! on a run whose updates are independent of its random bits, returns a
//! value in `[g(x), γ·g(x)]` with probability at least 9/10. Sampling-based
//! estimators multiply their unbiased estimate by a small margin so the
//! guarantee is one-sided. All randomness comes from the seed passed to
//! `reset`/`refresh`; queries draw none, so instrumentation can `peek`
//! without perturbing a run.

mod effres;
mod mincut;
mod distance;
mod sum;

pub use distance::LandmarkDistanceEstimator;
pub use effres::EffResEstimator;
pub use mincut::MincutEstimator;
pub use sum::{apply_sum_op, exact_sum, Multiset, SubsampleSumEstimator, SumOp};

use crate::counters::CostCounters;
use crate::graph::{Graph, GraphError, GraphUpdate};
use serde::{Deserialize, Serialize};

/// Graph-problem update: edge operations plus the `(src, snk)` register that
/// turns pair queries into single-number estimation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GraphOp {
    Insert { u: usize, v: usize, w: u64 },
    Delete { u: usize, v: usize },
    SetPair { s: usize, t: usize },
}

impl GraphOp {
    pub fn from_update(u: &GraphUpdate) -> Self {
        match *u {
            GraphUpdate::Insert { u, v, w } => GraphOp::Insert { u, v, w },
            GraphUpdate::Delete { u, v } => GraphOp::Delete { u, v },
        }
    }
}

/// Dynamic graph input together with the `(src, snk)` register.
#[derive(Debug, Clone, PartialEq)]
pub struct GraphState {
    pub graph: Graph,
    pub pair: (usize, usize),
}

impl GraphState {
    pub fn new(graph: Graph) -> Self {
        Self { graph, pair: (0, 0) }
    }

    pub fn apply(&mut self, op: &GraphOp) -> Result<(), GraphError> {
        match *op {
            GraphOp::Insert { u, v, w } => {
                self.graph.apply_update(&GraphUpdate::Insert { u, v, w })
            }
            GraphOp::Delete { u, v } => self.graph.apply_update(&GraphUpdate::Delete { u, v }),
            GraphOp::SetPair { s, t } => {
                if s >= self.graph.n() || t >= self.graph.n() {
                    return Err(GraphError::InvalidArgument("pair out of range".into()));
                }
                self.pair = (s, t);
                Ok(())
            }
        }
    }
}

/// Static description of an estimator.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EstimatorSpec {
    pub name: &'static str,
    /// One-sided approximation factor γ ≥ 1.
    pub gamma: f64,
    pub refresh_capable: bool,
}

/// Inputs that evolve under a stream of updates.
pub trait DynInput: Clone {
    type Update: Clone;
    fn apply(&mut self, op: &Self::Update) -> Result<(), String>;
    /// Compact textual form for transcripts.
    fn describe(&self) -> String;
}

impl DynInput for GraphState {
    type Update = GraphOp;

    fn apply(&mut self, op: &GraphOp) -> Result<(), String> {
        GraphState::apply(self, op).map_err(|e| e.to_string())
    }

    fn describe(&self) -> String {
        format!(
            "pair {} {}\n{}",
            self.pair.0,
            self.pair.1,
            crate::graph::write_graph(&self.graph)
        )
    }
}

impl DynInput for Multiset {
    type Update = SumOp;

    fn apply(&mut self, op: &SumOp) -> Result<(), String> {
        apply_sum_op(self, op)
    }

    fn describe(&self) -> String {
        let body: Vec<String> = self.iter().map(|(id, v)| format!("{id}:{v}")).collect();
        format!("multiset {}", body.join(" "))
    }
}

/// The shared dynamic-estimator contract.
pub trait Estimator: Clone {
    type Input: DynInput<Update = Self::Update>;
    type Update: Clone;

    /// Re-initialize on `input` with fresh randomness derived from `seed`.
    fn reset(&mut self, input: &Self::Input, seed: u64);

    fn update(&mut self, op: &Self::Update);

    /// Answer the current estimate, charging query cost.
    fn query(&mut self) -> f64;

    /// Measurement-only answer: identical value to `query`, no cost charged.
    /// Never feeds back into the game.
    fn peek(&self) -> f64;

    /// Cheap re-randomization where supported; returns false when the
    /// estimator can only be fully reset.
    fn refresh(&mut self, _seed: u64) -> bool {
        false
    }

    /// Signals the wrapper that this copy's internal budget is spent and the
    /// phase must end (sparsifier-backed estimators).
    fn exhausted(&self) -> bool {
        false
    }

    fn costs(&self) -> CostCounters;

    fn spec(&self) -> EstimatorSpec;
}
