//! The generic oblivious-to-adaptive reduction.
//!
//! A `RobustWrapper` keeps `c` copies of an oblivious estimator, each with
//! its own random stream (together the protected database). Every update is
//! fed to every copy. A query samples `s` copy indices uniformly with
//! repetition — the indices stay hidden — queries those copies, rounds each
//! answer up onto the grid, and returns their private median. After `T`
//! queries the phase ends and every copy is reset with fresh randomness on
//! the current input (refresh-capable copies are refreshed instead).

mod params;
mod pipeline;
mod worst_case;

pub use params::{derive_params, WrapperConstants, WrapperParams};
pub use pipeline::{pipeline_effres, pipeline_mincut, SparsifiedEffRes, SparsifiedMincut};
pub use worst_case::WorstCaseWrapper;

use crate::counters::CostCounters;
use crate::dp::private_median;
use crate::estimators::{DynInput, Estimator};
use crate::rng::{rng_from_seed, Rng, SeedStream};
use rand::Rng as _;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum WrapperError {
    #[error("phase exhausted after {0} queries; restart required")]
    PhaseExhausted(u64),
}

/// Wrapper-side metrics; none of these leak sampled indices.
#[derive(Debug, Clone, Copy, Default, Serialize)]
pub struct WrapperMetrics {
    pub queries: u64,
    pub updates: u64,
    pub restarts: u64,
    pub clamped_outputs: u64,
}

pub struct RobustWrapper<E: Estimator> {
    pub params: WrapperParams,
    copies: Vec<E>,
    shadow: E::Input,
    queries_in_phase: u64,
    phase: u64,
    seeds: SeedStream,
    rng: Rng,
    pub metrics: WrapperMetrics,
}

impl<E: Estimator> RobustWrapper<E> {
    /// Build the farm by cloning `prototype` and resetting each copy with an
    /// independent seed on `input`.
    pub fn new(prototype: &E, input: &E::Input, params: WrapperParams, master_seed: u64) -> Self {
        let mut seeds = SeedStream::new(master_seed);
        let rng = rng_from_seed(seeds.next_seed());
        let mut copies = Vec::with_capacity(params.c);
        for _ in 0..params.c {
            let mut copy = prototype.clone();
            copy.reset(input, seeds.next_seed());
            copies.push(copy);
        }
        Self {
            params,
            copies,
            shadow: input.clone(),
            queries_in_phase: 0,
            phase: 0,
            seeds,
            rng,
            metrics: WrapperMetrics::default(),
        }
    }

    /// Assemble a wrapper from already-initialized copies (the worst-case
    /// staggering path, where the farm was rebuilt incrementally).
    pub(crate) fn from_parts(
        copies: Vec<E>,
        shadow: E::Input,
        params: WrapperParams,
        master_seed: u64,
    ) -> Self {
        let mut seeds = SeedStream::new(master_seed);
        let rng = rng_from_seed(seeds.next_seed());
        Self {
            params,
            copies,
            shadow,
            queries_in_phase: 0,
            phase: 0,
            seeds,
            rng,
            metrics: WrapperMetrics::default(),
        }
    }

    pub fn phase(&self) -> u64 {
        self.phase
    }

    pub fn queries_in_phase(&self) -> u64 {
        self.queries_in_phase
    }

    pub fn copy_count(&self) -> usize {
        self.copies.len()
    }

    pub fn copies(&self) -> &[E] {
        &self.copies
    }

    /// Feed one update to every copy; returns whether a refresh boundary was
    /// crossed. Updates do not consume phase budget; privacy loss happens
    /// only at outputs.
    pub fn update(&mut self, op: &E::Update) -> Result<bool, WrapperError> {
        self.shadow.apply(op).expect("game validates updates");
        let mut refreshed = false;
        if self.copies.iter().any(|c| c.exhausted()) {
            if !self.params.auto_restart {
                return Err(WrapperError::PhaseExhausted(self.queries_in_phase));
            }
            self.restart();
            refreshed = true;
        }
        self.metrics.updates += 1;
        for copy in &mut self.copies {
            copy.update(op);
        }
        // A sparsifier-backed copy may exhaust its budget mid-update; end the
        // phase right away so the next query answers from fresh handles.
        if self.copies.iter().any(|c| c.exhausted()) {
            if !self.params.auto_restart {
                return Err(WrapperError::PhaseExhausted(self.queries_in_phase));
            }
            self.restart();
            refreshed = true;
        }
        Ok(refreshed)
    }

    /// Answer one query with the subsampled private median.
    pub fn query(&mut self) -> Result<f64, WrapperError> {
        if self.queries_in_phase >= self.params.t_phase {
            if !self.params.auto_restart {
                return Err(WrapperError::PhaseExhausted(self.queries_in_phase));
            }
            self.restart();
        }
        self.queries_in_phase += 1;
        self.metrics.queries += 1;
        // Hidden sampled indices: drawn from the wrapper's private stream and
        // never exposed in any output or transcript.
        let mut rounded = Vec::with_capacity(self.params.s);
        for _ in 0..self.params.s {
            let j = self.rng.random_range(0..self.copies.len());
            let out = self.copies[j].query();
            let r = self.params.grid.round(out);
            if r.clamped {
                self.metrics.clamped_outputs += 1;
            }
            rounded.push(r.value);
        }
        let med_cfg = self.params.median_config();
        let out = private_median(&rounded, &self.params.grid, &med_cfg, &mut self.rng)
            .expect("rounded values are grid points");
        Ok(out)
    }

    /// End the phase: refresh refresh-capable copies, reset the rest with
    /// fresh randomness on the current input.
    pub fn restart(&mut self) {
        for i in 0..self.copies.len() {
            let seed = self.seeds.next_seed();
            if !self.copies[i].refresh(seed) {
                self.copies[i].reset(&self.shadow, seed);
            }
        }
        self.phase += 1;
        self.queries_in_phase = 0;
        self.metrics.restarts += 1;
    }

    /// Measurement-only answers of every copy (instrumentation; never fed
    /// back to the adversary).
    pub fn copy_answers(&self) -> Vec<f64> {
        self.copies.iter().map(|c| c.peek()).collect()
    }

    pub fn copy_costs(&self) -> Vec<CostCounters> {
        self.copies.iter().map(|c| c.costs()).collect()
    }

    pub fn total_cost(&self) -> CostCounters {
        let mut total = CostCounters::default();
        for c in &self.copies {
            let cc = c.costs();
            total.preprocess += cc.preprocess;
            total.update += cc.update;
            total.query += cc.query;
        }
        total
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::estimators::{GraphOp, GraphState, MincutEstimator};
    use crate::graph::Graph;

    fn ring_state(n: usize, w: u64) -> GraphState {
        let mut g = Graph::new(n);
        for u in 0..n {
            g.insert_edge_f64(u, (u + 1) % n, w as f64).unwrap();
        }
        GraphState::new(g)
    }

    fn small_params(c: usize, s: usize, t: u64) -> WrapperParams {
        derive_params(t, 64.0, 0.5, 0.1, WrapperConstants::pinned(c, s)).unwrap()
    }

    #[test]
    fn updates_fan_out_to_every_copy() {
        let st = ring_state(8, 3);
        let proto = MincutEstimator::new(1.0, 0.25);
        let mut w = RobustWrapper::new(&proto, &st, small_params(3, 1, 10), 5);
        let before: Vec<u64> = w.copy_costs().iter().map(|c| c.update).collect();
        w.update(&GraphOp::Delete { u: 0, v: 1 }).unwrap();
        let after: Vec<u64> = w.copy_costs().iter().map(|c| c.update).collect();
        for i in 0..3 {
            assert_eq!(after[i], before[i] + 1);
        }
    }

    #[test]
    fn replay_is_bit_identical() {
        let st = ring_state(10, 5);
        let proto = MincutEstimator::new(0.5, 0.25);
        let run = |seed: u64| {
            let mut w = RobustWrapper::new(&proto, &st, small_params(8, 3, 5), seed);
            let mut outs = Vec::new();
            for i in 0..12u64 {
                if i % 3 == 0 {
                    w.update(&GraphOp::Delete { u: i as usize % 10, v: (i as usize + 1) % 10 })
                        .unwrap();
                    w.update(&GraphOp::Insert {
                        u: i as usize % 10,
                        v: (i as usize + 1) % 10,
                        w: 5,
                    })
                    .unwrap();
                }
                outs.push(w.query().unwrap());
            }
            outs
        };
        assert_eq!(run(77), run(77));
        assert_ne!(run(77), run(78));
    }

    #[test]
    fn unanimous_exact_copies_return_the_value() {
        // rho = 1 copies all answer the exact min cut of the ring, 2w = 8,
        // itself a grid point of (U=16, alpha=1). With every sampled value
        // equal, the mechanism misses only with the exponential tail
        // |X|·e^{-eps_med·s/4}, which s = 64 makes negligible.
        let st = ring_state(8, 4);
        let proto = MincutEstimator::new(1.0, 0.25);
        let params =
            derive_params(1000, 16.0, 1.0, 0.1, WrapperConstants::pinned(128, 64)).unwrap();
        assert!(params.grid.contains(8.0));
        let mut w = RobustWrapper::new(&proto, &st, params, 21);
        let mut hits = 0;
        let trials = 300;
        for _ in 0..trials {
            if (w.query().unwrap() - 8.0).abs() < 1e-12 {
                hits += 1;
            }
        }
        assert!(hits >= 295, "hits {hits}/{trials}");
    }

    #[test]
    fn phase_exhaustion_without_auto_restart_errors() {
        let st = ring_state(6, 2);
        let proto = MincutEstimator::new(1.0, 0.25);
        let mut params = small_params(4, 2, 3);
        params.auto_restart = false;
        let mut w = RobustWrapper::new(&proto, &st, params, 9);
        for _ in 0..3 {
            w.query().unwrap();
        }
        assert_eq!(w.query().unwrap_err(), WrapperError::PhaseExhausted(3));
        // Manual restart clears the phase.
        w.restart();
        assert_eq!(w.queries_in_phase(), 0);
        assert_eq!(w.phase(), 1);
        w.query().unwrap();
    }

    #[test]
    fn restart_resets_on_current_input() {
        let mut st = ring_state(6, 2);
        let proto = MincutEstimator::new(1.0, 0.25);
        let mut w = RobustWrapper::new(&proto, &st, small_params(4, 2, 100), 9);
        let op = GraphOp::Delete { u: 0, v: 1 };
        w.update(&op).unwrap();
        st.apply(&op).unwrap();
        w.restart();
        // After restart copies answer for the current (path) graph: min cut 2.
        assert_eq!(w.copy_answers(), vec![2.0; 4]);
    }
}
