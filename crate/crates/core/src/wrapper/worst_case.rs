//! Worst-case staggering: two farms in odd/even phases.
//!
//! The active farm answers queries while the standby farm is rebuilt a few
//! copies per step on the current input, so no single step pays a whole
//! farm build. At each phase boundary the farms swap. Answers are identical
//! in law to the plain wrapper on oblivious scripts because each copy's
//! sampling law depends only on the current input, not on when the copy was
//! initialized.

use super::{RobustWrapper, WrapperError, WrapperParams};
use crate::estimators::{DynInput, Estimator};
use crate::rng::SeedStream;

pub struct WorstCaseWrapper<E: Estimator> {
    active: RobustWrapper<E>,
    standby: Vec<E>,
    prototype: E,
    shadow: E::Input,
    params: WrapperParams,
    phase_len: u64,
    step_in_phase: u64,
    seeds: SeedStream,
    current_step_work: u64,
    last_total: u64,
    /// Measured work per completed step (update + query + rebuild chunk).
    pub per_step_work: Vec<u64>,
    pub phases_completed: u64,
}

impl<E: Estimator> WorstCaseWrapper<E> {
    pub fn new(
        prototype: &E,
        input: &E::Input,
        params: WrapperParams,
        master_seed: u64,
    ) -> Self {
        let mut seeds = SeedStream::new(master_seed);
        let phase_len = params.t_phase;
        let mut inner_params = params.clone();
        inner_params.auto_restart = false;
        let active = RobustWrapper::new(prototype, input, inner_params, seeds.next_seed());
        let last_total = active.total_cost().grand_total();
        Self {
            active,
            standby: Vec::new(),
            prototype: prototype.clone(),
            shadow: input.clone(),
            params,
            phase_len,
            step_in_phase: 0,
            seeds,
            current_step_work: 0,
            last_total,
            per_step_work: Vec::new(),
            phases_completed: 0,
        }
    }

    fn total_work(&self) -> u64 {
        self.active.total_cost().grand_total()
            + self.standby.iter().map(|c| c.costs().grand_total()).sum::<u64>()
    }

    fn absorb_work(&mut self) {
        let now = self.total_work();
        self.current_step_work += now - self.last_total;
        self.last_total = now;
    }

    /// Number of standby copies that must exist after `step` steps of the
    /// phase, spreading the farm build evenly.
    fn build_target(&self, step: u64) -> usize {
        let c = self.params.c as u64;
        (c * step).div_ceil(self.phase_len).min(c) as usize
    }

    pub fn update(&mut self, op: &E::Update) -> Result<(), WrapperError> {
        self.shadow.apply(op).expect("game validates updates");
        self.active.update(op)?;
        for copy in &mut self.standby {
            copy.update(op);
        }
        self.absorb_work();
        Ok(())
    }

    /// Answer the step's query, do this step's slice of standby rebuilding,
    /// and close the step's work accounting.
    pub fn query(&mut self) -> Result<f64, WrapperError> {
        let out = self.active.query()?;
        self.step_in_phase += 1;
        let target = self.build_target(self.step_in_phase);
        while self.standby.len() < target {
            let mut copy = self.prototype.clone();
            copy.reset(&self.shadow, self.seeds.next_seed());
            self.standby.push(copy);
        }
        self.absorb_work();
        if self.step_in_phase >= self.phase_len {
            self.swap();
        }
        self.per_step_work.push(std::mem::take(&mut self.current_step_work));
        Ok(out)
    }

    fn swap(&mut self) {
        let mut inner_params = self.params.clone();
        inner_params.auto_restart = false;
        let copies = std::mem::take(&mut self.standby);
        self.active = RobustWrapper::from_parts(
            copies,
            self.shadow.clone(),
            inner_params,
            self.seeds.next_seed(),
        );
        self.step_in_phase = 0;
        self.phases_completed += 1;
        self.last_total = self.total_work();
    }

    pub fn copy_answers(&self) -> Vec<f64> {
        self.active.copy_answers()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::estimators::{GraphOp, GraphState, MincutEstimator};
    use crate::graph::Graph;
    use crate::wrapper::{derive_params, WrapperConstants};

    fn ring_state(n: usize, w: u64) -> GraphState {
        let mut g = Graph::new(n);
        for u in 0..n {
            g.insert_edge_f64(u, (u + 1) % n, w as f64).unwrap();
        }
        GraphState::new(g)
    }

    #[test]
    fn phase_boundaries_and_smooth_work() {
        let st = ring_state(24, 6);
        let proto = MincutEstimator::new(0.5, 0.25);
        let params = derive_params(20, 64.0, 0.5, 0.1, WrapperConstants::pinned(16, 4)).unwrap();
        let mut w = WorstCaseWrapper::new(&proto, &st, params, 3);
        let steps = 200u64; // ten phases
        for i in 0..steps {
            let u = (i % 24) as usize;
            let v = ((i + 1) % 24) as usize;
            w.update(&GraphOp::Delete { u, v }).unwrap();
            w.query().unwrap();
            let op = GraphOp::Insert { u, v, w: 6 };
            w.update(&op).unwrap();
            w.query().unwrap();
        }
        assert_eq!(w.phases_completed, 2 * steps / 20);
        let work = &w.per_step_work;
        let avg = work.iter().sum::<u64>() as f64 / work.len() as f64;
        let max = *work.iter().max().unwrap() as f64;
        assert!(max < 2.0 * avg, "max step work {max} vs avg {avg}");
    }
}
