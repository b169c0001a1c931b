//! Player adapters: a bare estimator, a robust wrapper, and a worst-case
//! staggered wrapper, all answering one query per round.

use super::game::{Player, PlayerStep};
use crate::estimators::Estimator;
use crate::wrapper::{RobustWrapper, WorstCaseWrapper};

/// A single oblivious estimator played directly against the adversary — the
/// attack target.
pub struct SingleCopyPlayer<E: Estimator> {
    pub estimator: E,
}

impl<E: Estimator> SingleCopyPlayer<E> {
    pub fn new(prototype: &E, input: &E::Input, seed: u64) -> Self {
        let mut estimator = prototype.clone();
        estimator.reset(input, seed);
        Self { estimator }
    }
}

impl<E: Estimator> Player<E::Update> for SingleCopyPlayer<E> {
    fn process(&mut self, op: &E::Update) -> PlayerStep {
        self.estimator.update(op);
        PlayerStep { output: self.estimator.query(), refreshed: false }
    }

    fn copy_answers(&self) -> Option<Vec<f64>> {
        Some(vec![self.estimator.peek()])
    }

    fn work_total(&self) -> u64 {
        self.estimator.costs().grand_total()
    }
}

/// The robust wrapper as a player.
pub struct WrappedPlayer<E: Estimator> {
    pub wrapper: RobustWrapper<E>,
}

impl<E: Estimator> WrappedPlayer<E> {
    pub fn new(wrapper: RobustWrapper<E>) -> Self {
        Self { wrapper }
    }
}

impl<E: Estimator> Player<E::Update> for WrappedPlayer<E> {
    fn process(&mut self, op: &E::Update) -> PlayerStep {
        let refreshed = self.wrapper.update(op).expect("auto-restart handles phases");
        let output = self.wrapper.query().expect("auto-restart handles phases");
        PlayerStep { output, refreshed }
    }

    fn copy_answers(&self) -> Option<Vec<f64>> {
        Some(self.wrapper.copy_answers())
    }

    fn work_total(&self) -> u64 {
        self.wrapper.total_cost().grand_total()
    }
}

/// The odd/even staggered wrapper as a player.
pub struct WorstCasePlayer<E: Estimator> {
    pub wrapper: WorstCaseWrapper<E>,
}

impl<E: Estimator> Player<E::Update> for WorstCasePlayer<E> {
    fn process(&mut self, op: &E::Update) -> PlayerStep {
        let phases_before = self.wrapper.phases_completed;
        self.wrapper.update(op).expect("phase swaps are internal");
        let output = self.wrapper.query().expect("phase swaps are internal");
        PlayerStep { output, refreshed: self.wrapper.phases_completed > phases_before }
    }

    fn copy_answers(&self) -> Option<Vec<f64>> {
        Some(self.wrapper.copy_answers())
    }
}
