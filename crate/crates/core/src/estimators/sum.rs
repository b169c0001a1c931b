//! Sum of a dynamic number multiset via Bernoulli subsampling — the minimal,
//! non-graph instance of the estimation game and the cleanest unit-test
//! target.

use super::{Estimator, EstimatorSpec};
use crate::counters::CostCounters;
use crate::rng::{rng_from_seed, Rng};
use rand::Rng as _;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Keyed multiset updates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum SumOp {
    Insert { id: u64, value: f64 },
    Delete { id: u64 },
}

pub type Multiset = BTreeMap<u64, f64>;

pub fn apply_sum_op(set: &mut Multiset, op: &SumOp) -> Result<(), String> {
    match *op {
        SumOp::Insert { id, value } => {
            if set.insert(id, value).is_some() {
                return Err(format!("id {id} already present"));
            }
        }
        SumOp::Delete { id } => {
            if set.remove(&id).is_none() {
                return Err(format!("id {id} not present"));
            }
        }
    }
    Ok(())
}

pub fn exact_sum(set: &Multiset) -> f64 {
    set.values().sum()
}

#[derive(Debug, Clone)]
pub struct SubsampleSumEstimator {
    rate: f64,
    eps: f64,
    kept: BTreeMap<u64, f64>,
    rng: Rng,
    costs: CostCounters,
}

impl SubsampleSumEstimator {
    pub fn new(rate: f64, eps: f64) -> Self {
        assert!(rate > 0.0 && rate <= 1.0);
        assert!(eps > 0.0);
        Self {
            rate,
            eps,
            kept: BTreeMap::new(),
            rng: rng_from_seed(0),
            costs: CostCounters::default(),
        }
    }

    fn answer(&self) -> f64 {
        let margin = if self.rate < 1.0 { 1.0 + self.eps / 2.0 } else { 1.0 };
        self.kept.values().sum::<f64>() / self.rate * margin
    }
}

impl Estimator for SubsampleSumEstimator {
    type Input = Multiset;
    type Update = SumOp;

    fn reset(&mut self, input: &Multiset, seed: u64) {
        self.rng = rng_from_seed(seed);
        self.kept.clear();
        for (&id, &v) in input {
            self.costs.preprocess += 1;
            if self.rate >= 1.0 || self.rng.random::<f64>() < self.rate {
                self.kept.insert(id, v);
            }
        }
    }

    fn update(&mut self, op: &SumOp) {
        self.costs.update += 1;
        match *op {
            SumOp::Insert { id, value } => {
                if self.rate >= 1.0 || self.rng.random::<f64>() < self.rate {
                    self.kept.insert(id, value);
                }
            }
            SumOp::Delete { id } => {
                self.kept.remove(&id);
            }
        }
    }

    fn query(&mut self) -> f64 {
        self.costs.query += 1;
        self.answer()
    }

    fn peek(&self) -> f64 {
        self.answer()
    }

    fn costs(&self) -> CostCounters {
        self.costs
    }

    fn spec(&self) -> EstimatorSpec {
        EstimatorSpec { name: "sum", gamma: 1.0 + self.eps, refresh_capable: false }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rate_one_is_exact_running_sum() {
        let mut set = Multiset::new();
        for i in 0..10u64 {
            apply_sum_op(&mut set, &SumOp::Insert { id: i, value: i as f64 }).unwrap();
        }
        let mut e = SubsampleSumEstimator::new(1.0, 0.2);
        e.reset(&set, 3);
        assert_eq!(e.query(), 45.0);
        e.update(&SumOp::Delete { id: 9 });
        assert_eq!(e.query(), 36.0);
        e.update(&SumOp::Insert { id: 100, value: 4.0 });
        assert_eq!(e.query(), 40.0);
    }

    #[test]
    fn multiset_ops_validate() {
        let mut set = Multiset::new();
        apply_sum_op(&mut set, &SumOp::Insert { id: 1, value: 2.0 }).unwrap();
        assert!(apply_sum_op(&mut set, &SumOp::Insert { id: 1, value: 2.0 }).is_err());
        assert!(apply_sum_op(&mut set, &SumOp::Delete { id: 7 }).is_err());
    }

    #[test]
    fn deterministic_given_seed() {
        let set: Multiset = (0..100u64).map(|i| (i, 1.0)).collect();
        let mut a = SubsampleSumEstimator::new(0.5, 0.2);
        let mut b = SubsampleSumEstimator::new(0.5, 0.2);
        a.reset(&set, 9);
        b.reset(&set, 9);
        assert_eq!(a.query(), b.query());
    }
}
