//! Abstract work accounting.
//!
//! All cost claims in this crate are identities or comparisons over operation
//! counters (edges touched, oracle reads, samples drawn), never wall-clock
//! measurements.

use serde::Serialize;

/// Monotone operation counter.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct WorkCounter(pub u64);

impl WorkCounter {
    pub fn add(&mut self, units: u64) {
        self.0 += units;
    }

    pub fn get(&self) -> u64 {
        self.0
    }
}

/// Per-estimator cost counters standing in for preprocessing, update and
/// query times.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct CostCounters {
    pub preprocess: u64,
    pub update: u64,
    pub query: u64,
}

impl CostCounters {
    /// Preprocessing plus update work, the `t_total` analogue.
    pub fn total_maintenance(&self) -> u64 {
        self.preprocess + self.update
    }

    pub fn grand_total(&self) -> u64 {
        self.preprocess + self.update + self.query
    }
}
