//! Robust dynamic estimation against adaptive adversaries.
//!
//! The crate has three layers:
//!
//! * primitives: differential-privacy machinery ([`dp`]), an exact dynamic
//!   graph with slow ground-truth oracles ([`graph`]), and a refreshable
//!   expander-decomposition sparsifier ([`sparsify`]);
//! * the reduction: oblivious stand-in estimators ([`estimators`]) wrapped
//!   into adaptive-adversary-robust estimators by a copy farm that aggregates
//!   subsampled answers with a private median ([`wrapper`]);
//! * evaluation: a two-player game harness with concrete attack strategies
//!   ([`harness`]) and cost-accounted oblivious/adaptive separation
//!   simulations over a simulated random oracle ([`separation`]).
//!
//! Everything is driven by explicit seeds; a run is a pure function of its
//! configuration and master seed.

pub mod config;
pub mod counters;
pub mod dp;
pub mod estimators;
pub mod graph;
pub mod harness;
pub mod rng;
pub mod separation;
pub mod sparsify;
pub mod stats;
pub mod wrapper;

pub use counters::WorkCounter;
pub use dp::{OrderedGrid, PrivacyParams};
pub use graph::{Cut, Graph, GraphUpdate};
pub use rng::{child_seed, SeedStream};
pub use sparsify::{ExpanderDecomposition, SparsifierHandle};
pub use wrapper::{RobustWrapper, WrapperParams};
