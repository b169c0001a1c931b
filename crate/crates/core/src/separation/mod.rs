//! Cost-accounted oblivious/adaptive separation simulations over a simulated
//! random oracle.
//!
//! The oracle is a seeded keyed pseudorandom function behind an access API
//! that charges one cost unit per block read — no bit is readable without
//! the counter moving. Every cost claim in this module is an identity over
//! those counters.

mod boxes;
mod lob;
mod oracle;

pub use boxes::{avg_boxes_oblivious, run_avg_boxes_trial, AvgBoxesReport, BoxCipher, BoxesScheme, Query};
pub use lob::{
    lob_adaptive_game, lob_oblivious, AdaptiveAlgorithm, LobAdaptiveReport, LobObliviousReport,
};
pub use oracle::{CostedOracle, HFunction};

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum SeparationError {
    #[error("malformed box: {0}")]
    Decode(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
