//! Expander decomposition with a change counter, per-piece edge-sampling
//! machinery (approximate degrees, ownership, efficient subset sampling), and
//! the refreshable sparsifier built from it.
//!
//! The decomposition maintains edge-disjoint certified φ-expander pieces
//! covering the current edge set. Updates produce a list of piece-level
//! changes of three kinds (edge/isolated-vertex deletions inside a piece,
//! piece removal, piece addition); `cnt` counts the edge-granular changes.
//! A sparsifier handle issued by `sparsify(t)` samples every piece and stays
//! valid until `cnt` has grown by `t`; refreshing re-samples from the current
//! pieces with fresh randomness at cost proportional to the vertex-occurrence
//! total, independent of the edge count.

mod decomp;
mod handle;
mod sample;

pub use decomp::{
    decompose, edge_change_count, Certificate, ExpanderDecomposition, Piece, PieceChange, PieceId,
};
pub use handle::{sparsify, SparsifierHandle};
pub use sample::{
    approx_degree, piece_sampling_prob, piece_sampling_prob_with_const, subset_sample,
    OwnershipIndex,
};

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum SparsifyError {
    #[error("invalid update: {0}")]
    InvalidUpdate(String),
    #[error("sparsifier budget exhausted: consumed {consumed} of {budget}")]
    BudgetExhausted { consumed: u64, budget: u64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

/// Knobs for decomposition and sampling. Defaults are the paper constants;
/// experiments that need visible sampling at desk scale shrink
/// `sample_const`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SparsifyConfig {
    /// Conductance target φ for certified pieces.
    pub phi: f64,
    /// Sparsifier quality ε.
    pub eps: f64,
    /// Constant in the sampling probability; paper value 24.
    pub sample_const: f64,
    /// Constant in the `Σ|V(G_i)| ≤ C·n·log³n` cover bound.
    pub cover_const: f64,
    /// A piece is rebuilt once its deletions exceed this fraction of its
    /// build-time edge count.
    pub rebuild_fraction: f64,
    /// Pieces up to this many vertices are certified by exact enumeration;
    /// larger ones get a spectral sweep certificate.
    pub exact_cert_limit: usize,
    /// Power-iteration steps for the sweep certificate.
    pub sweep_iters: usize,
}

impl Default for SparsifyConfig {
    fn default() -> Self {
        Self {
            phi: 0.2,
            eps: 0.25,
            sample_const: 24.0,
            cover_const: 8.0,
            rebuild_fraction: 0.25,
            exact_cert_limit: 16,
            sweep_iters: 150,
        }
    }
}
