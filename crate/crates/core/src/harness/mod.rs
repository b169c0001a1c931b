//! Two-player game harness: adversary models, transcripts, concrete attacks,
//! experiment drivers, and graph families.

pub mod attacks;
pub mod experiments;
pub mod families;
mod game;
mod players;

pub use game::{
    accurate, run_game, AdversaryModel, GameSpec, Metrics, Player, PlayerStep, Strategy,
    Transcript, TranscriptStep, TranscriptView,
};
pub use players::{SingleCopyPlayer, WorstCasePlayer, WrappedPlayer};
