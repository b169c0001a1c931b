//! The two-player game loop.
//!
//! Each round the adversary chooses an update (oblivious adversaries replay a
//! pre-recorded script; adaptive ones see the full transcript so far;
//! blinking ones see it truncated at the most recent refresh boundary), the
//! player processes it and emits its output, and the loop scores the output
//! against an exact oracle. The transcript carries only what the adversary
//! model is allowed to observe — never sampled indices or seeds.

use crate::estimators::DynInput;
use serde::Serialize;

/// One recorded round.
#[derive(Debug, Clone, Serialize)]
pub struct TranscriptStep<U> {
    pub update: U,
    pub output: Option<f64>,
}

/// The adversary-visible record of a run.
#[derive(Debug, Clone, Serialize)]
pub struct Transcript<U> {
    pub x0: String,
    pub steps: Vec<TranscriptStep<U>>,
    /// Step indices at which the player crossed a refresh boundary while
    /// processing that step's update.
    pub refreshes: Vec<usize>,
}

/// Read-only view handed to strategies; `run_game` truncates it according to
/// the adversary model, which is the whole information barrier.
#[derive(Debug, Clone, Copy)]
pub struct TranscriptView<'a, U> {
    pub x0: &'a str,
    pub steps: &'a [TranscriptStep<U>],
    pub refreshes: &'a [usize],
}

/// A stateful update-choosing strategy.
pub trait Strategy<U> {
    fn next_move(&mut self, view: TranscriptView<'_, U>) -> U;
}

pub enum AdversaryModel<U> {
    /// Pre-recorded script, fixed before the run.
    Oblivious(Vec<U>),
    /// Sees the full transcript.
    Adaptive(Box<dyn Strategy<U>>),
    /// Sees the transcript only up to the most recent refresh boundary.
    Blinking(Box<dyn Strategy<U>>),
}

pub struct PlayerStep {
    pub output: f64,
    pub refreshed: bool,
}

/// The algorithm side of the game.
pub trait Player<U> {
    fn process(&mut self, op: &U) -> PlayerStep;

    /// Instrumentation: per-copy answers for accuracy measurement. Never
    /// exposed to the adversary.
    fn copy_answers(&self) -> Option<Vec<f64>> {
        None
    }

    /// Abstract work performed so far.
    fn work_total(&self) -> u64 {
        0
    }
}

/// One-sided accuracy indicator `g ≤ z ≤ factor·g` (sign-aware; for negative
/// `g` the magnitudes are compared the same way).
pub fn accurate(g: f64, z: f64, factor: f64) -> bool {
    if g == 0.0 {
        return z == 0.0;
    }
    if g.is_infinite() || z.is_infinite() {
        return g.is_infinite() && z.is_infinite() && g.signum() == z.signum();
    }
    let tol = 1e-9 * g.abs();
    if g > 0.0 {
        z >= g - tol && z <= factor * g + tol
    } else {
        z <= g + tol && z >= factor * g - tol
    }
}

/// Per-run metrics, all computed from exact oracles.
#[derive(Debug, Clone, Default, Serialize)]
pub struct Metrics {
    pub true_values: Vec<f64>,
    pub acc: Vec<bool>,
    /// Fraction of copies that are γ-accurate, when the player exposes them.
    pub copy_fractions: Vec<f64>,
    pub work: Vec<u64>,
    pub violation: Option<String>,
}

impl Metrics {
    pub fn accuracy_frequency(&self) -> f64 {
        if self.acc.is_empty() {
            return 1.0;
        }
        self.acc.iter().filter(|&&b| b).count() as f64 / self.acc.len() as f64
    }

    pub fn all_steps_accurate(&self) -> bool {
        self.acc.iter().all(|&b| b)
    }

    pub fn min_copy_fraction(&self) -> f64 {
        self.copy_fractions.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

pub struct GameSpec<'a, I: DynInput> {
    pub initial: I,
    /// Exact ground truth for the current input.
    pub oracle: &'a dyn Fn(&I) -> f64,
    /// Acceptance factor for the player's outputs (γ for raw estimators,
    /// γ(1+α) for wrapped ones).
    pub accept_factor: f64,
    /// γ used to score individual copies when the player exposes them.
    pub copy_gamma: Option<f64>,
    pub steps: usize,
}

/// Run the game; returns the transcript and oracle-scored metrics.
pub fn run_game<I: DynInput>(
    player: &mut dyn Player<I::Update>,
    adversary: &mut AdversaryModel<I::Update>,
    spec: &GameSpec<'_, I>,
) -> (Transcript<I::Update>, Metrics)
where
    I::Update: Clone,
{
    let mut input = spec.initial.clone();
    let mut transcript =
        Transcript { x0: spec.initial.describe(), steps: Vec::new(), refreshes: Vec::new() };
    let mut metrics = Metrics::default();
    for step in 0..spec.steps {
        let update = match adversary {
            AdversaryModel::Oblivious(script) => {
                let Some(u) = script.get(step) else { break };
                u.clone()
            }
            AdversaryModel::Adaptive(strategy) => strategy.next_move(TranscriptView {
                x0: &transcript.x0,
                steps: &transcript.steps,
                refreshes: &transcript.refreshes,
            }),
            AdversaryModel::Blinking(strategy) => {
                let cutoff = transcript.refreshes.last().copied().unwrap_or(0);
                strategy.next_move(TranscriptView {
                    x0: &transcript.x0,
                    steps: &transcript.steps[..cutoff],
                    refreshes: &transcript.refreshes,
                })
            }
        };
        if let Err(e) = input.apply(&update) {
            metrics.violation = Some(format!("step {step}: illegal update: {e}"));
            break;
        }
        let ps = player.process(&update);
        if ps.refreshed {
            transcript.refreshes.push(step);
        }
        let g = (spec.oracle)(&input);
        metrics.true_values.push(g);
        metrics.acc.push(accurate(g, ps.output, spec.accept_factor));
        if let Some(gamma) = spec.copy_gamma {
            if let Some(answers) = player.copy_answers() {
                let ok = answers.iter().filter(|&&a| accurate(g, a, gamma)).count();
                metrics.copy_fractions.push(ok as f64 / answers.len() as f64);
            }
        }
        metrics.work.push(player.work_total());
        transcript.steps.push(TranscriptStep { update, output: Some(ps.output) });
    }
    (transcript, metrics)
}
