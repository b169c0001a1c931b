//! Concrete adaptive attack strategies.
//!
//! These are estimator-specific and heuristic: the sampling-inference attack
//! against the min-cut stand-in, the landmark-isolation attack against the
//! distance stand-in, and the correlation attack against the subsampled sum.
//! Each reads only what its adversary model exposes through the transcript
//! view.

use super::game::{Strategy, TranscriptView};
use crate::estimators::{GraphOp, SumOp};

fn last_output<U>(view: &TranscriptView<'_, U>) -> Option<f64> {
    view.steps.last().and_then(|s| s.output)
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum BridgeStage {
    /// First move establishes a baseline reading.
    Baseline,
    /// Delete bridge edge `idx` and watch the drop.
    ProbeDelete(usize),
    /// Re-insert edge `idx` and learn its fresh sampled mass from the jump.
    ProbeInsert(usize),
    /// Permanently delete edges whose learned mass crossed the threshold.
    Cull,
    /// Toggle the dummy edge forever.
    Idle,
}

/// Sampling-inference attack on the bridged two-clique family.
///
/// A delete/re-insert probe of a bridge edge moves a sampling estimator's
/// output by `unit_scale` per sampled weight unit, revealing how much of the
/// edge the estimator kept. Edges whose fresh sampled mass is at least
/// `keep_threshold` are deleted for good; what stays is under-sampled, so the
/// estimate sits below the true cut for the rest of the run. Against `ρ = 1`
/// there is no randomness to infer and the attack never succeeds; against
/// the DP-wrapped farm the observable jumps are rounded medians that carry
/// almost no per-copy information.
pub struct MincutBridgeAttack {
    bridge: Vec<(usize, usize, u64)>,
    dummy: (usize, usize, u64),
    unit_scale: f64,
    keep_threshold: f64,
    min_present: usize,
    stage: BridgeStage,
    present: Vec<bool>,
    known_mass: Vec<f64>,
    dummy_present: bool,
    cull_queue: Vec<usize>,
}

impl MincutBridgeAttack {
    /// `unit_scale` is the expected output change per sampled weight unit of
    /// the target (`margin/ρ` for the sampling stand-in).
    pub fn new(
        bridge: Vec<(usize, usize, u64)>,
        dummy: (usize, usize, u64),
        unit_scale: f64,
        keep_threshold: f64,
        min_present: usize,
    ) -> Self {
        let n = bridge.len();
        Self {
            bridge,
            dummy,
            unit_scale,
            keep_threshold,
            min_present,
            stage: BridgeStage::Baseline,
            present: vec![true; n],
            known_mass: vec![0.0; n],
            dummy_present: true,
            cull_queue: Vec::new(),
        }
    }

    fn toggle_dummy(&mut self) -> GraphOp {
        let (u, v, w) = self.dummy;
        if self.dummy_present {
            self.dummy_present = false;
            GraphOp::Delete { u, v }
        } else {
            self.dummy_present = true;
            GraphOp::Insert { u, v, w }
        }
    }
}

impl Strategy<GraphOp> for MincutBridgeAttack {
    fn next_move(&mut self, view: TranscriptView<'_, GraphOp>) -> GraphOp {
        match self.stage {
            BridgeStage::Baseline => {
                self.stage = BridgeStage::ProbeDelete(0);
                self.toggle_dummy()
            }
            BridgeStage::ProbeDelete(i) => {
                let (u, v, _) = self.bridge[i];
                self.stage = BridgeStage::ProbeInsert(i);
                GraphOp::Delete { u, v }
            }
            BridgeStage::ProbeInsert(i) => {
                let (u, v, w) = self.bridge[i];
                self.stage = if i + 1 < self.bridge.len() {
                    BridgeStage::ProbeDelete(i + 1)
                } else {
                    BridgeStage::Cull
                };
                GraphOp::Insert { u, v, w }
            }
            BridgeStage::Cull => {
                // First visit: reconstruct, for every edge, the output drop
                // caused by its probe deletion and the jump caused by its
                // re-insertion. For a raw sampling target these disagree
                // (independent old/new sampled masses); for an exact target
                // or the DP-wrapped farm they match, meaning the side
                // channel carries nothing and culling would be blind.
                if self.cull_queue.is_empty() {
                    let probe_start = view.steps.len().saturating_sub(2 * self.bridge.len());
                    let mut disagreements = Vec::with_capacity(self.bridge.len());
                    for i in 0..self.bridge.len() {
                        let del_step = probe_start + 2 * i;
                        let out_at = |s: usize| -> f64 {
                            view.steps.get(s).and_then(|st| st.output).unwrap_or(0.0)
                        };
                        let before = if del_step == 0 { 0.0 } else { out_at(del_step - 1) };
                        let drop = (before - out_at(del_step)) / self.unit_scale;
                        let jump = (out_at(del_step + 1) - out_at(del_step)) / self.unit_scale;
                        self.known_mass[i] = jump;
                        disagreements.push((drop - jump).abs());
                    }
                    disagreements.sort_by(f64::total_cmp);
                    let median_disagreement = disagreements[disagreements.len() / 2];
                    if median_disagreement < 0.5 {
                        // No per-edge randomness visible; nothing to exploit.
                        self.stage = BridgeStage::Idle;
                        return self.toggle_dummy();
                    }
                    let mut rich: Vec<usize> = (0..self.bridge.len())
                        .filter(|&i| self.known_mass[i] >= self.keep_threshold)
                        .collect();
                    let budget = self.present.iter().filter(|&&p| p).count()
                        .saturating_sub(self.min_present);
                    rich.truncate(budget);
                    self.cull_queue = rich;
                    self.cull_queue.reverse();
                }
                match self.cull_queue.pop() {
                    Some(i) => {
                        let (u, v, _) = self.bridge[i];
                        self.present[i] = false;
                        if self.cull_queue.is_empty() {
                            self.stage = BridgeStage::Idle;
                        }
                        GraphOp::Delete { u, v }
                    }
                    None => {
                        self.stage = BridgeStage::Idle;
                        self.toggle_dummy()
                    }
                }
            }
            BridgeStage::Idle => self.toggle_dummy(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum LandmarkStage {
    ProbeA,
    ProbeB,
    Infer { z_a: f64 },
    IsolateSecond { target: usize },
    RestoreFirst { target: usize },
    RestoreSecond { target: usize },
}

/// Landmark-isolation attack on a unit cycle with one landmark.
///
/// The answer for an adjacent pair `(v, v+1)` is `d(v,l) + d(l,v+1)`, which
/// pins the landmark down to a reflection; a second adjacent-pair probe a
/// quarter turn away disambiguates (checked exhaustively against both
/// readings). The attacker then deletes the two incident cycle edges —
/// isolating the landmark and forcing a recommit — and restores them. Six
/// moves per campaign, one recommit each.
pub struct LandmarkCycleAttack {
    n: usize,
    stage: LandmarkStage,
    pub campaigns: u64,
}

impl LandmarkCycleAttack {
    pub fn new(n: usize) -> Self {
        assert!(n >= 8);
        Self { n, stage: LandmarkStage::ProbeA, campaigns: 0 }
    }

    fn cycle_dist(&self, a: usize, b: usize) -> f64 {
        let d = a.abs_diff(b);
        d.min(self.n - d) as f64
    }

    fn pair_answer(&self, s: usize, t: usize, l: usize) -> f64 {
        self.cycle_dist(s, l) + self.cycle_dist(l, t)
    }

    fn infer(&self, z_a: f64, z_b: f64) -> usize {
        let q = self.n / 4;
        (0..self.n)
            .min_by(|&p1, &p2| {
                let err = |p: usize| {
                    (self.pair_answer(0, 1, p) - z_a).abs()
                        + (self.pair_answer(q, q + 1, p) - z_b).abs()
                };
                err(p1).total_cmp(&err(p2))
            })
            .unwrap()
    }
}

impl Strategy<GraphOp> for LandmarkCycleAttack {
    fn next_move(&mut self, view: TranscriptView<'_, GraphOp>) -> GraphOp {
        let z = last_output(&view).unwrap_or(0.0);
        let n = self.n;
        match self.stage {
            LandmarkStage::ProbeA => {
                self.stage = LandmarkStage::ProbeB;
                GraphOp::SetPair { s: 0, t: 1 }
            }
            LandmarkStage::ProbeB => {
                self.stage = LandmarkStage::Infer { z_a: z };
                let q = n / 4;
                GraphOp::SetPair { s: q, t: q + 1 }
            }
            LandmarkStage::Infer { z_a } => {
                let target = self.infer(z_a, z);
                self.stage = LandmarkStage::IsolateSecond { target };
                GraphOp::Delete { u: target, v: (target + 1) % n }
            }
            LandmarkStage::IsolateSecond { target } => {
                self.stage = LandmarkStage::RestoreFirst { target };
                GraphOp::Delete { u: (target + n - 1) % n, v: target }
            }
            LandmarkStage::RestoreFirst { target } => {
                self.stage = LandmarkStage::RestoreSecond { target };
                GraphOp::Insert { u: target, v: (target + 1) % n, w: 1 }
            }
            LandmarkStage::RestoreSecond { target } => {
                self.stage = LandmarkStage::ProbeA;
                self.campaigns += 1;
                GraphOp::Insert { u: (target + n - 1) % n, v: target, w: 1 }
            }
        }
    }
}

/// Correlation attack on the subsampled sum: insert a value, watch whether
/// the estimate jumps; delete sampled insertions and keep unsampled ones, so
/// the true sum grows while the estimate stays put. The bias grows linearly
/// in the number of steps.
pub struct SumCorrelationAttack {
    value: f64,
    next_id: u64,
    pending: Option<(u64, f64)>,
    pub kept: u64,
}

impl SumCorrelationAttack {
    pub fn new(value: f64, first_id: u64) -> Self {
        Self { value, next_id: first_id, pending: None, kept: 0 }
    }
}

impl Strategy<SumOp> for SumCorrelationAttack {
    fn next_move(&mut self, view: TranscriptView<'_, SumOp>) -> SumOp {
        let z = last_output(&view).unwrap_or(0.0);
        if let Some((id, before)) = self.pending.take() {
            if z - before > self.value * 0.5 {
                // The estimator saw it: remove it again.
                return SumOp::Delete { id };
            }
            self.kept += 1;
        }
        let id = self.next_id;
        self.next_id += 1;
        self.pending = Some((id, z));
        SumOp::Insert { id, value: self.value }
    }
}
