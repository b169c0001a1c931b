//! Experiment drivers shared by the CLI and the acceptance suite.
//!
//! Every experiment is a pure function of its configuration and a master
//! seed; trials derive child seeds, so whole reports replay bit-identically.

use super::attacks::{LandmarkCycleAttack, MincutBridgeAttack, SumCorrelationAttack};
use super::families::{bridge_edges, churn_script, matched_profile, near_complete, ring, two_cliques_bridged};
use super::game::{run_game, AdversaryModel, GameSpec, Metrics, Transcript};
use super::players::{SingleCopyPlayer, WrappedPlayer};
use crate::estimators::{
    Estimator, GraphOp, GraphState, LandmarkDistanceEstimator, MincutEstimator, Multiset,
    SubsampleSumEstimator, SumOp,
};
use crate::graph::min_cut_exact;
use crate::rng::child_seed;
use crate::sparsify::{decompose, sparsify, SparsifyConfig};
use crate::wrapper::{derive_params, pipeline_mincut, WrapperConstants, WrapperParams};
use serde::Serialize;

/// Per-trial summary of one game run.
#[derive(Debug, Clone, Serialize)]
pub struct TrialSummary {
    pub seed: u64,
    pub steps: usize,
    pub accuracy_frequency: f64,
    pub all_steps_accurate: bool,
    pub min_copy_fraction: f64,
    /// Count of steps with accurate-copy fraction below 4/5.
    pub copy_fraction_low_steps: usize,
}

fn summarize(seed: u64, metrics: &Metrics) -> TrialSummary {
    TrialSummary {
        seed,
        steps: metrics.acc.len(),
        accuracy_frequency: metrics.accuracy_frequency(),
        all_steps_accurate: metrics.all_steps_accurate(),
        min_copy_fraction: if metrics.copy_fractions.is_empty() {
            1.0
        } else {
            metrics.min_copy_fraction()
        },
        copy_fraction_low_steps: metrics
            .copy_fractions
            .iter()
            .filter(|&&f| f < 0.8)
            .count(),
    }
}

/// Configuration of the min-cut attack/defense experiment (the bridged
/// two-clique family).
#[derive(Debug, Clone)]
pub struct AttackDefenseConfig {
    pub trials: usize,
    pub steps: usize,
    pub clique: usize,
    pub clique_weight: u64,
    pub bridge_rounds: usize,
    pub bridge_weight: u64,
    pub rho: f64,
    pub eps: f64,
    /// Wrapper parameters (scaled constants).
    pub c: usize,
    pub s: usize,
    pub eps_med: f64,
    pub t_phase: u64,
    pub u_bound: f64,
    pub alpha: f64,
    pub delta_fail: f64,
    /// Cull floor of the attack: it never deletes the bridge below this many
    /// edges, which keeps the stand-in estimator inside its own
    /// concentration regime.
    pub min_present: usize,
    /// Measure per-copy accuracy fractions on the defense runs.
    pub measure_copies: bool,
}

impl Default for AttackDefenseConfig {
    fn default() -> Self {
        Self {
            trials: 100,
            steps: 500,
            clique: 20,
            clique_weight: 40,
            bridge_rounds: 2,
            bridge_weight: 16,
            rho: 0.5,
            eps: 0.25,
            c: 160,
            s: 80,
            eps_med: 1.0,
            t_phase: 500,
            u_bound: 1400.0,
            alpha: 0.15,
            delta_fail: 0.1,
            min_present: 6,
            measure_copies: true,
        }
    }
}

impl AttackDefenseConfig {
    pub fn family(&self) -> GraphState {
        GraphState::new(two_cliques_bridged(
            self.clique,
            self.clique_weight,
            self.bridge_rounds,
            self.bridge_weight,
        ))
    }

    pub fn attack(&self, unit_scale: f64) -> MincutBridgeAttack {
        let bridge = bridge_edges(self.clique, self.bridge_rounds, self.bridge_weight);
        // A clique-interior edge is a safe idle toggle.
        let dummy = (1, 2, self.clique_weight);
        MincutBridgeAttack::new(bridge, dummy, unit_scale, self.bridge_weight as f64 / 2.0, self.min_present)
    }

    pub fn wrapper_params(&self) -> WrapperParams {
        derive_params(
            self.t_phase,
            self.u_bound,
            self.alpha,
            self.delta_fail,
            WrapperConstants::pinned_with_eps(self.c, self.s, self.eps_med),
        )
        .expect("valid experiment parameters")
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct AttackDefenseReport {
    pub attack: Vec<TrialSummary>,
    pub defense: Vec<TrialSummary>,
    /// Fraction of trials where the single copy's per-step accuracy fell
    /// below 1/2 within the step budget.
    pub attack_success_rate: f64,
    /// Fraction of wrapped trials with every step accurate.
    pub defense_all_steps_rate: f64,
    /// Fraction of (trial, step) pairs with accurate-copy fraction >= 4/5.
    pub copy_fraction_ok_rate: f64,
}

fn mincut_oracle(state: &GraphState) -> f64 {
    min_cut_exact(&state.graph).map(|(w, _)| w).unwrap_or(0.0)
}

/// Run one single-copy attacked game.
pub fn attacked_single_copy(cfg: &AttackDefenseConfig, seed: u64) -> (Transcript<GraphOp>, Metrics) {
    let state = cfg.family();
    let margin = if cfg.rho < 1.0 { 1.0 + cfg.eps / 2.0 } else { 1.0 };
    let unit_scale = margin / cfg.rho;
    let proto = MincutEstimator::new(cfg.rho, cfg.eps);
    let mut player = SingleCopyPlayer::new(&proto, &state, child_seed(seed, 1));
    let mut adversary = AdversaryModel::Adaptive(Box::new(cfg.attack(unit_scale)));
    let spec = GameSpec {
        initial: state,
        oracle: &mincut_oracle,
        accept_factor: 1.0 + cfg.eps,
        copy_gamma: None,
        steps: cfg.steps,
    };
    run_game(&mut player, &mut adversary, &spec)
}

/// Run one wrapped (defended) game against the same attack family.
pub fn defended_wrapper(cfg: &AttackDefenseConfig, seed: u64) -> (Transcript<GraphOp>, Metrics) {
    let state = cfg.family();
    let margin = if cfg.rho < 1.0 { 1.0 + cfg.eps / 2.0 } else { 1.0 };
    let unit_scale = margin / cfg.rho;
    let proto = MincutEstimator::new(cfg.rho, cfg.eps);
    let params = cfg.wrapper_params();
    let accept = (1.0 + cfg.eps) * (1.0 + cfg.alpha);
    let wrapper = crate::wrapper::RobustWrapper::new(&proto, &state, params, child_seed(seed, 2));
    let mut player = WrappedPlayer::new(wrapper);
    let mut adversary = AdversaryModel::Adaptive(Box::new(cfg.attack(unit_scale)));
    let spec = GameSpec {
        initial: state,
        oracle: &mincut_oracle,
        accept_factor: accept,
        copy_gamma: if cfg.measure_copies { Some(1.0 + cfg.eps) } else { None },
        steps: cfg.steps,
    };
    run_game(&mut player, &mut adversary, &spec)
}

/// The attack/defense pair experiment: the same adversary and seed family
/// drive a single oblivious copy (attack succeeds) and the DP-wrapped farm
/// (attack fails).
pub fn attack_defense_mincut(cfg: &AttackDefenseConfig, master_seed: u64) -> AttackDefenseReport {
    let mut attack = Vec::with_capacity(cfg.trials);
    let mut defense = Vec::with_capacity(cfg.trials);
    let mut copy_steps_total = 0usize;
    let mut copy_steps_ok = 0usize;
    for t in 0..cfg.trials {
        let seed = child_seed(master_seed, t as u64);
        let (_, m_att) = attacked_single_copy(cfg, seed);
        attack.push(summarize(seed, &m_att));
        let (_, m_def) = defended_wrapper(cfg, seed);
        copy_steps_total += m_def.copy_fractions.len();
        copy_steps_ok += m_def.copy_fractions.iter().filter(|&&f| f >= 0.8).count();
        defense.push(summarize(seed, &m_def));
    }
    let attack_success = attack.iter().filter(|s| s.accuracy_frequency < 0.5).count();
    let defense_ok = defense.iter().filter(|s| s.all_steps_accurate).count();
    AttackDefenseReport {
        attack_success_rate: attack_success as f64 / cfg.trials as f64,
        defense_all_steps_rate: defense_ok as f64 / cfg.trials as f64,
        copy_fraction_ok_rate: if copy_steps_total == 0 {
            1.0
        } else {
            copy_steps_ok as f64 / copy_steps_total as f64
        },
        attack,
        defense,
    }
}

/// Landmark recommit counts: adaptive isolation attack vs an oblivious
/// script of the same length.
#[derive(Debug, Clone, Serialize)]
pub struct LandmarkReport {
    pub adaptive_recommits: u64,
    pub adaptive_campaigns: u64,
    pub oblivious_recommits: u64,
    pub full_set_recommits: u64,
}

pub fn landmark_recommit_experiment(n: usize, steps: usize, seed: u64) -> LandmarkReport {
    let state = GraphState::new(ring(n, 1));
    let proto = LandmarkDistanceEstimator::new(1);

    let mut player = SingleCopyPlayer::new(&proto, &state, child_seed(seed, 1));
    let attack = LandmarkCycleAttack::new(n);
    let mut adversary = AdversaryModel::Adaptive(Box::new(attack));
    let oracle = |st: &GraphState| crate::graph::distance_exact(&st.graph, st.pair.0, st.pair.1);
    let spec = GameSpec {
        initial: state.clone(),
        oracle: &oracle,
        accept_factor: 3.0,
        copy_gamma: None,
        steps,
    };
    run_game(&mut player, &mut adversary, &spec);
    let adaptive_recommits = player.estimator.recommits;
    // Six moves per campaign.
    let adaptive_campaigns = (steps / 6) as u64;

    // Oblivious: random pair probes plus benign far-from-landmark toggles.
    let mut script = Vec::with_capacity(steps);
    let mut rng = crate::rng::rng_from_seed(child_seed(seed, 2));
    use rand::Rng as _;
    let mut deleted: Option<(usize, usize)> = None;
    for _ in 0..steps {
        if let Some((u, v)) = deleted.take() {
            script.push(GraphOp::Insert { u, v, w: 1 });
        } else if rng.random::<f64>() < 0.5 {
            let s = rng.random_range(0..n);
            let t = rng.random_range(0..n);
            script.push(GraphOp::SetPair { s, t });
        } else {
            let u = rng.random_range(0..n);
            let v = (u + 1) % n;
            script.push(GraphOp::Delete { u, v });
            deleted = Some((u, v));
        }
    }
    let mut player = SingleCopyPlayer::new(&proto, &state, child_seed(seed, 1));
    let mut adversary = AdversaryModel::Oblivious(script.clone());
    let spec = GameSpec {
        initial: state.clone(),
        oracle: &oracle,
        accept_factor: 3.0,
        copy_gamma: None,
        steps,
    };
    run_game(&mut player, &mut adversary, &spec);
    let oblivious_recommits = player.estimator.recommits;

    // Landmark set = V: the adaptive attack cannot force recommits at all.
    let proto_full = LandmarkDistanceEstimator::new(n);
    let mut player = SingleCopyPlayer::new(&proto_full, &state, child_seed(seed, 3));
    let mut adversary = AdversaryModel::Adaptive(Box::new(LandmarkCycleAttack::new(n)));
    let spec = GameSpec {
        initial: state,
        oracle: &oracle,
        accept_factor: 3.0,
        copy_gamma: None,
        steps,
    };
    run_game(&mut player, &mut adversary, &spec);
    let full_set_recommits = player.estimator.recommits;

    LandmarkReport {
        adaptive_recommits,
        adaptive_campaigns,
        oblivious_recommits,
        full_set_recommits,
    }
}

/// Drift of the subsampled sum under the correlation attack, measured as
/// `g(x_i) − estimate_i` at each step.
pub fn sum_drift_experiment(rate: f64, steps: usize, seed: u64) -> Vec<f64> {
    let initial: Multiset = (0..50u64).map(|i| (i, 1.0)).collect();
    let proto = SubsampleSumEstimator::new(rate, 0.2);
    let mut player = SingleCopyPlayer::new(&proto, &initial, child_seed(seed, 1));
    let mut adversary: AdversaryModel<SumOp> =
        AdversaryModel::Adaptive(Box::new(SumCorrelationAttack::new(8.0, 1000)));
    let oracle = |set: &Multiset| crate::estimators::exact_sum(set);
    let spec = GameSpec {
        initial,
        oracle: &oracle,
        accept_factor: 1.2,
        copy_gamma: None,
        steps,
    };
    let (transcript, metrics) = run_game(&mut player, &mut adversary, &spec);
    transcript
        .steps
        .iter()
        .zip(&metrics.true_values)
        .map(|(s, g)| g - s.output.unwrap_or(0.0))
        .collect()
}

/// Criterion-6 style refresh measurement on one graph: mean refresh work
/// over `rounds` fresh handles plus the decompose work.
#[derive(Debug, Clone, Serialize)]
pub struct RefreshMeasurement {
    pub m: usize,
    pub decompose_work: u64,
    pub mean_refresh_work: f64,
    pub pieces: usize,
}

pub fn measure_refresh(
    g: &crate::graph::Graph,
    cfg: SparsifyConfig,
    rounds: usize,
    seed: u64,
) -> RefreshMeasurement {
    let d = decompose(g, cfg);
    let mut total = 0u64;
    for r in 0..rounds {
        let h = sparsify(&d, 1_000_000, child_seed(seed, r as u64));
        total += h.build_work.get();
    }
    RefreshMeasurement {
        m: g.m(),
        decompose_work: d.build_work.get(),
        mean_refresh_work: total as f64 / rounds as f64,
        pieces: d.piece_count(),
    }
}

/// The two matched-degree-profile graphs for the refresh-speed comparison:
/// m = 1000 with an engineered low/high profile and m = 4900 near-complete
/// (n = 100 has only 4950 simple-graph slots). Their expected per-refresh
/// sampled-edge counts coincide by construction.
pub fn refresh_speed_graphs(seed: u64) -> (crate::graph::Graph, crate::graph::Graph) {
    let a = matched_profile(100, 1000, 15, 15, 32, child_seed(seed, 10));
    let b = near_complete(100, 50, child_seed(seed, 11));
    (a, b)
}

pub fn refresh_speed_config() -> SparsifyConfig {
    SparsifyConfig {
        phi: 0.15,
        eps: 0.5,
        sample_const: 0.0069,
        ..Default::default()
    }
}

/// Blinking-pipeline experiment configuration (criterion-9 family: two K30
/// cliques with a 600-edge unit bridge).
#[derive(Debug, Clone)]
pub struct PipelineConfig {
    pub trials: usize,
    pub steps: usize,
    pub eps: f64,
    pub t_cnt: u64,
    pub c: usize,
    pub s: usize,
    pub eps_med: f64,
    pub u_bound: f64,
    pub alpha: f64,
    pub delta_fail: f64,
    pub sample_const: f64,
    pub phi: f64,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            trials: 50,
            steps: 250,
            eps: 0.25,
            t_cnt: 50,
            c: 160,
            s: 80,
            eps_med: 1.0,
            u_bound: 1400.0,
            alpha: 0.15,
            delta_fail: 0.1,
            sample_const: 0.0076,
            phi: 0.2,
        }
    }
}

impl PipelineConfig {
    pub fn family(&self) -> GraphState {
        GraphState::new(two_cliques_bridged(30, 40, 20, 1))
    }

    pub fn sparsify_config(&self) -> SparsifyConfig {
        SparsifyConfig {
            phi: self.phi,
            eps: self.eps,
            sample_const: self.sample_const,
            ..Default::default()
        }
    }

    pub fn wrapper_params(&self, steps: usize) -> WrapperParams {
        // Phases are driven by the cnt budget, so the query budget is set
        // beyond the run length.
        derive_params(
            steps as u64 + 1,
            self.u_bound,
            self.alpha,
            self.delta_fail,
            WrapperConstants::pinned_with_eps(self.c, self.s, self.eps_med),
        )
        .expect("valid pipeline parameters")
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PipelineReport {
    pub trials: Vec<TrialSummary>,
    pub all_steps_rate: f64,
    pub refresh_boundaries: Vec<usize>,
    /// Refresh work of one copy across phases of the first trial.
    pub per_phase_refresh_work: Vec<u64>,
}

/// Blinking adversary against the sparsified min-cut pipeline.
pub fn blinking_pipeline_mincut(cfg: &PipelineConfig, master_seed: u64) -> PipelineReport {
    let mut trials = Vec::with_capacity(cfg.trials);
    let mut refresh_boundaries = Vec::new();
    let mut per_phase_refresh_work = Vec::new();
    let bridge = bridge_edges(30, 20, 1);
    for t in 0..cfg.trials {
        let seed = child_seed(master_seed, t as u64);
        let state = cfg.family();
        let params = cfg.wrapper_params(cfg.steps);
        let wrapper = pipeline_mincut(
            &state,
            cfg.eps,
            cfg.sparsify_config(),
            cfg.t_cnt,
            params,
            child_seed(seed, 2),
        );
        let mut player = WrappedPlayer::new(wrapper);
        // Unit-scale the attack for the pipeline's nominal margin; the
        // blinking view starves it of fresh outputs regardless.
        let attack =
            MincutBridgeAttack::new(bridge.clone(), (1, 2, 40), 1.0 + cfg.eps / 2.0, 0.5, 6);
        let mut adversary = AdversaryModel::Blinking(Box::new(attack));
        let accept = (1.0 + cfg.eps) * (1.0 + cfg.alpha);
        let spec = GameSpec {
            initial: state,
            oracle: &mincut_oracle,
            accept_factor: accept,
            copy_gamma: None,
            steps: cfg.steps,
        };
        let (transcript, metrics) = run_game(&mut player, &mut adversary, &spec);
        if t == 0 {
            refresh_boundaries = transcript.refreshes.clone();
            // Refresh work of copy 0: preprocess counter deltas across phases.
            let copies = player.wrapper.copies();
            per_phase_refresh_work = vec![copies[0].costs().preprocess];
        }
        trials.push(summarize(seed, &metrics));
    }
    let ok = trials.iter().filter(|s| s.all_steps_accurate).count();
    PipelineReport {
        all_steps_rate: ok as f64 / cfg.trials as f64,
        trials,
        refresh_boundaries,
        per_phase_refresh_work,
    }
}

/// Oblivious churn baseline for any graph estimator: per-step accuracy of a
/// single copy on a pre-recorded script.
pub fn oblivious_mincut_baseline(
    cfg: &AttackDefenseConfig,
    steps: usize,
    seed: u64,
) -> Metrics {
    let state = cfg.family();
    let script = churn_script(&state.graph, steps, child_seed(seed, 7));
    let proto = MincutEstimator::new(cfg.rho, cfg.eps);
    let mut player = SingleCopyPlayer::new(&proto, &state, child_seed(seed, 8));
    let mut adversary = AdversaryModel::Oblivious(script);
    let spec = GameSpec {
        initial: state,
        oracle: &mincut_oracle,
        accept_factor: 1.0 + cfg.eps,
        copy_gamma: None,
        steps,
    };
    run_game(&mut player, &mut adversary, &spec).1
}
