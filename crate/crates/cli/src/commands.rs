//! Subcommand implementations.

use crate::output::{write_csv, write_jsonl, StepRecord};
use robustdyn::config::Config;
use robustdyn::estimators::{
    EffResEstimator, GraphOp, GraphState, LandmarkDistanceEstimator, MincutEstimator,
};
use robustdyn::graph::{distance_exact, effective_resistance_exact, min_cut_exact, parse_graph, parse_update_script};
use robustdyn::harness::attacks::{LandmarkCycleAttack, MincutBridgeAttack};
use robustdyn::harness::experiments::{
    attack_defense_mincut, blinking_pipeline_mincut, measure_refresh, refresh_speed_config,
    refresh_speed_graphs, AttackDefenseConfig, PipelineConfig,
};
use robustdyn::harness::families::{bridge_edges, churn_script, two_cliques_bridged};
use robustdyn::harness::{
    run_game, AdversaryModel, GameSpec, Metrics, SingleCopyPlayer, Transcript, WrappedPlayer,
};
use robustdyn::separation::{
    lob_adaptive_game, lob_oblivious, run_avg_boxes_trial, AdaptiveAlgorithm,
};
use robustdyn::sparsify::SparsifyConfig;
use robustdyn::wrapper::RobustWrapper;
use std::error::Error;
use std::path::{Path, PathBuf};

type CmdResult = Result<(), Box<dyn Error>>;

fn load_config(path: Option<&Path>) -> Result<Config, Box<dyn Error>> {
    match path {
        None => Ok(Config::default()),
        Some(p) => Ok(Config::parse(&std::fs::read_to_string(p)?)?),
    }
}

fn emit_steps(
    out: Option<PathBuf>,
    csv: Option<PathBuf>,
    transcript: &Transcript<GraphOp>,
    metrics: &Metrics,
) -> CmdResult {
    let records: Vec<StepRecord> = transcript
        .steps
        .iter()
        .enumerate()
        .map(|(i, s)| StepRecord {
            step: i,
            update: serde_json::to_value(&s.update).expect("serializable update"),
            true_g: metrics.true_values[i],
            output: s.output.unwrap_or(f64::NAN),
            acc: metrics.acc[i],
            copy_fraction: metrics.copy_fractions.get(i).copied(),
            work: metrics.work.get(i).copied().unwrap_or(0),
        })
        .collect();
    if let Some(p) = out {
        write_jsonl(&p, &records)?;
        println!("wrote {} step records to {}", records.len(), p.display());
    }
    if let Some(p) = csv {
        write_csv(&p, &records)?;
        println!("wrote CSV to {}", p.display());
    }
    Ok(())
}

fn report_metrics(metrics: &Metrics) {
    println!("steps                 {}", metrics.acc.len());
    println!("accuracy frequency    {:.4}", metrics.accuracy_frequency());
    println!("all steps accurate    {}", metrics.all_steps_accurate());
    if !metrics.copy_fractions.is_empty() {
        println!("min copy fraction     {:.4}", metrics.min_copy_fraction());
    }
    if let Some(v) = &metrics.violation {
        println!("VIOLATION             {v}");
    }
}

/// `run`: one game per the config file.
pub fn run(config: &Path, seed: u64, out: Option<PathBuf>, csv: Option<PathBuf>) -> CmdResult {
    let cfg = load_config(Some(config))?;
    let estimator = cfg.str_or("estimator", "mincut").to_string();
    let steps = cfg.usize_or("steps", 200)?;
    let adversary_kind = cfg.str_or("adversary", "oblivious").to_string();
    let wrapper_kind = cfg.str_or("wrapper", "none").to_string();

    // Input graph: a file or the built-in family.
    let state = match cfg.raw("graph") {
        Some(path) if !path.starts_with("family:") => {
            GraphState::new(parse_graph(&std::fs::read_to_string(path)?)?)
        }
        Some("family:two_cliques") | None => GraphState::new(two_cliques_bridged(
            cfg.usize_or("clique", 20)?,
            cfg.u64_or("clique_weight", 40)?,
            cfg.usize_or("bridge_rounds", 2)?,
            cfg.u64_or("bridge_weight", 16)?,
        )),
        Some(other) => return Err(format!("unknown graph spec `{other}`").into()),
    };

    match estimator.as_str() {
        "mincut" => run_mincut(&cfg, state, steps, &adversary_kind, &wrapper_kind, seed, out, csv),
        "distance" => run_distance(&cfg, state, steps, &adversary_kind, seed, out, csv),
        "effres" => run_effres(&cfg, state, steps, seed, out, csv),
        other => Err(format!("unknown estimator `{other}`").into()),
    }
}

#[allow(clippy::too_many_arguments)]
fn run_mincut(
    cfg: &Config,
    state: GraphState,
    steps: usize,
    adversary_kind: &str,
    wrapper_kind: &str,
    seed: u64,
    out: Option<PathBuf>,
    csv: Option<PathBuf>,
) -> CmdResult {
    let rho = cfg.f64_or("rho", 0.5)?;
    let eps = cfg.f64_or("eps", 0.25)?;
    let proto = MincutEstimator::new(rho, eps);
    let oracle = |st: &GraphState| min_cut_exact(&st.graph).map(|(w, _)| w).unwrap_or(0.0);

    let mut adversary = match adversary_kind {
        "oblivious" => match cfg.raw("script") {
            Some(path) => {
                let updates = parse_update_script(&std::fs::read_to_string(path)?)?;
                AdversaryModel::Oblivious(updates.iter().map(GraphOp::from_update).collect())
            }
            None => AdversaryModel::Oblivious(churn_script(&state.graph, steps, seed ^ 0xc)),
        },
        kind => {
            let margin = if rho < 1.0 { 1.0 + eps / 2.0 } else { 1.0 };
            let attack = MincutBridgeAttack::new(
                bridge_edges(
                    cfg.usize_or("clique", 20)?,
                    cfg.usize_or("bridge_rounds", 2)?,
                    cfg.u64_or("bridge_weight", 16)?,
                ),
                (1, 2, cfg.u64_or("clique_weight", 40)?),
                margin / rho,
                cfg.u64_or("bridge_weight", 16)? as f64 / 2.0,
                cfg.usize_or("min_present", 6)?,
            );
            match kind {
                "adaptive" => AdversaryModel::Adaptive(Box::new(attack)),
                "blinking" => AdversaryModel::Blinking(Box::new(attack)),
                other => return Err(format!("unknown adversary `{other}`").into()),
            }
        }
    };

    let (transcript, metrics) = match wrapper_kind {
        "none" => {
            let mut player = SingleCopyPlayer::new(&proto, &state, seed);
            let spec = GameSpec {
                initial: state,
                oracle: &oracle,
                accept_factor: 1.0 + eps,
                copy_gamma: None,
                steps,
            };
            run_game(&mut player, &mut adversary, &spec)
        }
        "plain" => {
            let exp = AttackDefenseConfig {
                c: cfg.usize_or("c", 160)?,
                s: cfg.usize_or("s", 80)?,
                eps_med: cfg.f64_or("eps_med", 1.0)?,
                t_phase: cfg.u64_or("T", steps as u64)?,
                u_bound: cfg.f64_or("U", 1400.0)?,
                alpha: cfg.f64_or("alpha", 0.15)?,
                delta_fail: cfg.f64_or("delta_fail", 0.1)?,
                ..AttackDefenseConfig::default()
            };
            let params = exp.wrapper_params();
            let alpha = params.alpha;
            let wrapper = RobustWrapper::new(&proto, &state, params, seed);
            let mut player = WrappedPlayer::new(wrapper);
            let spec = GameSpec {
                initial: state,
                oracle: &oracle,
                accept_factor: (1.0 + eps) * (1.0 + alpha),
                copy_gamma: Some(1.0 + eps),
                steps,
            };
            run_game(&mut player, &mut adversary, &spec)
        }
        other => return Err(format!("unknown wrapper `{other}`").into()),
    };
    println!("mincut game ({adversary_kind}, wrapper={wrapper_kind})");
    report_metrics(&metrics);
    emit_steps(out, csv, &transcript, &metrics)
}

#[allow(clippy::too_many_arguments)]
fn run_distance(
    cfg: &Config,
    state: GraphState,
    steps: usize,
    adversary_kind: &str,
    seed: u64,
    out: Option<PathBuf>,
    csv: Option<PathBuf>,
) -> CmdResult {
    let k = cfg.usize_or("landmarks", 1)?;
    let proto = LandmarkDistanceEstimator::new(k);
    let n = state.graph.n();
    let oracle = |st: &GraphState| distance_exact(&st.graph, st.pair.0, st.pair.1);
    let mut adversary = match adversary_kind {
        "adaptive" => AdversaryModel::Adaptive(Box::new(LandmarkCycleAttack::new(n))),
        "blinking" => AdversaryModel::Blinking(Box::new(LandmarkCycleAttack::new(n))),
        _ => AdversaryModel::Oblivious(churn_script(&state.graph, steps, seed ^ 0xd)),
    };
    let mut player = SingleCopyPlayer::new(&proto, &state, seed);
    let spec = GameSpec {
        initial: state,
        oracle: &oracle,
        accept_factor: 3.0,
        copy_gamma: None,
        steps,
    };
    let (transcript, metrics) = run_game(&mut player, &mut adversary, &spec);
    println!("distance game ({adversary_kind}), recommits {}", player.estimator.recommits);
    report_metrics(&metrics);
    emit_steps(out, csv, &transcript, &metrics)
}

fn run_effres(
    cfg: &Config,
    mut state: GraphState,
    steps: usize,
    seed: u64,
    out: Option<PathBuf>,
    csv: Option<PathBuf>,
) -> CmdResult {
    let eps = cfg.f64_or("eps", 0.25)?;
    state.pair = (
        cfg.usize_or("src", 0)?,
        cfg.usize_or("snk", state.graph.n().saturating_sub(1))?,
    );
    let sp = SparsifyConfig {
        phi: cfg.f64_or("phi", 0.2)?,
        sample_const: cfg.f64_or("sample_const", 24.0)?,
        ..Default::default()
    };
    let proto = EffResEstimator::standalone(eps, sp);
    let oracle = |st: &GraphState| {
        effective_resistance_exact(&st.graph, st.pair.0, st.pair.1).unwrap_or(f64::INFINITY)
    };
    let mut adversary =
        AdversaryModel::Oblivious(churn_script(&state.graph, steps, seed ^ 0xe));
    let mut player = SingleCopyPlayer::new(&proto, &state, seed);
    let spec = GameSpec {
        initial: state,
        oracle: &oracle,
        accept_factor: 1.0 + eps.max(f64::EPSILON),
        copy_gamma: None,
        steps,
    };
    let (transcript, metrics) = run_game(&mut player, &mut adversary, &spec);
    println!("effres game (oblivious churn)");
    report_metrics(&metrics);
    emit_steps(out, csv, &transcript, &metrics)
}

/// `attack`: the criterion-7 attack/defense pair experiment.
pub fn attack(
    config: Option<&Path>,
    seed: u64,
    trials: Option<usize>,
    out: Option<PathBuf>,
) -> CmdResult {
    let cfg = load_config(config)?;
    let mut exp = AttackDefenseConfig {
        trials: cfg.usize_or("trials", 100)?,
        steps: cfg.usize_or("steps", 500)?,
        rho: cfg.f64_or("rho", 0.5)?,
        eps: cfg.f64_or("eps", 0.25)?,
        c: cfg.usize_or("c", 160)?,
        s: cfg.usize_or("s", 80)?,
        eps_med: cfg.f64_or("eps_med", 1.0)?,
        delta_fail: cfg.f64_or("delta_fail", 0.1)?,
        ..AttackDefenseConfig::default()
    };
    if let Some(t) = trials {
        exp.trials = t;
    }
    let report = attack_defense_mincut(&exp, seed);
    println!("attack/defense over {} trials ({} steps each)", exp.trials, exp.steps);
    println!("  single-copy attack success rate   {:.3}", report.attack_success_rate);
    println!("  wrapped all-steps-accurate rate   {:.3}", report.defense_all_steps_rate);
    println!("  copy-fraction >= 4/5 rate         {:.5}", report.copy_fraction_ok_rate);
    let mean_attacked: f64 = report.attack.iter().map(|t| t.accuracy_frequency).sum::<f64>()
        / report.attack.len() as f64;
    println!("  mean attacked accuracy frequency  {:.3}", mean_attacked);
    if let Some(p) = out {
        let mut records = Vec::new();
        for t in &report.attack {
            records.push(serde_json::json!({"kind": "attack", "summary": t}));
        }
        for t in &report.defense {
            records.push(serde_json::json!({"kind": "defense", "summary": t}));
        }
        write_jsonl(&p, &records)?;
        println!("wrote {} trial records to {}", records.len(), p.display());
    }
    Ok(())
}

/// `bench`: refresh-speed and pipeline cost-counter tables.
pub fn bench(config: Option<&Path>, seed: u64, out: Option<PathBuf>) -> CmdResult {
    let cfg = load_config(config)?;
    let rounds = cfg.usize_or("rounds", 10)?;
    let (a, b) = refresh_speed_graphs(seed ^ 0x6e);
    let sp = refresh_speed_config();
    let ra = measure_refresh(&a, sp, rounds, seed + 1);
    let rb = measure_refresh(&b, sp, rounds, seed + 2);
    println!("refresh-speed counters (n = 100, {} refreshes each)", rounds);
    println!("  {:>6} {:>8} {:>14} {:>14} {:>10}", "m", "pieces", "decompose", "refresh", "ratio");
    for r in [&ra, &rb] {
        println!(
            "  {:>6} {:>8} {:>14} {:>14.1} {:>10.4}",
            r.m,
            r.pieces,
            r.decompose_work,
            r.mean_refresh_work,
            r.mean_refresh_work / r.decompose_work as f64
        );
    }
    let gap = (ra.mean_refresh_work - rb.mean_refresh_work).abs()
        / ra.mean_refresh_work.max(rb.mean_refresh_work);
    println!("  refresh gap across m values: {:.4}", gap);

    let ptrials = cfg.usize_or("pipeline_trials", 2)?;
    let pcfg = PipelineConfig { trials: ptrials, ..Default::default() };
    let rep = blinking_pipeline_mincut(&pcfg, seed ^ 0x31);
    println!("blinking pipeline ({} trials, {} steps)", ptrials, pcfg.steps);
    println!("  all-steps-accurate rate {:.3}", rep.all_steps_rate);
    println!("  refresh boundaries      {:?}", rep.refresh_boundaries);
    if let Some(p) = out {
        let records = vec![
            serde_json::json!({"kind": "refresh", "measurement": ra}),
            serde_json::json!({"kind": "refresh", "measurement": rb}),
            serde_json::json!({"kind": "pipeline", "all_steps_rate": rep.all_steps_rate}),
        ];
        write_jsonl(&p, &records)?;
    }
    Ok(())
}

/// `separation`: lob or boxes reports with formula-vs-counter columns.
pub fn separation(
    problem: &str,
    n: u32,
    c: u32,
    chain_len: u64,
    trials: usize,
    seed: u64,
    out: Option<PathBuf>,
) -> CmdResult {
    let mut records = Vec::new();
    match problem {
        "lob" => {
            println!("list-of-outputs, n={n}, c={c} (P(n) = n units per evaluation)");
            println!(
                "  {:>7} {:>12} {:>14} {:>14} {:>9}",
                "variant", "counter", "formula", "per-block", "ratio"
            );
            for t in 0..trials {
                let s = seed + t as u64;
                let obl = lob_oblivious(n, c, 10 * n as usize, n as u64, s);
                println!(
                    "  {:>7} {:>12} {:>14} {:>14} {:>9}",
                    "obliv",
                    obl.total_units,
                    obl.formula_units,
                    "-",
                    if obl.total_units == obl.formula_units { "exact" } else { "DIFF" }
                );
                let adp = lob_adaptive_game(AdaptiveAlgorithm::Honest, n, c, 2, n as u64, s);
                let min_block = adp.block_units.iter().min().copied().unwrap_or(0);
                println!(
                    "  {:>7} {:>12} {:>14} {:>14} {:>9.3}",
                    "adapt",
                    adp.block_units.iter().sum::<u64>(),
                    2 * adp.per_block_formula,
                    min_block,
                    min_block as f64 / adp.per_block_formula as f64
                );
                records.push(serde_json::json!({"oblivious": obl, "adaptive": adp}));
            }
        }
        "boxes" => {
            println!("average-of-boxes, n={n}, T={chain_len}");
            let mut ok = 0usize;
            for t in 0..trials {
                let s = seed + t as u64;
                let rep = run_avg_boxes_trial(n, chain_len, 200, 40, 50, 0.1, 0.05, s);
                if rep.all_within_alpha {
                    ok += 1;
                }
                if t == 0 {
                    println!(
                        "  w = {} boxes opened; mechanism counter {} = w*T {} : {}",
                        rep.w_opened,
                        rep.mechanism_oracle_units,
                        rep.w_opened as u64 * chain_len,
                        if rep.mechanism_oracle_units == rep.w_opened as u64 * chain_len {
                            "exact"
                        } else {
                            "DIFF"
                        }
                    );
                }
                records.push(serde_json::json!({"trial": t, "report": rep}));
            }
            println!("  within-alpha trials: {ok}/{trials}");
        }
        other => return Err(format!("unknown separation problem `{other}`").into()),
    }
    if let Some(p) = out {
        write_jsonl(&p, &records)?;
        println!("wrote {} records to {}", records.len(), p.display());
    }
    Ok(())
}
