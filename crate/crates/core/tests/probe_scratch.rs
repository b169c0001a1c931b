// Temporary calibration probe; deleted once the experiments are frozen.
use robustdyn::harness::experiments::*;

#[test]
#[ignore]
fn probe_attack_defense() {
    let mut cfg = AttackDefenseConfig::default();
    cfg.trials = 5;
    cfg.measure_copies = true;
    for t in 0..5u64 {
        let (_, m) = attacked_single_copy(&cfg, 1000 + t);
        println!(
            "attack trial {t}: freq={:.3} steps={} viol={:?}",
            m.accuracy_frequency(),
            m.acc.len(),
            m.violation
        );
    }
    let (_, m) = defended_wrapper(&cfg, 1000);
    println!(
        "defense: freq={:.4} all={} min_copy_frac={:.3} viol={:?}",
        m.accuracy_frequency(),
        m.all_steps_accurate(),
        m.min_copy_fraction(),
        m.violation
    );
}

#[test]
#[ignore]
fn probe_oblivious_baseline() {
    let cfg = AttackDefenseConfig::default();
    for t in 0..5u64 {
        let m = oblivious_mincut_baseline(&cfg, 300, 500 + t);
        println!("oblivious baseline {t}: freq={:.3}", m.accuracy_frequency());
    }
}

#[test]
#[ignore]
fn probe_refresh_speed() {
    let cfg = refresh_speed_config();
    let (a, b) = refresh_speed_graphs(42);
    let ra = measure_refresh(&a, cfg, 10, 1);
    let rb = measure_refresh(&b, cfg, 10, 2);
    println!("m={} pieces={} decompose={} refresh={:.1}", ra.m, ra.pieces, ra.decompose_work, ra.mean_refresh_work);
    println!("m={} pieces={} decompose={} refresh={:.1}", rb.m, rb.pieces, rb.decompose_work, rb.mean_refresh_work);
    let rel = (ra.mean_refresh_work - rb.mean_refresh_work).abs()
        / ra.mean_refresh_work.max(rb.mean_refresh_work);
    println!("relative gap {:.4}", rel);
}

#[test]
#[ignore]
fn probe_pipeline() {
    let mut cfg = PipelineConfig::default();
    cfg.trials = 3;
    let rep = blinking_pipeline_mincut(&cfg, 9);
    println!(
        "pipeline: all_steps_rate={} boundaries={:?} trials={:?}",
        rep.all_steps_rate,
        rep.refresh_boundaries,
        rep.trials.iter().map(|t| t.accuracy_frequency).collect::<Vec<_>>()
    );
}

#[test]
#[ignore]
fn probe_landmark_and_sum() {
    let rep = landmark_recommit_experiment(32, 210, 3);
    println!("landmark: {rep:?}");
    let drift = sum_drift_experiment(0.5, 200, 4);
    println!("sum drift at 50/100/200: {} {} {}", drift[49], drift[99], drift[199]);
}

#[test]
#[ignore]
fn probe_fraction_dips() {
    let mut cfg = AttackDefenseConfig::default();
    cfg.trials = 1;
    let (tr, m) = defended_wrapper(&cfg, 1000);
    for (i, f) in m.copy_fractions.iter().enumerate() {
        if *f < 0.85 {
            println!(
                "step {i}: frac={f:.3} g={:.0} out={:.1} update={:?}",
                m.true_values[i],
                tr.steps[i].output.unwrap(),
                tr.steps[i].update
            );
        }
    }
    let culls = tr.steps.iter().filter(|s| matches!(s.update, robustdyn::estimators::GraphOp::Delete{..})).count();
    let ins = tr.steps.iter().filter(|s| matches!(s.update, robustdyn::estimators::GraphOp::Insert{..})).count();
    println!("deletes={culls} inserts={ins} final_g={:.0}", m.true_values.last().unwrap());
}

#[test]
#[ignore]
fn probe_pipeline_timing() {
    use robustdyn::estimators::{Estimator, GraphOp};
    use std::time::Instant;
    let cfg = PipelineConfig::default();
    let state = cfg.family();
    let t0 = Instant::now();
    let params = cfg.wrapper_params(cfg.steps);
    let wrapper = robustdyn::wrapper::pipeline_mincut(
        &state, cfg.eps, cfg.sparsify_config(), cfg.t_cnt, params, 42,
    );
    println!("build: {:?}", t0.elapsed());
    let mut w = wrapper;
    let t1 = Instant::now();
    for i in 0..20 {
        let (u, v, _) = state.graph.edges()[500 + i];
        w.update(&GraphOp::Delete { u, v }).unwrap();
    }
    println!("20 updates: {:?}", t1.elapsed());
    let t2 = Instant::now();
    for _ in 0..5 {
        w.query().unwrap();
    }
    println!("5 queries: {:?}", t2.elapsed());
    let t3 = Instant::now();
    w.restart();
    println!("restart: {:?}", t3.elapsed());
    let t4 = Instant::now();
    let mut e = robustdyn::wrapper::SparsifiedMincut::new(cfg.eps, cfg.sparsify_config(), cfg.t_cnt);
    e.reset(&state, 3);
    for _ in 0..100 {
        e.query();
    }
    println!("100 single-copy queries: {:?}", t4.elapsed());
}

#[test]
#[ignore]
fn probe_one_pipeline_trial() {
    use std::time::Instant;
    let mut cfg = PipelineConfig::default();
    cfg.trials = 1;
    let t = Instant::now();
    let rep = blinking_pipeline_mincut(&cfg, 9);
    println!("one trial: {:?} rate={}", t.elapsed(), rep.all_steps_rate);
}

#[test]
#[ignore]
fn probe_trial_phases() {
    use robustdyn::estimators::GraphOp;
    use robustdyn::harness::*;
    use std::time::Instant;
    let cfg = PipelineConfig::default();
    let state = cfg.family();
    let params = cfg.wrapper_params(cfg.steps);
    let wrapper = robustdyn::wrapper::pipeline_mincut(
        &state, cfg.eps, cfg.sparsify_config(), cfg.t_cnt, params, 42,
    );
    let mut player = WrappedPlayer::new(wrapper);
    let bridge = robustdyn::harness::families::bridge_edges(30, 20, 1);
    let attack = robustdyn::harness::attacks::MincutBridgeAttack::new(
        bridge, (1, 2, 40), 1.125, 0.5, 6,
    );
    let mut adversary = AdversaryModel::Blinking(Box::new(attack));
    let oracle = |st: &robustdyn::estimators::GraphState| {
        robustdyn::graph::min_cut_exact(&st.graph).map(|(w, _)| w).unwrap_or(0.0)
    };
    let spec = GameSpec {
        initial: state,
        oracle: &oracle,
        accept_factor: 1.25 * 1.15,
        copy_gamma: None,
        steps: 250,
    };
    let t = Instant::now();
    let (_, m) = run_game(&mut player, &mut adversary, &spec);
    println!("game: {:?} freq={}", t.elapsed(), m.accuracy_frequency());
    let _ = GraphOp::SetPair { s: 0, t: 0 };
}

#[test]
#[ignore]
fn probe_step_timing() {
    use robustdyn::estimators::{GraphOp, GraphState};
    use robustdyn::harness::attacks::MincutBridgeAttack;
    use robustdyn::harness::*;
    use std::time::Instant;
    let cfg = PipelineConfig::default();
    let state = cfg.family();
    let params = cfg.wrapper_params(cfg.steps);
    let wrapper = robustdyn::wrapper::pipeline_mincut(
        &state, cfg.eps, cfg.sparsify_config(), cfg.t_cnt, params, 42,
    );
    let mut player = WrappedPlayer::new(wrapper);
    let bridge = robustdyn::harness::families::bridge_edges(30, 20, 1);
    let mut attack: Box<dyn Strategy<GraphOp>> =
        Box::new(MincutBridgeAttack::new(bridge, (1, 2, 40), 1.125, 0.5, 6));
    let mut input = state.clone();
    let mut transcript = Transcript { x0: String::new(), steps: Vec::new(), refreshes: Vec::new() };
    let mut t_adv = std::time::Duration::ZERO;
    let mut t_play = std::time::Duration::ZERO;
    let mut t_oracle = std::time::Duration::ZERO;
    for step in 0..250 {
        let t0 = Instant::now();
        let cutoff = transcript.refreshes.last().copied().unwrap_or(0);
        let u = attack.next_move(TranscriptView {
            x0: &transcript.x0,
            steps: &transcript.steps[..cutoff],
            refreshes: &transcript.refreshes,
        });
        t_adv += t0.elapsed();
        input.apply(&u).unwrap();
        let t1 = Instant::now();
        let ps = player.process(&u);
        t_play += t1.elapsed();
        if ps.refreshed {
            transcript.refreshes.push(step);
        }
        let t2 = Instant::now();
        let g = robustdyn::graph::min_cut_exact(&input.graph).unwrap().0;
        t_oracle += t2.elapsed();
        let _ = g;
        transcript.steps.push(TranscriptStep { update: u, output: Some(ps.output) });
        if step % 50 == 49 {
            println!("step {step}: adv={t_adv:?} play={t_play:?} oracle={t_oracle:?}");
        }
    }
    let _ = GraphState::new(robustdyn::graph::Graph::new(2));
}

#[test]
#[ignore]
fn probe_c7_timing() {
    use std::time::Instant;
    let cfg = AttackDefenseConfig::default();
    let t = Instant::now();
    let (_, m) = attacked_single_copy(&cfg, 1234);
    println!("attacked trial: {:?} freq={:.3}", t.elapsed(), m.accuracy_frequency());
    let t = Instant::now();
    let (_, m) = defended_wrapper(&cfg, 1234);
    println!("defended trial: {:?} all={} minfrac={:.3}", t.elapsed(), m.all_steps_accurate(), m.min_copy_fraction());
}

#[test]
#[ignore]
fn probe_ten_trials() {
    let mut cfg = AttackDefenseConfig::default();
    cfg.trials = 10;
    let rep = attack_defense_mincut(&cfg, 424242);
    println!(
        "attack_success={} defense_all={} copy_ok={:.5}",
        rep.attack_success_rate, rep.defense_all_steps_rate, rep.copy_fraction_ok_rate
    );
    for t in &rep.defense {
        if !t.all_steps_accurate {
            println!("defense miss: seed={} freq={}", t.seed, t.accuracy_frequency);
        }
    }
}
