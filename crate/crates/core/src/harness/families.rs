//! Graph families used by the experiments and the acceptance suite.

use crate::graph::Graph;
use crate::rng::{rng_from_seed, Rng};
use rand::seq::SliceRandom;
use rand::Rng as _;

/// Two k-cliques with heavy internal edges joined by `rounds·k` bridge edges:
/// bridge edge `(i, k + (i+j) mod k)` for `j < rounds`. With
/// `bridge_weight·rounds < (k-1)·clique_weight` the global min cut is the
/// whole bridge.
pub fn two_cliques_bridged(
    k: usize,
    clique_weight: u64,
    rounds: usize,
    bridge_weight: u64,
) -> Graph {
    let mut g = Graph::new(2 * k);
    for base in [0, k] {
        for i in 0..k {
            for j in i + 1..k {
                g.insert_edge_f64(base + i, base + j, clique_weight as f64).unwrap();
            }
        }
    }
    for j in 0..rounds {
        for i in 0..k {
            g.insert_edge_f64(i, k + (i + j) % k, bridge_weight as f64).unwrap();
        }
    }
    g
}

/// Bridge edge list of the family above, in construction order.
pub fn bridge_edges(k: usize, rounds: usize, bridge_weight: u64) -> Vec<(usize, usize, u64)> {
    let mut out = Vec::new();
    for j in 0..rounds {
        for i in 0..k {
            let (a, b) = (i, k + (i + j) % k);
            out.push((a.min(b), a.max(b), bridge_weight));
        }
    }
    out
}

pub fn ring(n: usize, w: u64) -> Graph {
    let mut g = Graph::new(n);
    for u in 0..n {
        g.insert_edge_f64(u, (u + 1) % n, w as f64).unwrap();
    }
    g
}

/// Uniform random simple graph with exactly `m` edges.
pub fn random_graph(n: usize, m: usize, seed: u64) -> Graph {
    assert!(m <= n * (n - 1) / 2);
    let mut rng = rng_from_seed(seed);
    let mut g = Graph::new(n);
    while g.m() < m {
        let u = rng.random_range(0..n);
        let v = rng.random_range(0..n);
        if u != v && g.edge_weight(u, v).is_none() {
            g.insert_edge_f64(u, v, 1.0).unwrap();
        }
    }
    g
}

/// Near-complete graph: `K_n` minus `drop` random edges. All degrees stay in
/// one power-of-two class.
pub fn near_complete(n: usize, drop: usize, seed: u64) -> Graph {
    let mut g = Graph::new(n);
    for u in 0..n {
        for v in u + 1..n {
            g.insert_edge_f64(u, v, 1.0).unwrap();
        }
    }
    let mut rng = rng_from_seed(seed);
    let mut edges = g.edges();
    edges.shuffle(&mut rng);
    for &(u, v, _) in edges.iter().take(drop) {
        g.remove_edge(u, v).unwrap();
    }
    g
}

/// Random graph on 100 vertices with exactly `m` edges whose degree profile
/// is engineered so that `Σ_e 1/deg̃(owner)` matches the near-complete
/// variant: `low` vertices of degree `low_deg` (an independent set, so they
/// own all their edges in the next power-of-two class) and the rest spread
/// inside one higher class.
pub fn matched_profile(
    n: usize,
    m: usize,
    low: usize,
    low_deg: usize,
    high_cap: usize,
    seed: u64,
) -> Graph {
    let mut rng = rng_from_seed(seed);
    let mut g = Graph::new(n);
    // Low vertices connect only to high vertices.
    for u in 0..low {
        let mut guard = 0;
        while g.degree_count(u) < low_deg {
            let v = low + rng.random_range(0..n - low);
            if g.edge_weight(u, v).is_none() && g.degree_count(v) < high_cap {
                g.insert_edge_f64(u, v, 1.0).unwrap();
            }
            guard += 1;
            assert!(guard < 100_000, "low-degree wiring stalled");
        }
    }
    // Every high vertex must stay inside the (high_cap/2, high_cap] degree
    // class: raise stragglers to the floor first, then fill to exactly m.
    let floor = high_cap / 2 + 1;
    for u in low..n {
        let mut guard = 0;
        while g.degree_count(u) < floor {
            let v = low + rng.random_range(0..n - low);
            if u != v && g.edge_weight(u, v).is_none() && g.degree_count(v) < high_cap {
                g.insert_edge_f64(u, v, 1.0).unwrap();
            }
            guard += 1;
            assert!(guard < 100_000, "floor wiring stalled");
        }
    }
    let mut guard = 0;
    while g.m() < m {
        let u = low + rng.random_range(0..n - low);
        let v = low + rng.random_range(0..n - low);
        if u != v
            && g.edge_weight(u, v).is_none()
            && g.degree_count(u) < high_cap
            && g.degree_count(v) < high_cap
        {
            g.insert_edge_f64(u, v, 1.0).unwrap();
        }
        guard += 1;
        assert!(guard < 10_000_000, "high-high wiring stalled");
    }
    g
}

/// Oblivious update script: random delete/reinsert churn that keeps the
/// graph's shape, generated without seeing any outputs.
pub fn churn_script(
    g: &Graph,
    steps: usize,
    seed: u64,
) -> Vec<crate::estimators::GraphOp> {
    use crate::estimators::GraphOp;
    let mut rng = rng_from_seed(seed);
    let mut present = g.edges();
    let mut absent: Vec<(usize, usize, f64)> = Vec::new();
    let mut script = Vec::with_capacity(steps);
    for _ in 0..steps {
        let do_delete = absent.is_empty() || (present.len() > 1 && rng.random::<f64>() < 0.5);
        if do_delete {
            let i = rng.random_range(0..present.len());
            let e = present.swap_remove(i);
            script.push(GraphOp::Delete { u: e.0, v: e.1 });
            absent.push(e);
        } else {
            let i = rng.random_range(0..absent.len());
            let e = absent.swap_remove(i);
            script.push(GraphOp::Insert { u: e.0, v: e.1, w: e.2 as u64 });
            present.push(e);
        }
    }
    script
}

/// Deterministic rng accessor for family construction helpers.
pub fn family_rng(seed: u64) -> Rng {
    rng_from_seed(seed)
}
