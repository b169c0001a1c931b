//! Shared construction helpers for the micro-benchmarks.

use robustdyn::graph::Graph;

pub fn clique(n: usize) -> Graph {
    let mut g = Graph::new(n);
    for u in 0..n {
        for v in u + 1..n {
            g.insert_edge_f64(u, v, 1.0).unwrap();
        }
    }
    g
}
