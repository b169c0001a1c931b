//! Dynamic weighted graph with an update log, plus the plain-text graph and
//! update-script file formats.
//!
//! Graphs are simple and undirected; multi-edges are folded into weights.
//! True input graphs carry positive integer weights (updates enforce this);
//! derived graphs (samples, sparsifiers) reuse the same structure with
//! fractional weights via the `*_f64` mutators.

mod oracles;

pub use oracles::{
    conductance_min, conductance_of_cut, distance_exact, effective_resistance_exact,
    min_cut_exact, quadratic_form, sssp,
};

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum GraphError {
    #[error("invalid update: {0}")]
    InvalidUpdate(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("graph too large for exact oracle: n={n} exceeds limit {limit}")]
    SizeLimit { n: usize, limit: usize },
    #[error("vertices {0} and {1} are in different components")]
    InfiniteResistance(usize, usize),
    #[error("parse error: {0}")]
    Parse(String),
}

/// An edge insertion or deletion. Inserted weights are positive integers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GraphUpdate {
    Insert { u: usize, v: usize, w: u64 },
    Delete { u: usize, v: usize },
}

/// A vertex subset defining a cut `(S, V \ S)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cut {
    pub side: Vec<usize>,
}

impl Cut {
    pub fn new(mut side: Vec<usize>) -> Self {
        side.sort_unstable();
        side.dedup();
        Self { side }
    }

    pub fn validate(&self, n: usize) -> Result<(), GraphError> {
        if self.side.is_empty() || self.side.len() >= n {
            return Err(GraphError::InvalidArgument(
                "cut side must be a nonempty proper vertex subset".into(),
            ));
        }
        if self.side.iter().any(|&v| v >= n) {
            return Err(GraphError::InvalidArgument("cut side contains unknown vertex".into()));
        }
        Ok(())
    }

    pub fn mask(&self, n: usize) -> Vec<bool> {
        let mut m = vec![false; n];
        for &v in &self.side {
            m[v] = true;
        }
        m
    }
}

/// Undirected weighted graph on vertices `0..n`.
#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    n: usize,
    adj: Vec<BTreeMap<usize, f64>>,
    m: usize,
    weighted_deg: Vec<f64>,
    log: Vec<GraphUpdate>,
}

impl Graph {
    pub fn new(n: usize) -> Self {
        Self { n, adj: vec![BTreeMap::new(); n], m: 0, weighted_deg: vec![0.0; n], log: Vec::new() }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize, f64)]) -> Result<Self, GraphError> {
        let mut g = Self::new(n);
        for &(u, v, w) in edges {
            g.insert_edge_f64(u, v, w)?;
        }
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Current edge count.
    pub fn m(&self) -> usize {
        self.m
    }

    /// Weighted degree `deg_G(u) = Σ_v w(u,v)`.
    pub fn weighted_degree(&self, u: usize) -> f64 {
        self.weighted_deg[u]
    }

    /// Number of incident edges.
    pub fn degree_count(&self, u: usize) -> usize {
        self.adj[u].len()
    }

    pub fn edge_weight(&self, u: usize, v: usize) -> Option<f64> {
        self.adj.get(u).and_then(|a| a.get(&v).copied())
    }

    pub fn neighbors(&self, u: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.adj[u].iter().map(|(&v, &w)| (v, w))
    }

    /// All edges as `(u, v, w)` with `u < v`, in deterministic order.
    pub fn edges(&self) -> Vec<(usize, usize, f64)> {
        let mut out = Vec::with_capacity(self.m);
        for u in 0..self.n {
            for (&v, &w) in &self.adj[u] {
                if u < v {
                    out.push((u, v, w));
                }
            }
        }
        out
    }

    pub fn total_weight(&self) -> f64 {
        self.weighted_deg.iter().sum::<f64>() / 2.0
    }

    fn check_endpoints(&self, u: usize, v: usize) -> Result<(), GraphError> {
        if u >= self.n || v >= self.n {
            return Err(GraphError::InvalidArgument(format!(
                "endpoint out of range: ({u},{v}) with n={}",
                self.n
            )));
        }
        if u == v {
            return Err(GraphError::InvalidArgument(format!("self-loop at {u}")));
        }
        Ok(())
    }

    /// Insert an edge with an arbitrary positive real weight (derived graphs).
    pub fn insert_edge_f64(&mut self, u: usize, v: usize, w: f64) -> Result<(), GraphError> {
        self.check_endpoints(u, v)?;
        if !(w > 0.0) || !w.is_finite() {
            return Err(GraphError::InvalidArgument(format!("weight must be positive, got {w}")));
        }
        if self.adj[u].contains_key(&v) {
            return Err(GraphError::InvalidUpdate(format!("edge ({u},{v}) already present")));
        }
        self.adj[u].insert(v, w);
        self.adj[v].insert(u, w);
        self.weighted_deg[u] += w;
        self.weighted_deg[v] += w;
        self.m += 1;
        Ok(())
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) -> Result<f64, GraphError> {
        self.check_endpoints(u, v)?;
        let w = self.adj[u]
            .remove(&v)
            .ok_or_else(|| GraphError::InvalidUpdate(format!("edge ({u},{v}) not present")))?;
        self.adj[v].remove(&u);
        self.weighted_deg[u] -= w;
        self.weighted_deg[v] -= w;
        self.m -= 1;
        Ok(w)
    }

    /// Apply a logged dynamic update (the adversary-facing mutation path).
    pub fn apply_update(&mut self, upd: &GraphUpdate) -> Result<(), GraphError> {
        match *upd {
            GraphUpdate::Insert { u, v, w } => {
                if w == 0 {
                    return Err(GraphError::InvalidUpdate("insert weight must be positive".into()));
                }
                self.insert_edge_f64(u, v, w as f64)?;
            }
            GraphUpdate::Delete { u, v } => {
                self.remove_edge(u, v)?;
            }
        }
        self.log.push(*upd);
        Ok(())
    }

    pub fn update_log(&self) -> &[GraphUpdate] {
        &self.log
    }

    /// Recompute `m` and degrees from adjacency; used by consistency checks.
    pub fn recount(&self) -> (usize, Vec<f64>) {
        let mut m = 0;
        let mut deg = vec![0.0; self.n];
        for u in 0..self.n {
            for (&v, &w) in &self.adj[u] {
                deg[u] += w;
                if u < v {
                    m += 1;
                }
            }
        }
        (m, deg)
    }

    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n];
        let mut comps = Vec::new();
        for s in 0..self.n {
            if seen[s] {
                continue;
            }
            let mut stack = vec![s];
            let mut comp = Vec::new();
            seen[s] = true;
            while let Some(u) = stack.pop() {
                comp.push(u);
                for (v, _) in self.neighbors(u) {
                    if !seen[v] {
                        seen[v] = true;
                        stack.push(v);
                    }
                }
            }
            comp.sort_unstable();
            comps.push(comp);
        }
        comps
    }

    pub fn is_connected(&self) -> bool {
        self.n <= 1 || self.components().len() == 1
    }

    pub fn same_component(&self, u: usize, v: usize) -> bool {
        self.components().iter().any(|c| c.binary_search(&u).is_ok() && c.binary_search(&v).is_ok())
    }
}

/// Parse the graph file format: first line `n m`, then `m` lines `u v w`
/// (0-indexed, positive integer weights).
pub fn parse_graph(text: &str) -> Result<Graph, GraphError> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty() && !l.trim_start().starts_with('#'));
    let header = lines.next().ok_or_else(|| GraphError::Parse("empty graph file".into()))?;
    let mut it = header.split_whitespace();
    let n: usize = parse_tok(it.next(), "n")?;
    let m: usize = parse_tok(it.next(), "m")?;
    let mut g = Graph::new(n);
    for _ in 0..m {
        let line = lines.next().ok_or_else(|| GraphError::Parse("missing edge line".into()))?;
        let mut it = line.split_whitespace();
        let u: usize = parse_tok(it.next(), "u")?;
        let v: usize = parse_tok(it.next(), "v")?;
        let w: u64 = parse_tok(it.next(), "w")?;
        g.insert_edge_f64(u, v, w as f64)?;
    }
    Ok(g)
}

pub fn write_graph(g: &Graph) -> String {
    let mut out = format!("{} {}\n", g.n(), g.m());
    for (u, v, w) in g.edges() {
        out.push_str(&format!("{u} {v} {w}\n"));
    }
    out
}

/// Parse an update script: lines `+ u v w` (insert) or `- u v` (delete).
pub fn parse_update_script(text: &str) -> Result<Vec<GraphUpdate>, GraphError> {
    let mut updates = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut it = line.split_whitespace();
        match it.next() {
            Some("+") => {
                let u = parse_tok(it.next(), "u")?;
                let v = parse_tok(it.next(), "v")?;
                let w = parse_tok(it.next(), "w")?;
                updates.push(GraphUpdate::Insert { u, v, w });
            }
            Some("-") => {
                let u = parse_tok(it.next(), "u")?;
                let v = parse_tok(it.next(), "v")?;
                updates.push(GraphUpdate::Delete { u, v });
            }
            other => {
                return Err(GraphError::Parse(format!("bad script line kind: {other:?}")));
            }
        }
    }
    Ok(updates)
}

pub fn write_update_script(updates: &[GraphUpdate]) -> String {
    let mut out = String::new();
    for upd in updates {
        match *upd {
            GraphUpdate::Insert { u, v, w } => out.push_str(&format!("+ {u} {v} {w}\n")),
            GraphUpdate::Delete { u, v } => out.push_str(&format!("- {u} {v}\n")),
        }
    }
    out
}

fn parse_tok<T: std::str::FromStr>(tok: Option<&str>, what: &str) -> Result<T, GraphError> {
    tok.ok_or_else(|| GraphError::Parse(format!("missing field {what}")))?
        .parse()
        .map_err(|_| GraphError::Parse(format!("bad field {what}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_edge_lifecycle() {
        let mut g = Graph::new(3);
        g.apply_update(&GraphUpdate::Insert { u: 1, v: 2, w: 3 }).unwrap();
        assert_eq!(g.m(), 1);
        assert_eq!(g.weighted_degree(1), 3.0);
        assert_eq!(g.weighted_degree(2), 3.0);
        g.apply_update(&GraphUpdate::Delete { u: 1, v: 2 }).unwrap();
        assert_eq!(g.m(), 0);
        assert_eq!(g.weighted_degree(1), 0.0);
        assert_eq!(g.update_log().len(), 2);
    }

    #[test]
    fn duplicate_insert_and_missing_delete_rejected() {
        let mut g = Graph::new(3);
        g.apply_update(&GraphUpdate::Insert { u: 0, v: 1, w: 1 }).unwrap();
        assert!(g.apply_update(&GraphUpdate::Insert { u: 0, v: 1, w: 2 }).is_err());
        assert!(g.apply_update(&GraphUpdate::Insert { u: 1, v: 0, w: 2 }).is_err());
        assert!(g.apply_update(&GraphUpdate::Delete { u: 1, v: 2 }).is_err());
        assert!(g.apply_update(&GraphUpdate::Insert { u: 0, v: 0, w: 1 }).is_err());
    }

    #[test]
    fn graph_file_roundtrip() {
        let mut g = Graph::new(4);
        g.apply_update(&GraphUpdate::Insert { u: 0, v: 1, w: 2 }).unwrap();
        g.apply_update(&GraphUpdate::Insert { u: 2, v: 3, w: 7 }).unwrap();
        let text = write_graph(&g);
        assert_eq!(text, "4 2\n0 1 2\n2 3 7\n");
        let h = parse_graph(&text).unwrap();
        assert_eq!(h.edges(), g.edges());
    }

    #[test]
    fn script_roundtrip() {
        let script = "+ 0 1 5\n- 0 1\n+ 2 3 1\n";
        let upds = parse_update_script(script).unwrap();
        assert_eq!(upds.len(), 3);
        assert_eq!(write_update_script(&upds), script);
        assert!(parse_update_script("* 1 2").is_err());
    }
}
