//! Shared test helpers: brute-force metric oracles, random graphs, and
//! hand-built corpora.

#![allow(dead_code)]

pub mod fixtures;
pub mod oracle;

use aicnet_core::WeightedGraph;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Erdős–Rényi-style graph on `n` nodes named `v0..`, edge probability drawn
/// per graph, weights in (0, 5].
pub fn random_graph(seed: u64, max_n: usize) -> WeightedGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(0..=max_n);
    let p: f64 = rng.gen_range(0.0..1.0);
    let mut g = WeightedGraph::with_nodes((0..n).map(|i| format!("v{i}")));
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(p) {
                g.add_weight(&format!("v{i}"), &format!("v{j}"), rng.gen_range(0.1..5.0));
            }
        }
    }
    g
}

pub fn graph_from_edges(n: usize, edges: &[(usize, usize)]) -> WeightedGraph {
    let mut g = WeightedGraph::with_nodes((0..n).map(|i| format!("v{i}")));
    for &(u, v) in edges {
        g.add_weight(&format!("v{u}"), &format!("v{v}"), 1.0);
    }
    g
}

pub fn close(a: Option<f64>, b: Option<f64>, tol: f64) -> bool {
    match (a, b) {
        (None, None) => true,
        (Some(x), Some(y)) => (x - y).abs() <= tol,
        _ => false,
    }
}
