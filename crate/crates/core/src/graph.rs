//! Undirected weighted learner graphs and the two-mode author–word graph.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

/// Canonical unordered key: the smaller id first.
pub fn edge_key(a: &str, b: &str) -> (String, String) {
    if a <= b {
        (a.to_string(), b.to_string())
    } else {
        (b.to_string(), a.to_string())
    }
}

/// Undirected, weighted, loop-free graph over author ids.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct WeightedGraph {
    nodes: BTreeSet<String>,
    edges: BTreeMap<(String, String), f64>,
}

impl WeightedGraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_nodes<I, S>(nodes: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        WeightedGraph {
            nodes: nodes.into_iter().map(Into::into).collect(),
            edges: BTreeMap::new(),
        }
    }

    pub fn add_node(&mut self, id: impl Into<String>) {
        self.nodes.insert(id.into());
    }

    /// Adds `weight` to the (u, v) edge, creating nodes and edge as needed.
    /// Self-loops and non-positive weights are ignored.
    pub fn add_weight(&mut self, u: &str, v: &str, weight: f64) {
        if u == v || weight.is_nan() || weight <= 0.0 {
            return;
        }
        self.nodes.insert(u.to_string());
        self.nodes.insert(v.to_string());
        *self.edges.entry(edge_key(u, v)).or_insert(0.0) += weight;
    }

    /// Sets the (u, v) edge weight outright.
    pub fn set_weight(&mut self, u: &str, v: &str, weight: f64) {
        if u == v || weight.is_nan() || weight <= 0.0 {
            return;
        }
        self.nodes.insert(u.to_string());
        self.nodes.insert(v.to_string());
        self.edges.insert(edge_key(u, v), weight);
    }

    pub fn nodes(&self) -> &BTreeSet<String> {
        &self.nodes
    }

    pub fn contains_node(&self, id: &str) -> bool {
        self.nodes.contains(id)
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges in key order as `(u, v, weight)` with `u < v`.
    pub fn edges(&self) -> impl Iterator<Item = (&str, &str, f64)> {
        self.edges.iter().map(|((u, v), &w)| (u.as_str(), v.as_str(), w))
    }

    pub fn weight(&self, u: &str, v: &str) -> Option<f64> {
        self.edges.get(&edge_key(u, v)).copied()
    }

    pub fn total_weight(&self) -> f64 {
        self.edges.values().sum()
    }

    pub fn degree(&self, id: &str) -> usize {
        self.edges.keys().filter(|(u, v)| u == id || v == id).count()
    }

    pub fn isolates(&self) -> BTreeSet<String> {
        let touched: BTreeSet<&str> = self
            .edges
            .keys()
            .flat_map(|(u, v)| [u.as_str(), v.as_str()])
            .collect();
        self.nodes
            .iter()
            .filter(|n| !touched.contains(n.as_str()))
            .cloned()
            .collect()
    }

    pub fn is_isolated(&self, id: &str) -> bool {
        self.contains_node(id) && self.degree(id) == 0
    }

    /// Nodes with degree ≥ 1 and all edges; `self` is untouched.
    pub fn non_isolated_subgraph(&self) -> WeightedGraph {
        let isolates = self.isolates();
        WeightedGraph {
            nodes: self.nodes.difference(&isolates).cloned().collect(),
            edges: self.edges.clone(),
        }
    }

    /// Same nodes, weights replaced by `f(u, v, w)`.
    pub fn map_weights(&self, mut f: impl FnMut(&str, &str, f64) -> f64) -> WeightedGraph {
        let mut g = WeightedGraph::with_nodes(self.nodes.iter().cloned());
        for (u, v, w) in self.edges() {
            g.set_weight(u, v, f(u, v, w));
        }
        g
    }

    /// Same structure with ids passed through `f`.
    pub fn relabel(&self, mut f: impl FnMut(&str) -> String) -> WeightedGraph {
        let mut g = WeightedGraph::with_nodes(self.nodes.iter().map(|n| f(n)));
        for (u, v, w) in self.edges() {
            g.set_weight(&f(u), &f(v), w);
        }
        g
    }
}

/// Serializable node/edge listing of a [`WeightedGraph`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphListing {
    pub nodes: Vec<String>,
    pub edges: Vec<EdgeRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdgeRecord {
    pub source: String,
    pub target: String,
    pub weight: f64,
}

impl From<&WeightedGraph> for GraphListing {
    fn from(g: &WeightedGraph) -> Self {
        GraphListing {
            nodes: g.nodes.iter().cloned().collect(),
            edges: g
                .edges()
                .map(|(u, v, w)| EdgeRecord {
                    source: u.to_string(),
                    target: v.to_string(),
                    weight: w,
                })
                .collect(),
        }
    }
}

impl From<GraphListing> for WeightedGraph {
    fn from(l: GraphListing) -> Self {
        let mut g = WeightedGraph::with_nodes(l.nodes);
        for e in l.edges {
            g.set_weight(&e.source, &e.target, e.weight);
        }
        g
    }
}

/// Two-mode graph: authors on one side, lemmas on the other.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct BipartiteGraph {
    pub author_nodes: BTreeSet<String>,
    pub word_nodes: BTreeSet<String>,
    /// `(author, lemma)` pairs.
    pub edges: BTreeSet<(String, String)>,
}

impl BipartiteGraph {
    pub fn add_edge(&mut self, author: &str, lemma: &str) {
        self.author_nodes.insert(author.to_string());
        self.word_nodes.insert(lemma.to_string());
        self.edges.insert((author.to_string(), lemma.to_string()));
    }

    pub fn lemmas_of(&self, author: &str) -> BTreeSet<&str> {
        self.edges
            .iter()
            .filter(|(a, _)| a == author)
            .map(|(_, l)| l.as_str())
            .collect()
    }

    /// One-mode projection onto authors; weight = number of shared lemmas.
    pub fn project(&self) -> WeightedGraph {
        let mut by_word: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
        for (a, l) in &self.edges {
            by_word.entry(l.as_str()).or_default().push(a.as_str());
        }
        let mut g = WeightedGraph::with_nodes(self.author_nodes.iter().cloned());
        for authors in by_word.values() {
            for (i, u) in authors.iter().enumerate() {
                for v in &authors[i + 1..] {
                    g.add_weight(u, v, 1.0);
                }
            }
        }
        g
    }
}

pub fn project(bg: &BipartiteGraph) -> WeightedGraph {
    bg.project()
}

pub fn non_isolated_subgraph(g: &WeightedGraph) -> WeightedGraph {
    g.non_isolated_subgraph()
}
