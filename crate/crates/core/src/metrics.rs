//! Network- and node-level measures.
//!
//! Every measure runs on the unweighted skeleton of the graph unless
//! [`PathMode::Weighted`] is requested explicitly. Zero denominators give
//! `None`, never NaN.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, BinaryHeap, VecDeque};

use serde::Serialize;
use thiserror::Error;

use crate::exec::Execution;
use crate::graph::WeightedGraph;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MetricsError {
    #[error("node {0} is not in the graph")]
    UnknownNode(String),
}

/// How path lengths are measured for closeness and betweenness.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PathMode {
    /// Every edge has length 1.
    #[default]
    Unweighted,
    /// Edge length is `1 / weight`.
    Weighted,
}

/// Index-based adjacency view of a graph.
#[derive(Debug, Clone)]
pub struct Skeleton {
    ids: Vec<String>,
    index: BTreeMap<String, usize>,
    adj: Vec<Vec<(usize, f64)>>,
}

impl Skeleton {
    pub fn new(g: &WeightedGraph) -> Self {
        let ids: Vec<String> = g.nodes().iter().cloned().collect();
        let index: BTreeMap<String, usize> = ids.iter().enumerate().map(|(i, id)| (id.clone(), i)).collect();
        let mut adj = vec![Vec::new(); ids.len()];
        for (u, v, w) in g.edges() {
            let (iu, iv) = (index[u], index[v]);
            adj[iu].push((iv, w));
            adj[iv].push((iu, w));
        }
        for list in &mut adj {
            list.sort_by_key(|&(j, _)| j);
        }
        Skeleton { ids, index, adj }
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn degree(&self, i: usize) -> usize {
        self.adj[i].len()
    }

    fn node(&self, id: &str) -> Result<usize, MetricsError> {
        self.index
            .get(id)
            .copied()
            .ok_or_else(|| MetricsError::UnknownNode(id.to_string()))
    }

    fn non_isolated_count(&self) -> usize {
        self.adj.iter().filter(|a| !a.is_empty()).count()
    }

    /// Hop distances from `s`; `None` for unreachable nodes.
    fn bfs(&self, s: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.len()];
        dist[s] = Some(0);
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            let du = dist[u].expect("queued nodes have a distance");
            for &(w, _) in &self.adj[u] {
                if dist[w].is_none() {
                    dist[w] = Some(du + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    fn dijkstra(&self, s: usize) -> Vec<Option<f64>> {
        let mut dist: Vec<Option<f64>> = vec![None; self.len()];
        let mut heap = BinaryHeap::new();
        dist[s] = Some(0.0);
        heap.push(HeapItem { dist: 0.0, node: s });
        while let Some(HeapItem { dist: d, node: u }) = heap.pop() {
            if dist[u].is_some_and(|best| d > best) {
                continue;
            }
            for &(w, weight) in &self.adj[u] {
                let nd = d + 1.0 / weight;
                if dist[w].is_none_or(|cur| nd < cur) {
                    dist[w] = Some(nd);
                    heap.push(HeapItem { dist: nd, node: w });
                }
            }
        }
        dist
    }

    /// Brandes single-source dependency accumulation.
    fn dependencies(&self, s: usize, mode: PathMode) -> Vec<f64> {
        let n = self.len();
        let mut order = Vec::with_capacity(n);
        let mut preds: Vec<Vec<usize>> = vec![Vec::new(); n];
        let mut sigma = vec![0.0f64; n];
        sigma[s] = 1.0;
        match mode {
            PathMode::Unweighted => {
                let mut dist: Vec<Option<usize>> = vec![None; n];
                dist[s] = Some(0);
                let mut queue = VecDeque::from([s]);
                while let Some(v) = queue.pop_front() {
                    order.push(v);
                    let dv = dist[v].expect("queued nodes have a distance");
                    for &(w, _) in &self.adj[v] {
                        if dist[w].is_none() {
                            dist[w] = Some(dv + 1);
                            queue.push_back(w);
                        }
                        if dist[w] == Some(dv + 1) {
                            sigma[w] += sigma[v];
                            preds[w].push(v);
                        }
                    }
                }
            }
            PathMode::Weighted => {
                let dist = self.dijkstra(s);
                let mut reach: Vec<usize> = (0..n).filter(|&i| dist[i].is_some()).collect();
                reach.sort_by(|&a, &b| dist[a].partial_cmp(&dist[b]).unwrap_or(Ordering::Equal).then(a.cmp(&b)));
                for &v in &reach {
                    let dv = dist[v].expect("reachable");
                    for &(w, weight) in &self.adj[v] {
                        let dw = dist[w].expect("neighbour of reachable node");
                        if close(dv + 1.0 / weight, dw) && dw > dv {
                            preds[w].push(v);
                        }
                    }
                }
                for &w in &reach {
                    for &v in &preds[w] {
                        sigma[w] += sigma[v];
                    }
                }
                order = reach;
            }
        }
        let mut delta = vec![0.0f64; n];
        while let Some(w) = order.pop() {
            for &v in &preds[w] {
                delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
            }
        }
        delta[s] = 0.0;
        delta
    }
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12 * a.abs().max(b.abs()).max(1.0)
}

#[derive(PartialEq)]
struct HeapItem {
    dist: f64,
    node: usize,
}

impl Eq for HeapItem {}

impl Ord for HeapItem {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .dist
            .total_cmp(&self.dist)
            .then_with(|| other.node.cmp(&self.node))
    }
}

impl PartialOrd for HeapItem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Global transitivity: 3 × triangles / connected triples.
pub fn transitivity(g: &WeightedGraph) -> Option<f64> {
    let sk = Skeleton::new(g);
    let neighbours: Vec<BTreeSet<usize>> = sk.adj.iter().map(|a| a.iter().map(|&(j, _)| j).collect()).collect();
    let mut triples = 0u64;
    let mut closed = 0u64;
    for nb in &neighbours {
        let d = nb.len() as u64;
        triples += d * d.saturating_sub(1) / 2;
        let list: Vec<usize> = nb.iter().copied().collect();
        for (i, &a) in list.iter().enumerate() {
            for &b in &list[i + 1..] {
                if neighbours[a].contains(&b) {
                    closed += 1;
                }
            }
        }
    }
    // Each triangle closes one triple at each of its three corners.
    (triples > 0).then(|| closed as f64 / triples as f64)
}

/// Freeman degree centralization over the non-isolated nodes.
pub fn degree_centralization(g: &WeightedGraph) -> Option<f64> {
    let sk = Skeleton::new(g);
    let degrees: Vec<usize> = (0..sk.len()).map(|i| sk.degree(i)).filter(|&d| d > 0).collect();
    let n = degrees.len();
    if n < 3 {
        return None;
    }
    let max = *degrees.iter().max().expect("n >= 3");
    let sum: usize = degrees.iter().map(|d| max - d).sum();
    Some(sum as f64 / ((n - 1) * (n - 2)) as f64)
}

fn closeness_at(sk: &Skeleton, v: usize, mode: PathMode) -> Option<f64> {
    if sk.degree(v) == 0 {
        return None;
    }
    let (reached, total) = match mode {
        PathMode::Unweighted => {
            let d = sk.bfs(v);
            let reach: Vec<usize> = d.iter().flatten().copied().collect();
            (reach.len(), reach.iter().sum::<usize>() as f64)
        }
        PathMode::Weighted => {
            let d = sk.dijkstra(v);
            let reach: Vec<f64> = d.iter().flatten().copied().collect();
            (reach.len(), reach.iter().sum::<f64>())
        }
    };
    // `reached` counts v itself, so it is the component size k.
    Some((reached - 1) as f64 / total)
}

/// Component-local closeness: (k − 1) / Σ dist(v, u) over v's component.
pub fn closeness(g: &WeightedGraph, v: &str) -> Result<Option<f64>, MetricsError> {
    closeness_with(g, v, PathMode::Unweighted)
}

pub fn closeness_with(g: &WeightedGraph, v: &str, mode: PathMode) -> Result<Option<f64>, MetricsError> {
    let sk = Skeleton::new(g);
    let i = sk.node(v)?;
    Ok(closeness_at(&sk, i, mode))
}

pub fn all_closeness(g: &WeightedGraph, mode: PathMode, exec: Execution) -> BTreeMap<String, Option<f64>> {
    let sk = Skeleton::new(g);
    let values = exec.map_indexed(sk.len(), |i| closeness_at(&sk, i, mode));
    sk.ids.iter().cloned().zip(values).collect()
}

/// Normalized betweenness of every node.
///
/// Per-source dependency vectors are summed in source order, so sequential
/// and parallel runs are bit-identical.
pub fn all_betweenness(g: &WeightedGraph, mode: PathMode, exec: Execution) -> BTreeMap<String, Option<f64>> {
    let sk = Skeleton::new(g);
    let n = sk.len();
    let per_source = exec.map_indexed(n, |s| {
        if sk.degree(s) == 0 {
            Vec::new()
        } else {
            sk.dependencies(s, mode)
        }
    });
    let mut raw = vec![0.0f64; n];
    for deps in &per_source {
        for (acc, d) in raw.iter_mut().zip(deps) {
            *acc += d;
        }
    }
    let m = sk.non_isolated_count();
    let pairs = if m >= 3 { ((m - 1) * (m - 2)) as f64 / 2.0 } else { 0.0 };
    sk.ids
        .iter()
        .enumerate()
        .map(|(i, id)| {
            let value = if sk.degree(i) == 0 {
                None
            } else if pairs == 0.0 {
                // One or two connected nodes: no pair can route through anyone.
                Some(0.0)
            } else {
                // Ordered sources count each unordered pair twice.
                Some(raw[i] / 2.0 / pairs)
            };
            (id.clone(), value)
        })
        .collect()
}

pub fn betweenness(g: &WeightedGraph, v: &str) -> Result<Option<f64>, MetricsError> {
    betweenness_with(g, v, PathMode::Unweighted)
}

pub fn betweenness_with(g: &WeightedGraph, v: &str, mode: PathMode) -> Result<Option<f64>, MetricsError> {
    if !g.contains_node(v) {
        return Err(MetricsError::UnknownNode(v.to_string()));
    }
    Ok(all_betweenness(g, mode, Execution::Sequential)[v])
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NodeMetricsRow {
    pub author_id: String,
    pub an_closeness: Option<f64>,
    pub in_betweenness: Option<f64>,
    pub cn_betweenness: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NetworkMetricsRow {
    pub reading_id: String,
    pub an_transitivity: Option<f64>,
    pub in_centralization: Option<f64>,
    pub cn_transitivity: Option<f64>,
}

/// One row per roster author, sorted by id; `None` where the author is
/// isolated in, or absent from, a network.
pub fn node_report(
    an: &WeightedGraph,
    in_: &WeightedGraph,
    cn: &WeightedGraph,
    roster: &BTreeSet<String>,
    exec: Execution,
) -> Vec<NodeMetricsRow> {
    let an_c = all_closeness(an, PathMode::Unweighted, exec);
    let in_b = all_betweenness(in_, PathMode::Unweighted, exec);
    let cn_b = all_betweenness(cn, PathMode::Unweighted, exec);
    let lookup = |m: &BTreeMap<String, Option<f64>>, id: &str| m.get(id).copied().flatten();
    roster
        .iter()
        .map(|id| NodeMetricsRow {
            author_id: id.clone(),
            an_closeness: lookup(&an_c, id),
            in_betweenness: lookup(&in_b, id),
            cn_betweenness: lookup(&cn_b, id),
        })
        .collect()
}

pub fn network_row(reading_id: &str, an: &WeightedGraph, in_: &WeightedGraph, cn: &WeightedGraph) -> NetworkMetricsRow {
    NetworkMetricsRow {
        reading_id: reading_id.to_string(),
        an_transitivity: transitivity(an),
        in_centralization: degree_centralization(in_),
        cn_transitivity: transitivity(cn),
    }
}

/// Network-level rows for several readings, ordered by reading id.
pub fn network_report<'a, I>(readings: I) -> Vec<NetworkMetricsRow>
where
    I: IntoIterator<Item = (&'a str, &'a WeightedGraph, &'a WeightedGraph, &'a WeightedGraph)>,
{
    let mut rows: Vec<NetworkMetricsRow> = readings
        .into_iter()
        .map(|(id, an, in_, cn)| network_row(id, an, in_, cn))
        .collect();
    rows.sort_by(|a, b| a.reading_id.cmp(&b.reading_id));
    rows
}
