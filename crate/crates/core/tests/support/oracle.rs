//! Brute-force reference implementations of the graph measures. Written for
//! obviousness, not speed: triple enumeration, Floyd–Warshall distances,
//! explicit enumeration of every shortest path, adjacency-matrix powers.

#![allow(clippy::needless_range_loop)]

use std::collections::BTreeMap;

use aicnet_core::WeightedGraph;

/// Adjacency matrix of the unweighted skeleton, node order = sorted ids.
pub struct Dense {
    pub ids: Vec<String>,
    pub adj: Vec<Vec<bool>>,
}

impl Dense {
    pub fn new(g: &WeightedGraph) -> Self {
        let ids: Vec<String> = g.nodes().iter().cloned().collect();
        let n = ids.len();
        let mut adj = vec![vec![false; n]; n];
        for i in 0..n {
            for j in 0..n {
                adj[i][j] = i != j && g.weight(&ids[i], &ids[j]).is_some();
            }
        }
        Dense { ids, adj }
    }

    pub fn degree(&self, i: usize) -> usize {
        self.adj[i].iter().filter(|&&b| b).count()
    }

    fn active(&self) -> Vec<usize> {
        (0..self.ids.len()).filter(|&i| self.degree(i) > 0).collect()
    }

    /// All-pairs hop distances; `None` when unreachable.
    pub fn distances(&self) -> Vec<Vec<Option<usize>>> {
        let n = self.ids.len();
        let mut d = vec![vec![None; n]; n];
        for i in 0..n {
            d[i][i] = Some(0);
            for j in 0..n {
                if self.adj[i][j] {
                    d[i][j] = Some(1);
                }
            }
        }
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    if let (Some(a), Some(b)) = (d[i][k], d[k][j]) {
                        if d[i][j].is_none_or(|c| a + b < c) {
                            d[i][j] = Some(a + b);
                        }
                    }
                }
            }
        }
        d
    }

    /// Every shortest path from `s` to `t`, as node sequences.
    pub fn shortest_paths(&self, s: usize, t: usize, dist: &[Vec<Option<usize>>]) -> Vec<Vec<usize>> {
        let Some(len) = dist[s][t] else { return Vec::new() };
        let mut out = Vec::new();
        let mut path = vec![s];
        self.extend(&mut path, t, len, &mut out);
        out
    }

    fn extend(&self, path: &mut Vec<usize>, t: usize, len: usize, out: &mut Vec<Vec<usize>>) {
        let last = *path.last().unwrap();
        if path.len() - 1 == len {
            if last == t {
                out.push(path.clone());
            }
            return;
        }
        for next in 0..self.ids.len() {
            if self.adj[last][next] && !path.contains(&next) {
                path.push(next);
                self.extend(path, t, len, out);
                path.pop();
            }
        }
    }
}

pub fn transitivity(g: &WeightedGraph) -> Option<f64> {
    let d = Dense::new(g);
    let n = d.ids.len();
    let (mut closed, mut connected) = (0usize, 0usize);
    // Each unordered triple {a, b, c} with its centre b.
    for b in 0..n {
        for a in 0..n {
            for c in a + 1..n {
                if a != b && c != b && d.adj[a][b] && d.adj[b][c] {
                    connected += 1;
                    if d.adj[a][c] {
                        closed += 1;
                    }
                }
            }
        }
    }
    (connected > 0).then(|| closed as f64 / connected as f64)
}

pub fn degree_centralization(g: &WeightedGraph) -> Option<f64> {
    let d = Dense::new(g);
    let act = d.active();
    let n = act.len();
    if n < 3 {
        return None;
    }
    let degs: Vec<usize> = act.iter().map(|&i| d.degree(i)).collect();
    let max = *degs.iter().max().unwrap();
    let sum: usize = degs.iter().map(|&x| max - x).sum();
    Some(sum as f64 / ((n - 1) * (n - 2)) as f64)
}

pub fn closeness(g: &WeightedGraph) -> BTreeMap<String, Option<f64>> {
    let d = Dense::new(g);
    let dist = d.distances();
    (0..d.ids.len())
        .map(|v| {
            let reach: Vec<usize> = (0..d.ids.len()).filter(|&u| u != v).filter_map(|u| dist[v][u]).collect();
            let value = (!reach.is_empty()).then(|| reach.len() as f64 / reach.iter().sum::<usize>() as f64);
            (d.ids[v].clone(), value)
        })
        .collect()
}

pub fn betweenness(g: &WeightedGraph) -> BTreeMap<String, Option<f64>> {
    let d = Dense::new(g);
    let n = d.ids.len();
    let dist = d.distances();
    let mut raw = vec![0.0f64; n];
    for s in 0..n {
        for t in s + 1..n {
            let paths = d.shortest_paths(s, t, &dist);
            if paths.is_empty() {
                continue;
            }
            let total = paths.len() as f64;
            for v in 0..n {
                let through = paths.iter().filter(|p| p[1..p.len() - 1].contains(&v)).count();
                raw[v] += through as f64 / total;
            }
        }
    }
    let m = d.active().len();
    (0..n)
        .map(|v| {
            let value = if d.degree(v) == 0 {
                None
            } else if m < 3 {
                Some(0.0)
            } else {
                Some(raw[v] / ((m - 1) * (m - 2)) as f64 * 2.0)
            };
            (d.ids[v].clone(), value)
        })
        .collect()
}

/// Shortest-path counts from powers of the adjacency matrix:
/// σ_st = (A^d)[s][t] where d = dist(s, t).
pub fn path_counts(g: &WeightedGraph) -> Vec<Vec<u64>> {
    let d = Dense::new(g);
    let n = d.ids.len();
    let dist = d.distances();
    let a: Vec<Vec<u64>> = d.adj.iter().map(|r| r.iter().map(|&b| b as u64).collect()).collect();
    let mut power: Vec<Vec<u64>> = (0..n).map(|i| (0..n).map(|j| (i == j) as u64).collect()).collect();
    let mut sigma = vec![vec![0u64; n]; n];
    for k in 0..=n {
        for i in 0..n {
            for j in 0..n {
                if dist[i][j] == Some(k) {
                    sigma[i][j] = power[i][j];
                }
            }
        }
        power = (0..n)
            .map(|i| (0..n).map(|j| (0..n).map(|m| power[i][m] * a[m][j]).sum()).collect())
            .collect();
    }
    sigma
}
