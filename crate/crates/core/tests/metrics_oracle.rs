mod support;

use std::collections::BTreeMap;

use aicnet_core::metrics::{all_betweenness, all_closeness, betweenness, closeness, degree_centralization, transitivity};
use aicnet_core::{Execution, PathMode, WeightedGraph};
use proptest::prelude::*;
use support::{close, graph_from_edges, oracle, random_graph};

const TOL: f64 = 1e-9;

fn node_maps_match(a: &BTreeMap<String, Option<f64>>, b: &BTreeMap<String, Option<f64>>) -> bool {
    a.len() == b.len() && a.iter().all(|(k, v)| b.get(k).is_some_and(|w| close(*v, *w, TOL)))
}

fn matches_oracle(g: &WeightedGraph) -> Result<(), String> {
    if !close(transitivity(g), oracle::transitivity(g), TOL) {
        return Err(format!("transitivity {:?} vs {:?}", transitivity(g), oracle::transitivity(g)));
    }
    if !close(degree_centralization(g), oracle::degree_centralization(g), TOL) {
        return Err("degree centralization".into());
    }
    let c = all_closeness(g, PathMode::Unweighted, Execution::Sequential);
    if !node_maps_match(&c, &oracle::closeness(g)) {
        return Err(format!("closeness {c:?} vs {:?}", oracle::closeness(g)));
    }
    let b = all_betweenness(g, PathMode::Unweighted, Execution::Sequential);
    if !node_maps_match(&b, &oracle::betweenness(g)) {
        return Err(format!("betweenness {b:?} vs {:?}", oracle::betweenness(g)));
    }
    Ok(())
}

#[test]
fn two_hundred_seeded_graphs_match_oracle() {
    for seed in 0..200 {
        let g = random_graph(seed, 8);
        matches_oracle(&g).unwrap_or_else(|e| panic!("seed {seed}: {e}"));
    }
}

#[test]
fn oracle_path_counts_agree() {
    // Two brute-force ways of counting shortest paths must coincide.
    for seed in 0..100 {
        let g = random_graph(seed, 7);
        let d = oracle::Dense::new(&g);
        let dist = d.distances();
        let sigma = oracle::path_counts(&g);
        for (s, row) in sigma.iter().enumerate() {
            for (t, &count) in row.iter().enumerate() {
                if s != t {
                    assert_eq!(d.shortest_paths(s, t, &dist).len() as u64, count, "seed {seed}");
                }
            }
        }
    }
}

#[test]
fn closed_forms() {
    let k3 = graph_from_edges(3, &[(0, 1), (1, 2), (0, 2)]);
    assert_eq!(transitivity(&k3), Some(1.0));

    for n in 3..9 {
        let star = graph_from_edges(n, &(1..n).map(|i| (0, i)).collect::<Vec<_>>());
        assert_eq!(degree_centralization(&star), Some(1.0), "star {n}");
        assert_eq!(betweenness(&star, "v0").unwrap(), Some(1.0), "star {n}");

        let cycle = graph_from_edges(n, &(0..n).map(|i| (i, (i + 1) % n)).collect::<Vec<_>>());
        assert_eq!(degree_centralization(&cycle), Some(0.0), "cycle {n}");

        let mut all = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                all.push((i, j));
            }
        }
        let kn = graph_from_edges(n, &all);
        for i in 0..n {
            assert_eq!(closeness(&kn, &format!("v{i}")).unwrap(), Some(1.0));
        }
    }

    // A binary tree: leaves never lie inside a shortest path.
    let tree = graph_from_edges(7, &[(0, 1), (0, 2), (1, 3), (1, 4), (2, 5), (2, 6)]);
    for leaf in 3..7 {
        assert_eq!(betweenness(&tree, &format!("v{leaf}")).unwrap(), Some(0.0));
    }

    let k4_minus = graph_from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3)]);
    assert!((transitivity(&k4_minus).unwrap() - 0.75).abs() < 1e-12);
    let p4 = graph_from_edges(4, &[(0, 1), (1, 2), (2, 3)]);
    assert!((degree_centralization(&p4).unwrap() - 1.0 / 3.0).abs() < 1e-12);
    assert!((betweenness(&p4, "v1").unwrap().unwrap() - 2.0 / 3.0).abs() < 1e-12);
    let p3 = graph_from_edges(3, &[(0, 1), (1, 2)]);
    assert_eq!(transitivity(&p3), Some(0.0));
    assert_eq!(closeness(&p3, "v1").unwrap(), Some(1.0));
    assert!((closeness(&p3, "v0").unwrap().unwrap() - 2.0 / 3.0).abs() < 1e-12);
}

#[test]
fn isolates_and_unknown_nodes() {
    let mut g = graph_from_edges(3, &[(0, 1)]);
    g.add_node("lonely");
    assert_eq!(closeness(&g, "lonely").unwrap(), None);
    assert_eq!(betweenness(&g, "lonely").unwrap(), None);
    assert!(closeness(&g, "nobody").is_err());
    assert!(betweenness(&g, "nobody").is_err());
}

fn edge_list(max_n: usize) -> impl Strategy<Value = (usize, Vec<(usize, usize)>)> {
    (1..=max_n).prop_flat_map(|n| (Just(n), proptest::collection::vec((0..n, 0..n), 0..=n * n)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn metrics_match_oracle((n, edges) in edge_list(8)) {
        let g = graph_from_edges(n, &edges);
        prop_assert_eq!(matches_oracle(&g), Ok(()));
    }

    #[test]
    fn measures_lie_in_unit_interval((n, edges) in edge_list(10)) {
        let g = graph_from_edges(n, &edges);
        let unit = |v: Option<f64>| v.is_none_or(|x| (0.0..=1.0).contains(&x));
        prop_assert!(unit(transitivity(&g)));
        prop_assert!(unit(degree_centralization(&g)));
        for v in all_closeness(&g, PathMode::Unweighted, Execution::Sequential).values() {
            prop_assert!(unit(*v) && *v != Some(0.0));
        }
        for v in all_betweenness(&g, PathMode::Unweighted, Execution::Sequential).values() {
            prop_assert!(unit(*v));
        }
    }

    #[test]
    fn relabeling_permutes_results((n, edges) in edge_list(8), shift in 0usize..8) {
        let g = graph_from_edges(n, &edges);
        let rename = |id: &str| {
            let i: usize = id[1..].parse().unwrap();
            format!("w{}", (i + shift) % n)
        };
        let h = g.relabel(rename);
        prop_assert_eq!(transitivity(&g), transitivity(&h));
        prop_assert_eq!(degree_centralization(&g), degree_centralization(&h));
        let cg = all_closeness(&g, PathMode::Unweighted, Execution::Sequential);
        let ch = all_closeness(&h, PathMode::Unweighted, Execution::Sequential);
        let bg = all_betweenness(&g, PathMode::Unweighted, Execution::Sequential);
        let bh = all_betweenness(&h, PathMode::Unweighted, Execution::Sequential);
        for id in g.nodes() {
            prop_assert!(close(cg[id], ch[&rename(id)], TOL));
            prop_assert!(close(bg[id], bh[&rename(id)], TOL));
        }
    }

    #[test]
    fn reweighting_changes_nothing(seed in any::<u64>(), factor in 0.01f64..100.0) {
        let g = random_graph(seed, 9);
        let mut k = 0.0;
        let h = g.map_weights(|_, _, w| { k += 1.0; w * factor + k });
        prop_assert_eq!(transitivity(&g), transitivity(&h));
        prop_assert_eq!(degree_centralization(&g), degree_centralization(&h));
        prop_assert_eq!(
            all_closeness(&g, PathMode::Unweighted, Execution::Sequential),
            all_closeness(&h, PathMode::Unweighted, Execution::Sequential)
        );
        prop_assert_eq!(
            all_betweenness(&g, PathMode::Unweighted, Execution::Sequential),
            all_betweenness(&h, PathMode::Unweighted, Execution::Sequential)
        );
    }

    #[test]
    fn execution_modes_agree(seed in any::<u64>()) {
        let g = random_graph(seed, 12);
        for mode in [PathMode::Unweighted, PathMode::Weighted] {
            prop_assert_eq!(
                all_closeness(&g, mode, Execution::Sequential),
                all_closeness(&g, mode, Execution::Parallel)
            );
            prop_assert_eq!(
                all_betweenness(&g, mode, Execution::Sequential),
                all_betweenness(&g, mode, Execution::Parallel)
            );
        }
    }

    #[test]
    fn isolates_do_not_move_measures((n, edges) in edge_list(8), extra in 1usize..4) {
        let g = graph_from_edges(n, &edges);
        let mut h = g.clone();
        for i in 0..extra {
            h.add_node(format!("iso{i}"));
        }
        prop_assert_eq!(transitivity(&g), transitivity(&h));
        prop_assert_eq!(degree_centralization(&g), degree_centralization(&h));
        let bh = all_betweenness(&h, PathMode::Unweighted, Execution::Sequential);
        for (id, v) in all_betweenness(&g, PathMode::Unweighted, Execution::Sequential) {
            prop_assert_eq!(v, bh[&id]);
        }
    }
}
