mod support;

use std::collections::BTreeSet;

use aicnet_core::networks::{build_all, build_an, build_an_with, build_in};
use aicnet_core::semantic::{cosine, hash_embed};
use aicnet_core::synth::{generate, verify, GraphDiff};
use aicnet_core::textpipe::{select_cn_words, select_cn_words_traced, DocumentSet};
use aicnet_core::{Analyzer, Artifact, Corpus, EmbeddingStore, Execution, NodeScope, Quote, SynthParams, WordSelectionParams};
use proptest::prelude::*;
use support::fixtures;

fn edges(g: &aicnet_core::WeightedGraph) -> BTreeSet<(String, String)> {
    g.edges().map(|(u, v, _)| (u.to_string(), v.to_string())).collect()
}

#[test]
fn three_quote_threshold_example() {
    let (corpus, store) = fixtures::three_quotes();
    let an = build_an(corpus.reading("tq").unwrap(), &corpus, &store, 0.8).unwrap();
    assert_eq!(an.edge_count(), 1);
    assert!((an.weight("A", "B").unwrap() - 0.8).abs() < 1e-9);
    assert!(an.is_isolated("C"));
    let v2 = store.get("q2").unwrap();
    let v3 = store.get("q3").unwrap();
    assert!((cosine(v2, v3).unwrap() - 0.5).abs() < 1e-12);
}

#[test]
fn common_reference_is_exactly_one() {
    let (corpus, store) = fixtures::common_reference();
    let reading = corpus.reading("r").unwrap();
    let an = build_an(reading, &corpus, &store, 0.8).unwrap();
    assert_eq!(an.weight("A", "B"), Some(1.0));
    let hashed = EmbeddingStore::hashed(&corpus, 64).unwrap();
    assert_eq!(build_an(reading, &corpus, &hashed, 0.8).unwrap().weight("A", "B"), Some(1.0));
    assert_eq!(build_an(reading, &corpus, &hashed, 1.0).unwrap().weight("A", "B"), Some(1.0));
}

#[test]
fn unrelated_quotes_stay_apart_under_hashing() {
    let a = hash_embed("Ballet emerged from the royal court of France.", 256).unwrap();
    let b = hash_embed("Improvisation frees dancers to discover new movement.", 256).unwrap();
    let c = cosine(&a, &b).unwrap();
    assert!(c < 0.8, "cosine {c}");
    let same = hash_embed("ballet emerged from the ROYAL court of France.", 256).unwrap();
    assert!((cosine(&a, &same).unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn cn_hand_check() {
    let corpus = fixtures::cn_fixture();
    let reading = corpus.reading("cn").unwrap();
    let analyzer = Analyzer::default();
    let docs = DocumentSet::from_reading(reading, &analyzer, &BTreeSet::new(), Execution::Sequential);
    assert_eq!(docs.len(), 4);
    for ((lemma, doc), want) in fixtures::cn_expected_tfidf() {
        let got = docs.tfidf(&lemma, &doc).unwrap();
        assert!((got - want).abs() < 1e-9, "{lemma}/{doc}: {got} vs {want}");
    }

    // Floor 5 keeps eight lemmas; the five lowest (dance, memory, music,
    // body, ritual) go; culture, story and gesture survive.
    let params = WordSelectionParams::default();
    let trace = select_cn_words_traced(reading, &params, &analyzer, Execution::Sequential).unwrap();
    assert_eq!(trace.frequent.len(), 8);
    assert!(!trace.frequent.contains_key("space") && !trace.frequent.contains_key("idea"));
    assert_eq!(trace.dropped, ["dance", "memory", "music", "body", "ritual"]);
    let picked: Vec<(&str, &str)> = trace.selected.iter().map(|w| (w.lemma.as_str(), w.author_id.as_str())).collect();
    assert_eq!(picked, [("culture", "C"), ("story", "A"), ("gesture", "D"), ("gesture", "A")]);
    let expected = fixtures::cn_expected_tfidf();
    assert!((trace.selected[0].score - expected[&("culture".into(), "d3".into())]).abs() < 1e-9);

    let top1 = WordSelectionParams { top_k: 1, ..Default::default() };
    let picked = select_cn_words(reading, &top1, &analyzer).unwrap();
    assert_eq!(picked.len(), 1);
    assert_eq!((picked[0].lemma.as_str(), picked[0].author_id.as_str()), ("culture", "C"));

    let nets = build_all(reading, &corpus, &EmbeddingStore::hashed(&corpus, 64).unwrap(), &analyzer, &Default::default()).unwrap();
    assert_eq!(edges(&nets.cn), BTreeSet::from([("A".to_string(), "D".to_string())]));
    assert!(nets.cn.is_isolated("B"));
}

#[test]
fn same_author_keeps_one_entry_per_word() {
    let body = "pedagogy pedagogy pedagogy the idea";
    let corpus = Corpus::from_parts(
        [],
        [Quote::new("q", "r", "text")],
        [
            Artifact::annotation("a1", "A", "r", "q", body),
            Artifact::annotation("a2", "A", "r", "q", "pedagogy pedagogy dance"),
            Artifact::annotation("b1", "B", "r", "q", body),
            Artifact::annotation("c1", "C", "r", "q", "music"),
        ],
    )
    .unwrap();
    let params = WordSelectionParams { drop_lowest: 0, ..Default::default() };
    let words = select_cn_words(corpus.reading("r").unwrap(), &params, &Analyzer::default()).unwrap();
    let pairs: Vec<(&str, &str)> = words.iter().map(|w| (w.lemma.as_str(), w.author_id.as_str())).collect();
    assert_eq!(pairs, [("pedagogy", "A"), ("pedagogy", "B")]);
}

#[test]
fn synth_mutations_show_in_the_diff() {
    let mut p = SynthParams::new(4, 4, vec![vec![0, 1], vec![2, 3]], 11);
    p.reply_edges = vec![(0, 2), (3, 1), (1, 0)];
    p.vocab_overlap.insert((0, 3), 2);
    let (corpus, store, truth) = generate(&p).unwrap();
    let analyzer = Analyzer::default();
    assert!(verify(&corpus, &store, &truth, &p.pipeline_config(), &analyzer).unwrap().passed());

    // Drop one reply: the IN diff names exactly that edge.
    let reading = corpus.reading("synth").unwrap();
    let victim = reading.artifacts().iter().find(|a| a.parent_id.is_some()).unwrap().id.clone();
    let kept: Vec<Artifact> = reading.artifacts().iter().filter(|a| a.id != victim).cloned().collect();
    let mutated = Corpus::from_parts([], reading.quotes.values().cloned(), kept).unwrap();
    let report = verify(&mutated, &store, &truth, &p.pipeline_config(), &analyzer).unwrap();
    assert_eq!(report.in_.removed.len() + report.in_.reweighted.len(), 1, "{report:?}");
    assert!(report.in_.added.is_empty());

    // With τ = 0 every non-negative pair joins: AN may only gain edges.
    let mut loose = p.pipeline_config();
    loose.threshold = 1e-12;
    let report = verify(&corpus, &store, &truth, &loose, &analyzer).unwrap();
    assert!(report.an.removed.is_empty());
}

#[test]
fn graph_diff_reports_each_kind() {
    let mut a = aicnet_core::WeightedGraph::new();
    a.add_weight("x", "y", 1.0);
    a.add_weight("y", "z", 2.0);
    let mut b = aicnet_core::WeightedGraph::new();
    b.add_weight("x", "y", 1.5);
    b.add_weight("x", "z", 1.0);
    let d = GraphDiff::between(&a, &b, 1e-9);
    assert_eq!((d.added.len(), d.removed.len(), d.reweighted.len()), (1, 1, 1));
    assert!(GraphDiff::between(&a, &a, 0.0).is_empty());
}

#[test]
fn roster_scope_adds_isolates_only() {
    let corpus = Corpus::from_parts(
        [],
        [Quote::new("q", "r", "one"), Quote::new("p", "s", "two")],
        [
            Artifact::annotation("a", "A", "r", "q", "x"),
            Artifact::reply("b", "B", "r", "a", "y"),
            Artifact::annotation("c", "C", "s", "p", "z"),
        ],
    )
    .unwrap();
    let r = corpus.reading("r").unwrap();
    let store = EmbeddingStore::hashed(&corpus, 32).unwrap();
    let active = build_an_with(r, &corpus, &store, 0.8, NodeScope::Active, Execution::Sequential).unwrap();
    let roster = build_an_with(r, &corpus, &store, 0.8, NodeScope::Roster, Execution::Sequential).unwrap();
    assert_eq!(active.node_count(), 2);
    assert_eq!(roster.node_count(), 3);
    assert!(roster.is_isolated("C"));
    assert_eq!(edges(&active), edges(&roster));
    assert_eq!(build_in(r, &corpus).weight("A", "B"), Some(1.0));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn threshold_nesting(seed in any::<u64>(), lo in 0.05f64..1.0, hi in 0.05f64..1.0) {
        let (lo, hi) = (lo.min(hi), lo.max(hi));
        let corpus = fixtures::random_corpus(seed);
        let store = EmbeddingStore::hashed(&corpus, 64).unwrap();
        let r = corpus.reading("r").unwrap();
        let loose = edges(&build_an(r, &corpus, &store, lo).unwrap());
        let strict = edges(&build_an(r, &corpus, &store, hi).unwrap());
        prop_assert!(strict.is_subset(&loose));
    }

    #[test]
    fn planted_structure_is_recovered(seed in any::<u64>(), n in 2usize..10, q in 1usize..8) {
        let p = SynthParams::randomized(n, q, seed);
        let (corpus, store, truth) = generate(&p).unwrap();
        let report = verify(&corpus, &store, &truth, &p.pipeline_config(), &Analyzer::default()).unwrap();
        prop_assert!(report.passed(), "{:?}", report);
    }

    #[test]
    fn selection_invariants(seed in any::<u64>(), min_f in 1usize..6, drop in 0usize..6, k in 1usize..30) {
        let p = SynthParams::randomized(6, 4, seed);
        let (corpus, _, _) = generate(&p).unwrap();
        let params = WordSelectionParams { min_frequency: min_f, drop_lowest: drop, top_k: k, ..Default::default() };
        let trace = select_cn_words_traced(corpus.reading("synth").unwrap(), &params, &Analyzer::default(), Execution::Sequential).unwrap();
        prop_assert!(trace.selected.len() <= k);
        prop_assert!(trace.dropped.len() == drop.min(trace.frequent.len()));
        let mut seen = BTreeSet::new();
        for w in &trace.selected {
            prop_assert!(seen.insert((w.lemma.clone(), w.author_id.clone())));
            prop_assert!(trace.frequent[&w.lemma] >= min_f);
            prop_assert!(!trace.dropped.contains(&w.lemma));
        }
        prop_assert!(trace.selected.windows(2).all(|w| w[0].score >= w[1].score));
        for d in &trace.dropped {
            for (l, s) in &trace.lemma_scores {
                if !trace.dropped.contains(l) {
                    prop_assert!(trace.lemma_scores[d] <= *s);
                }
            }
        }
    }

    #[test]
    fn execution_modes_build_identical_networks(seed in any::<u64>()) {
        let corpus = fixtures::random_corpus(seed);
        let store = EmbeddingStore::hashed(&corpus, 64).unwrap();
        let analyzer = Analyzer::default();
        let r = corpus.reading("r").unwrap();
        let mut cfg = aicnet_core::PipelineConfig { exec: Execution::Sequential, ..Default::default() };
        cfg.words.min_frequency = 1;
        let seq = build_all(r, &corpus, &store, &analyzer, &cfg).unwrap();
        cfg.exec = Execution::Parallel;
        let par = build_all(r, &corpus, &store, &analyzer, &cfg).unwrap();
        prop_assert_eq!(seq.an, par.an);
        prop_assert_eq!(seq.in_, par.in_);
        prop_assert_eq!(seq.cn, par.cn);
    }
}
