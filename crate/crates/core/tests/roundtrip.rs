mod support;

use aicnet_core::corpus::{load_corpus, read_corpus, thread_root, write_csv, write_jsonl};
use aicnet_core::export::{parse_dot, parse_graphml, parse_json, to_dot, to_graphml, to_json};
use aicnet_core::semantic::{load_embeddings, read_embeddings_binary, read_embeddings_jsonl, write_embeddings_binary, write_embeddings_jsonl};
use aicnet_core::synth::generate;
use aicnet_core::{Corpus, CorpusFormat, EmbeddingStore, SynthParams, WeightedGraph};
use proptest::prelude::*;
use support::{fixtures, random_graph};

fn with_stray_isolate(mut g: WeightedGraph) -> WeightedGraph {
    g.add_node("odd \"id\" <&>");
    g
}

fn jsonl(c: &Corpus) -> Vec<u8> {
    let mut out = Vec::new();
    write_jsonl(c, &mut out).unwrap();
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn graph_exports_round_trip(seed in any::<u64>()) {
        let g = with_stray_isolate(random_graph(seed, 10));
        prop_assert_eq!(&parse_graphml(&to_graphml(&g, "g")).unwrap(), &g);
        prop_assert_eq!(&parse_dot(&to_dot(&g, "g")).unwrap(), &g);
        prop_assert_eq!(&parse_json(&to_json(&g, "g")).unwrap(), &g);
    }

    #[test]
    fn corpus_round_trips_through_both_formats(seed in any::<u64>(), synthetic in any::<bool>()) {
        let corpus = if synthetic {
            generate(&SynthParams::randomized(5, 3, seed)).unwrap().0
        } else {
            fixtures::random_corpus(seed)
        };
        let bytes = jsonl(&corpus);
        let back = read_corpus(bytes.as_slice(), CorpusFormat::Jsonl).unwrap();
        prop_assert_eq!(&back, &corpus);
        prop_assert_eq!(jsonl(&back), bytes);

        let mut csv = Vec::new();
        write_csv(&corpus, &mut csv).unwrap();
        prop_assert_eq!(&read_corpus(csv.as_slice(), CorpusFormat::Csv).unwrap(), &corpus);
    }

    #[test]
    fn thread_root_is_idempotent(seed in any::<u64>()) {
        let corpus = fixtures::random_corpus(seed);
        for reading in corpus.readings.values() {
            for a in reading.artifacts() {
                let root = thread_root(a, &corpus).unwrap();
                prop_assert!(root.is_annotation());
                prop_assert_eq!(thread_root(root, &corpus).unwrap(), root);
            }
        }
    }

    #[test]
    fn embeddings_round_trip(seed in any::<u64>()) {
        let corpus = fixtures::random_corpus(seed);
        let store = EmbeddingStore::hashed(&corpus, 16).unwrap();
        let mut text = Vec::new();
        write_embeddings_jsonl(&store, &mut text).unwrap();
        prop_assert_eq!(&read_embeddings_jsonl(text.as_slice()).unwrap(), &store);
        let mut bin = Vec::new();
        write_embeddings_binary(&store, &mut bin).unwrap();
        // Binary holds f32: equal up to single precision.
        let back = read_embeddings_binary(&bin).unwrap();
        prop_assert_eq!(back.len(), store.len());
        for (id, v) in store.iter() {
            let w = back.get(id).unwrap();
            prop_assert!(v.iter().zip(w).all(|(a, b)| (*a as f32) == (*b as f32)));
        }
    }
}

#[test]
fn files_load_by_extension_and_magic() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = fixtures::random_corpus(3);
    let path = dir.path().join("c.csv");
    let mut csv = Vec::new();
    write_csv(&corpus, &mut csv).unwrap();
    std::fs::write(&path, csv).unwrap();
    assert_eq!(CorpusFormat::from_path(&path), CorpusFormat::Csv);
    assert_eq!(load_corpus(&path, CorpusFormat::Csv).unwrap(), corpus);

    let mut store = EmbeddingStore::hashed(&corpus, 8).unwrap();
    store.insert("ghost", vec![1.0; 8]).unwrap();
    let bin_path = dir.path().join("e.bin");
    let mut bin = Vec::new();
    write_embeddings_binary(&store, &mut bin).unwrap();
    std::fs::write(&bin_path, &bin).unwrap();
    let loaded = load_embeddings(&bin_path, Some(&corpus)).unwrap();
    assert_eq!(loaded.store.len(), store.len());
    assert_eq!(loaded.orphan_warnings, ["ghost"]);
}
