//! Hand-built corpora with known answers.

use std::collections::BTreeMap;

use aicnet_core::{Artifact, Corpus, EmbeddingStore, Quote};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Three learners, each highlighting one quote; sim(Q1, Q2) = 0.8 and
/// sim(Q2, Q3) = 0.5 by construction of the vectors.
pub fn three_quotes() -> (Corpus, EmbeddingStore) {
    let corpus = Corpus::from_parts(
        [("tq".to_string(), "Three quotes".to_string())],
        [
            Quote::new("q1", "tq", "Dance is a language of the body."),
            Quote::new("q2", "tq", "Movement speaks where words fail."),
            Quote::new("q3", "tq", "Court ballet served the king."),
        ],
        [
            Artifact::annotation("a", "A", "tq", "q1", "This is how I feel when I dance."),
            Artifact::annotation("b", "B", "tq", "q2", "Words are not enough sometimes."),
            Artifact::annotation("c", "C", "tq", "q3", "Power shaped the stage."),
        ],
    )
    .expect("valid fixture");
    let t2 = 3f64.atan2(4.0);
    let t3 = t2 + std::f64::consts::FRAC_PI_3;
    let mut store = EmbeddingStore::new(3);
    store.insert("q1", vec![5.0, 0.0, 0.0]).unwrap();
    store.insert("q2", vec![4.0, 3.0, 0.0]).unwrap();
    store.insert("q3", vec![t3.cos(), t3.sin(), 0.0]).unwrap();
    (corpus, store)
}

/// Two learners highlighting textually identical quotes stored under
/// different ids, with orthogonal vectors.
pub fn common_reference() -> (Corpus, EmbeddingStore) {
    let corpus = Corpus::from_parts(
        [],
        [
            Quote::new("q1", "r", "The body remembers what the mind forgets."),
            Quote::new("q2", "r", "the body   remembers what the MIND forgets."),
        ],
        [
            Artifact::annotation("a", "A", "r", "q1", "So true for me."),
            Artifact::annotation("b", "B", "r", "q2", "I agree with this."),
        ],
    )
    .expect("valid fixture");
    let mut store = EmbeddingStore::new(2);
    store.insert("q1", vec![1.0, 0.0]).unwrap();
    store.insert("q2", vec![0.0, 1.0]).unwrap();
    (corpus, store)
}

/// Noun counts per document for the tf-idf hand check. Each row is one
/// learner's single annotation.
pub const CN_COUNTS: [(&str, &[(&str, usize)]); 4] = [
    ("A", &[("dance", 2), ("body", 3), ("music", 1), ("story", 5), ("gesture", 1), ("space", 1), ("idea", 2)]),
    ("B", &[("dance", 1), ("body", 2), ("music", 1), ("memory", 2), ("space", 1)]),
    ("C", &[("dance", 1), ("ritual", 4), ("music", 3), ("memory", 2), ("culture", 6), ("space", 1)]),
    ("D", &[("dance", 1), ("ritual", 2), ("memory", 2), ("gesture", 5), ("space", 1)]),
];

fn surface(lemma: &str, i: usize) -> String {
    // Alternate singular and plural so the lemmatizer is exercised.
    if i.is_multiple_of(2) {
        return lemma.to_string();
    }
    match lemma {
        "body" => "bodies".into(),
        "story" => "stories".into(),
        "memory" => "memories".into(),
        "music" => "music".into(),
        other => format!("{other}s"),
    }
}

pub fn cn_fixture() -> Corpus {
    let artifacts = CN_COUNTS.iter().enumerate().map(|(d, (author, counts))| {
        let mut words = Vec::new();
        for (lemma, c) in counts.iter() {
            for i in 0..*c {
                words.push(format!("the {} was", surface(lemma, i)));
            }
        }
        Artifact::annotation(format!("d{}", d + 1), *author, "cn", "q1", words.join(" and "))
    });
    Corpus::from_parts([], [Quote::new("q1", "cn", "A passage.")], artifacts.collect::<Vec<_>>()).expect("valid fixture")
}

/// Hand computation of tf · ln(N / df) over [`CN_COUNTS`], keyed by
/// (lemma, document id).
pub fn cn_expected_tfidf() -> BTreeMap<(String, String), f64> {
    let n = CN_COUNTS.len() as f64;
    let mut df: BTreeMap<&str, usize> = BTreeMap::new();
    for (_, counts) in CN_COUNTS.iter() {
        for (lemma, _) in counts.iter() {
            *df.entry(lemma).or_insert(0) += 1;
        }
    }
    let mut out = BTreeMap::new();
    for (d, (_, counts)) in CN_COUNTS.iter().enumerate() {
        for (lemma, c) in counts.iter() {
            out.insert(
                (lemma.to_string(), format!("d{}", d + 1)),
                *c as f64 * (n / df[lemma] as f64).ln(),
            );
        }
    }
    out
}

const WORDS: &[&str] = &[
    "dance", "body", "stage", "court", "ritual", "memory", "rhythm", "music", "king", "village", "freedom",
    "breath", "gravity", "story", "shape", "line",
];

/// A one-reading corpus of short quotes over a small vocabulary, so hashed
/// similarities spread over the whole threshold range.
pub fn random_corpus(seed: u64) -> Corpus {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n_quotes = rng.gen_range(2..10);
    let n_authors = rng.gen_range(2..9);
    let quotes: Vec<Quote> = (0..n_quotes)
        .map(|i| {
            let len = rng.gen_range(2..6);
            let text: Vec<&str> = (0..len).map(|_| *WORDS.choose(&mut rng).unwrap()).collect();
            Quote::new(format!("q{i}"), "r", text.join(" "))
        })
        .collect();
    let mut artifacts = Vec::new();
    for a in 0..n_authors {
        for k in 0..rng.gen_range(1..3) {
            let q = rng.gen_range(0..n_quotes);
            artifacts.push(Artifact::annotation(format!("a{a}_{k}"), format!("u{a}"), "r", format!("q{q}"), "my note"));
        }
    }
    for k in 0..rng.gen_range(0..n_authors) {
        let parent = artifacts[rng.gen_range(0..artifacts.len())].id.clone();
        let author = format!("u{}", rng.gen_range(0..n_authors));
        artifacts.push(Artifact::reply(format!("r{k}"), author, "r", parent, "reply"));
    }
    Corpus::from_parts([], quotes, artifacts).expect("generated corpus is valid")
}
