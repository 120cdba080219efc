//! Synthetic discourse corpora with planted network structure.
//!
//! The generator plants each network directly:
//!
//! - **attention**: authors in one block annotate quotes sharing identical
//!   text, so the common-reference rule joins them at 1.0 per shared text.
//!   Texts of different clusters are regenerated until every pair embeds
//!   below the threshold. Replies also carry the target's first text.
//! - **interaction**: each reply edge becomes one reply to the target's
//!   first annotation.
//! - **creation**: each overlap unit is a pseudo-noun written
//!   `ceil(min_frequency / 2)` times by both authors. `drop_lowest`
//!   ubiquitous nouns appear in every document, score zero, and are exactly
//!   the ones the bottom-drop removes. Every document also carries one
//!   single-use filler noun that never clears the frequency floor.
//!
//! All choices come from a ChaCha stream seeded by [`SynthParams::seed`].

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::{Artifact, Corpus, Quote};
use crate::graph::{EdgeRecord, GraphListing, WeightedGraph};
use crate::networks::{build_all, PipelineConfig};
use crate::semantic::{cosine, hash_embed, EmbeddingStore, DEFAULT_HASH_DIM, DEFAULT_THRESHOLD};
use crate::textpipe::{Analyzer, WordSelectionParams};

pub const SYNTH_READING: &str = "synth";
/// Longest body the generator will write, in tokens.
pub const BODY_TOKEN_CAP: usize = 5000;
const TEXT_ATTEMPTS: usize = 200;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SynthError {
    #[error("infeasible synthetic parameters: {0}")]
    InfeasibleParams(String),
}

fn infeasible(msg: impl Into<String>) -> SynthError {
    SynthError::InfeasibleParams(msg.into())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthParams {
    pub n_authors: usize,
    /// Distinct quote texts; text `t` belongs to block `t % blocks`.
    pub n_quotes: usize,
    /// Partition of author indices.
    pub attention_blocks: Vec<Vec<usize>>,
    /// `(replier, target)` author indices; repeats add weight.
    pub reply_edges: Vec<(usize, usize)>,
    /// Shared-noun count per author pair.
    #[serde(with = "overlap_list")]
    pub vocab_overlap: BTreeMap<(usize, usize), usize>,
    pub seed: u64,
    pub threshold: f64,
    pub min_frequency: usize,
    pub drop_lowest: usize,
    pub top_k: usize,
    pub embed_dim: usize,
}

/// Stores the pair map as `[[u, v, count], ...]`, since JSON keys are strings.
mod overlap_list {
    use std::collections::BTreeMap;

    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(m: &BTreeMap<(usize, usize), usize>, s: S) -> Result<S::Ok, S::Error> {
        let v: Vec<(usize, usize, usize)> = m.iter().map(|(&(u, w), &k)| (u, w, k)).collect();
        v.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BTreeMap<(usize, usize), usize>, D::Error> {
        let v: Vec<(usize, usize, usize)> = Vec::deserialize(d)?;
        Ok(v.into_iter().map(|(u, w, k)| ((u, w), k)).collect())
    }
}

impl SynthParams {
    /// Defaults for everything but the planted structure.
    pub fn new(n_authors: usize, n_quotes: usize, attention_blocks: Vec<Vec<usize>>, seed: u64) -> Self {
        let words = WordSelectionParams::default();
        SynthParams {
            n_authors,
            n_quotes,
            attention_blocks,
            reply_edges: Vec::new(),
            vocab_overlap: BTreeMap::new(),
            seed,
            threshold: DEFAULT_THRESHOLD,
            min_frequency: words.min_frequency,
            drop_lowest: words.drop_lowest,
            top_k: words.top_k,
            embed_dim: DEFAULT_HASH_DIM,
        }
    }

    /// Draws blocks, replies and overlaps from `seed`.
    pub fn randomized(n_authors: usize, n_quotes: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_5eed_5eed_5eed);
        let n_blocks = rng.gen_range(1..=n_authors.clamp(1, n_quotes.max(1)));
        let mut order: Vec<usize> = (0..n_authors).collect();
        order.shuffle(&mut rng);
        let mut blocks = vec![Vec::new(); n_blocks];
        for (i, a) in order.into_iter().enumerate() {
            let b = if i < n_blocks { i } else { rng.gen_range(0..n_blocks) };
            blocks[b].push(a);
        }
        for b in &mut blocks {
            b.sort_unstable();
        }
        let mut p = SynthParams::new(n_authors, n_quotes, blocks, seed);
        let n_replies = rng.gen_range(0..=2 * n_authors);
        for _ in 0..n_replies {
            p.reply_edges.push((rng.gen_range(0..n_authors), rng.gen_range(0..n_authors)));
        }
        let mut budget = p.top_k / 2;
        let n_overlaps = rng.gen_range(0..=n_authors);
        for _ in 0..n_overlaps {
            let u = rng.gen_range(0..n_authors);
            let v = rng.gen_range(0..n_authors);
            let k = rng.gen_range(1..=3usize);
            if u == v || k > budget {
                continue;
            }
            budget -= k;
            *p.vocab_overlap.entry((u.min(v), u.max(v))).or_insert(0) += k;
        }
        p
    }

    pub fn word_params(&self) -> WordSelectionParams {
        WordSelectionParams {
            min_frequency: self.min_frequency,
            drop_lowest: self.drop_lowest,
            top_k: self.top_k,
            ..Default::default()
        }
    }

    pub fn pipeline_config(&self) -> PipelineConfig {
        PipelineConfig {
            threshold: self.threshold,
            words: self.word_params(),
            ..Default::default()
        }
    }

    fn validate(&self) -> Result<(), SynthError> {
        let n = self.n_authors;
        if n < 2 {
            return Err(infeasible("at least two authors are required"));
        }
        if self.attention_blocks.is_empty() || self.attention_blocks.iter().any(Vec::is_empty) {
            return Err(infeasible("attention blocks must be non-empty"));
        }
        if self.n_quotes < self.attention_blocks.len() {
            return Err(infeasible("need at least one quote text per attention block"));
        }
        let mut seen = vec![false; n];
        for &a in self.attention_blocks.iter().flatten() {
            if a >= n || std::mem::replace(&mut seen[a], true) {
                return Err(infeasible(format!("attention blocks must partition 0..{n}")));
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(infeasible(format!("attention blocks must partition 0..{n}")));
        }
        if self.reply_edges.iter().any(|&(u, v)| u >= n || v >= n) {
            return Err(infeasible("reply edge references an unknown author"));
        }
        for &(u, v) in self.vocab_overlap.keys() {
            if u >= n || v >= n || u == v {
                return Err(infeasible(format!("invalid overlap pair ({u}, {v})")));
            }
        }
        if !(self.threshold > 0.0 && self.threshold <= 1.0) {
            return Err(infeasible("threshold must lie in (0, 1]"));
        }
        if self.min_frequency < 2 {
            return Err(infeasible("min_frequency must be at least 2 so filler nouns stay below it"));
        }
        if self.top_k == 0 {
            return Err(infeasible("top_k must be at least 1"));
        }
        let planted: usize = self.vocab_overlap.values().sum();
        if 2 * planted > self.top_k {
            return Err(infeasible(format!(
                "{planted} shared nouns need {} selection slots, top_k is {}",
                2 * planted,
                self.top_k
            )));
        }
        if self.embed_dim < 8 {
            return Err(infeasible("embedding dimension must be at least 8"));
        }
        let per_author = self.planted_per_author();
        let heaviest = per_author.iter().max().copied().unwrap_or(0) * self.min_frequency.div_ceil(2)
            + self.drop_lowest * self.min_frequency
            + 16;
        if heaviest > BODY_TOKEN_CAP {
            return Err(infeasible(format!(
                "overlap demands a {heaviest}-token body, cap is {BODY_TOKEN_CAP}"
            )));
        }
        Ok(())
    }

    fn planted_per_author(&self) -> Vec<usize> {
        let mut per = vec![0; self.n_authors];
        for (&(u, v), &k) in &self.vocab_overlap {
            per[u] += k;
            per[v] += k;
        }
        per
    }
}

/// Networks the generator planted, independent of the pipeline.
#[derive(Debug, Clone, PartialEq)]
pub struct GroundTruth {
    pub reading_id: String,
    pub expected_an: WeightedGraph,
    pub expected_in: WeightedGraph,
    /// Planted creation network; weight = planted shared-noun count.
    pub expected_cn: WeightedGraph,
}

impl GroundTruth {
    pub fn expected_cn_edges(&self) -> BTreeSet<(String, String)> {
        self.expected_cn
            .edges()
            .map(|(u, v, _)| (u.to_string(), v.to_string()))
            .collect()
    }
}

#[derive(Serialize, Deserialize)]
struct GroundTruthFile {
    reading_id: String,
    expected_an: GraphListing,
    expected_in: GraphListing,
    expected_cn: GraphListing,
}

impl Serialize for GroundTruth {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        GroundTruthFile {
            reading_id: self.reading_id.clone(),
            expected_an: (&self.expected_an).into(),
            expected_in: (&self.expected_in).into(),
            expected_cn: (&self.expected_cn).into(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for GroundTruth {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let f = GroundTruthFile::deserialize(d)?;
        Ok(GroundTruth {
            reading_id: f.reading_id,
            expected_an: f.expected_an.into(),
            expected_in: f.expected_in.into(),
            expected_cn: f.expected_cn.into(),
        })
    }
}

const SYLLABLES: [&str; 16] = [
    "ba", "de", "fi", "go", "hu", "ja", "ke", "li", "mo", "nu", "pa", "re", "si", "to", "vu", "wy",
];

/// Deterministic pseudo-noun: namespace syllable, index in base 16, "-ation".
fn pseudo_noun(namespace: &str, index: usize) -> String {
    let mut s = namespace.to_string();
    let mut i = index;
    for _ in 0..4 {
        s.push_str(SYLLABLES[i % 16]);
        i /= 16;
    }
    s.push_str("ation");
    s
}

const QUOTE_WORDS: &[&str] = &[
    "movement", "rhythm", "stage", "court", "ritual", "body", "gesture", "audience", "tradition", "ballet",
    "modern", "folk", "street", "music", "costume", "story", "history", "memory", "power", "space", "time",
    "freedom", "form", "technique", "improvised", "ancient", "royal", "public", "sacred", "bright", "slow",
    "rapid", "quiet", "formal", "social", "political", "shared", "distant", "urban", "rural", "performed",
    "taught", "resisted", "celebrated", "recorded", "forgotten", "revived", "shaped", "carried", "across",
    "within", "beyond", "through", "under", "before", "after", "every", "many", "few", "new", "old",
];

const FILLER: &[&str] = &[
    "i", "think", "this", "really", "shows", "how", "the", "we", "can", "see", "it", "is", "and", "also",
    "so", "that", "very", "honestly", "because", "when", "they", "about", "here", "again",
];

fn random_sentence(rng: &mut ChaCha8Rng) -> String {
    let len = rng.gen_range(8..=14);
    let words: Vec<&str> = (0..len).map(|_| *QUOTE_WORDS.choose(rng).expect("non-empty")).collect();
    let mut s = words.join(" ");
    if let Some(first) = s.get_mut(0..1) {
        first.make_ascii_uppercase();
    }
    s.push('.');
    s
}

fn filler(rng: &mut ChaCha8Rng, n: usize) -> Vec<&'static str> {
    (0..n).map(|_| *FILLER.choose(rng).expect("non-empty")).collect()
}

fn author_id(i: usize, n: usize) -> String {
    let width = n.to_string().len().max(2);
    format!("s{:0width$}", i + 1)
}

/// Generates a one-reading corpus, hash embeddings for its quotes, and the
/// networks planted in it.
pub fn generate(params: &SynthParams) -> Result<(Corpus, EmbeddingStore, GroundTruth), SynthError> {
    params.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let n = params.n_authors;
    let ids: Vec<String> = (0..n).map(|i| author_id(i, n)).collect();
    let n_blocks = params.attention_blocks.len();

    // Quote texts, pairwise below the threshold.
    let mut texts: Vec<String> = Vec::with_capacity(params.n_quotes);
    let mut vectors: Vec<Vec<f64>> = Vec::with_capacity(params.n_quotes);
    for _ in 0..params.n_quotes {
        let mut accepted = false;
        for _ in 0..TEXT_ATTEMPTS {
            let text = random_sentence(&mut rng);
            let v = hash_embed(&text, params.embed_dim).map_err(|e| infeasible(e.to_string()))?;
            let separated = vectors
                .iter()
                .all(|u| cosine(u, &v).map(|c| c < params.threshold).unwrap_or(false));
            if separated {
                texts.push(text);
                vectors.push(v);
                accepted = true;
                break;
            }
        }
        if !accepted {
            return Err(infeasible(format!(
                "could not find {} quote texts pairwise below similarity {}",
                params.n_quotes, params.threshold
            )));
        }
    }
    let block_texts: Vec<Vec<usize>> = (0..n_blocks)
        .map(|b| (0..params.n_quotes).filter(|t| t % n_blocks == b).collect())
        .collect();
    let mut block_of = vec![0; n];
    for (b, members) in params.attention_blocks.iter().enumerate() {
        for &a in members {
            block_of[a] = b;
        }
    }

    let mut quotes = Vec::new();
    let mut artifacts: Vec<Artifact> = Vec::new();
    let mut attended: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
    let mut first_annotation: Vec<String> = vec![String::new(); n];
    for a in 0..n {
        for (k, &t) in block_texts[block_of[a]].iter().enumerate() {
            let qid = format!("q{t:03}-{}", ids[a]);
            // Vary surface form; normalization must still match.
            let text = if a % 2 == 1 { texts[t].to_uppercase() } else { texts[t].clone() };
            quotes.push(Quote::new(qid.clone(), SYNTH_READING, text));
            let aid = format!("{}-n{t:03}", ids[a]);
            if k == 0 {
                first_annotation[a] = aid.clone();
            }
            artifacts.push(Artifact::annotation(aid, ids[a].clone(), SYNTH_READING, qid, String::new()));
            attended[a].insert(t);
        }
    }
    let mut expected_in = WeightedGraph::with_nodes(ids.iter().cloned());
    for (k, &(r, t)) in params.reply_edges.iter().enumerate() {
        artifacts.push(Artifact::reply(
            format!("{}-r{k:03}", ids[r]),
            ids[r].clone(),
            SYNTH_READING,
            first_annotation[t].clone(),
            String::new(),
        ));
        attended[r].insert(block_texts[block_of[t]][0]);
        expected_in.add_weight(&ids[r], &ids[t], 1.0);
    }
    if artifacts.len() < 3 {
        // Planted nouns need more documents than the two that share each one.
        let t = block_texts[block_of[0]][0];
        artifacts.push(Artifact::annotation(
            format!("{}-n{t:03}b", ids[0]),
            ids[0].clone(),
            SYNTH_READING,
            format!("q{t:03}-{}", ids[0]),
            String::new(),
        ));
    }

    // Bodies.
    let n_docs = artifacts.len();
    let ubiquitous: Vec<String> = (0..params.drop_lowest).map(|i| pseudo_noun("zu", i)).collect();
    let repeat = params.min_frequency.div_ceil(2);
    let mut planted: Vec<Vec<String>> = vec![Vec::new(); n];
    let mut expected_cn = WeightedGraph::with_nodes(ids.iter().cloned());
    let mut word_index = 0;
    for (&(u, v), &k) in &params.vocab_overlap {
        for _ in 0..k {
            let w = pseudo_noun("ka", word_index);
            word_index += 1;
            planted[u].push(w.clone());
            planted[v].push(w);
        }
        expected_cn.add_weight(&ids[u], &ids[v], k as f64);
    }
    let first_index: BTreeMap<&str, usize> = first_annotation.iter().enumerate().map(|(a, id)| (id.as_str(), a)).collect();
    let heavy_doc = first_annotation[0].clone();
    for (d, art) in artifacts.iter_mut().enumerate() {
        let lead = rng.gen_range(3..8);
        let mut words: Vec<String> = filler(&mut rng, lead).into_iter().map(String::from).collect();
        words.push(pseudo_noun("mo", d));
        for u in &ubiquitous {
            let times = if art.id == heavy_doc {
                1 + params.min_frequency.saturating_sub(n_docs)
            } else {
                1
            };
            words.extend(std::iter::repeat_n(u.clone(), times));
        }
        if let Some(&a) = first_index.get(art.id.as_str()) {
            for w in &planted[a] {
                words.extend(std::iter::repeat_n(w.clone(), repeat));
            }
        }
        let tail = rng.gen_range(2..6);
        words.extend(filler(&mut rng, tail).into_iter().map(String::from));
        words.shuffle(&mut rng);
        art.body = words.join(" ");
    }
    artifacts.shuffle(&mut rng);

    let mut expected_an = WeightedGraph::with_nodes(ids.iter().cloned());
    for u in 0..n {
        for v in u + 1..n {
            let shared = attended[u].intersection(&attended[v]).count();
            if shared > 0 {
                expected_an.set_weight(&ids[u], &ids[v], shared as f64);
            }
        }
    }

    let mut store = EmbeddingStore::new(params.embed_dim);
    for q in &quotes {
        let v = hash_embed(&q.text, params.embed_dim).map_err(|e| infeasible(e.to_string()))?;
        store.insert(q.id.clone(), v).map_err(|e| infeasible(e.to_string()))?;
    }
    let corpus = Corpus::from_parts(
        [(SYNTH_READING.to_string(), "Synthetic reading".to_string())],
        quotes,
        artifacts,
    )
    .map_err(|errs| infeasible(format!("generated corpus failed validation: {}", errs[0])))?;

    Ok((
        corpus,
        store,
        GroundTruth {
            reading_id: SYNTH_READING.to_string(),
            expected_an,
            expected_in,
            expected_cn,
        },
    ))
}

/// Edge-level differences between an expected and an actual graph.
#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct GraphDiff {
    /// Edges present in the actual graph only.
    pub added: Vec<EdgeRecord>,
    /// Edges present in the expected graph only.
    pub removed: Vec<EdgeRecord>,
    /// `(u, v, expected, actual)` where both have the edge.
    pub reweighted: Vec<(String, String, f64, f64)>,
}

impl GraphDiff {
    pub fn between(expected: &WeightedGraph, actual: &WeightedGraph, tolerance: f64) -> Self {
        let mut diff = GraphDiff::default();
        for (u, v, w) in expected.edges() {
            match actual.weight(u, v) {
                None => diff.removed.push(edge(u, v, w)),
                Some(a) if (a - w).abs() > tolerance => diff.reweighted.push((u.into(), v.into(), w, a)),
                Some(_) => {}
            }
        }
        for (u, v, w) in actual.edges() {
            if expected.weight(u, v).is_none() {
                diff.added.push(edge(u, v, w));
            }
        }
        diff
    }

    pub fn is_empty(&self) -> bool {
        self.added.is_empty() && self.removed.is_empty() && self.reweighted.is_empty()
    }
}

fn edge(u: &str, v: &str, w: f64) -> EdgeRecord {
    EdgeRecord {
        source: u.to_string(),
        target: v.to_string(),
        weight: w,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub reading_id: String,
    pub an: GraphDiff,
    pub in_: GraphDiff,
    pub cn: GraphDiff,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.an.is_empty() && self.in_.is_empty() && self.cn.is_empty()
    }
}

/// Rebuilds the three networks and diffs them against the planted ones.
pub fn verify(
    corpus: &Corpus,
    store: &EmbeddingStore,
    gt: &GroundTruth,
    config: &PipelineConfig,
    analyzer: &Analyzer,
) -> Result<VerificationReport, crate::Error> {
    let reading = corpus.reading(&gt.reading_id)?;
    let built = build_all(reading, corpus, store, analyzer, config)?;
    const TOL: f64 = 1e-9;
    Ok(VerificationReport {
        reading_id: gt.reading_id.clone(),
        an: GraphDiff::between(&gt.expected_an, &built.an, TOL),
        in_: GraphDiff::between(&gt.expected_in, &built.in_, TOL),
        cn: GraphDiff::between(&gt.expected_cn, &built.cn, TOL),
    })
}
