//! Builders for the joint attention (AN), interaction (IN) and creation (CN)
//! networks of a single reading.

use std::collections::{BTreeMap, BTreeSet};

use crate::corpus::{ArtifactKind, Corpus, Quote, Reading};
use crate::exec::Execution;
use crate::graph::{BipartiteGraph, WeightedGraph};
use crate::semantic::{check_threshold, joint_pairs_with, EmbeddingStore, SemanticError, SimilarityMatrix, DEFAULT_THRESHOLD};
use crate::textpipe::{select_cn_words_traced, Analyzer, SelectedWord, WordSelectionParams};
use crate::Error;

/// Which authors become nodes of a reading's networks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum NodeScope {
    /// Authors with at least one artifact in the reading.
    #[default]
    Active,
    /// Every author in the corpus.
    Roster,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineConfig {
    pub threshold: f64,
    pub words: WordSelectionParams,
    pub scope: NodeScope,
    pub exec: Execution,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            threshold: DEFAULT_THRESHOLD,
            words: WordSelectionParams::default(),
            scope: NodeScope::Active,
            exec: Execution::default(),
        }
    }
}

fn node_set(reading: &Reading, corpus: &Corpus, scope: NodeScope) -> BTreeSet<String> {
    match scope {
        NodeScope::Active => reading.active_authors(),
        NodeScope::Roster => corpus.authors.clone(),
    }
}

/// Quotes an author attended to: quotes of their annotations plus the root
/// quote of every thread they replied in. Sorted by id, deduplicated.
pub fn attention_quotes<'a>(author: &str, reading: &'a Reading) -> Result<Vec<&'a Quote>, Error> {
    let mut out: BTreeMap<&str, &'a Quote> = BTreeMap::new();
    for a in reading.artifacts().iter().filter(|a| a.author_id == author) {
        let root = reading.thread_root(a)?;
        if let Some(q) = root.quote_id.as_deref().and_then(|id| reading.quote(id)) {
            out.insert(q.id.as_str(), q);
        }
    }
    Ok(out.into_values().collect())
}

/// Maps each quote id to the smallest id sharing its normalized text.
fn canonical_quotes(reading: &Reading) -> BTreeMap<&str, &Quote> {
    let mut by_text: BTreeMap<&str, &Quote> = BTreeMap::new();
    for q in reading.quotes.values() {
        by_text.entry(q.normalized_text.as_str()).or_insert(q);
    }
    reading
        .quotes
        .values()
        .map(|q| (q.id.as_str(), by_text[q.normalized_text.as_str()]))
        .collect()
}

/// Joint attention network. An edge joins two authors when some pair of
/// their attended quotes reaches similarity `tau`; its weight is the sum of
/// those similarities. Identical texts count once, at 1.0.
pub fn build_an(reading: &Reading, corpus: &Corpus, store: &EmbeddingStore, tau: f64) -> Result<WeightedGraph, Error> {
    build_an_with(reading, corpus, store, tau, NodeScope::Active, Execution::default())
}

pub fn build_an_with(
    reading: &Reading,
    corpus: &Corpus,
    store: &EmbeddingStore,
    tau: f64,
    scope: NodeScope,
    exec: Execution,
) -> Result<WeightedGraph, Error> {
    check_threshold(tau)?;
    let canonical = canonical_quotes(reading);
    let nodes = node_set(reading, corpus, scope);
    let authors: Vec<&String> = nodes.iter().collect();

    let mut attention: Vec<Vec<&Quote>> = Vec::with_capacity(authors.len());
    let mut involved: BTreeMap<&str, &Quote> = BTreeMap::new();
    for author in &authors {
        let mut set: BTreeMap<&str, &Quote> = BTreeMap::new();
        for q in attention_quotes(author, reading)? {
            let c = canonical[q.id.as_str()];
            set.insert(c.id.as_str(), c);
            involved.insert(c.id.as_str(), c);
        }
        attention.push(set.into_values().collect());
    }

    let quotes: Vec<&Quote> = involved.into_values().collect();
    let matrix = SimilarityMatrix::compute(&quotes, store, exec)?;

    let pairs: Vec<(usize, usize)> = (0..authors.len())
        .flat_map(|i| (i + 1..authors.len()).map(move |j| (i, j)))
        .collect();
    let weights = exec.map_slice(&pairs, |&(i, j)| -> Result<f64, SemanticError> {
        let joint = joint_pairs_with(&attention[i], &attention[j], tau, |a, b| {
            Ok(matrix.get(&a.id, &b.id).expect("similarity matrix covers attended quotes"))
        })?;
        Ok(joint.iter().map(|p| p.similarity).sum())
    });

    let mut g = WeightedGraph::with_nodes(nodes.iter().cloned());
    for (&(i, j), w) in pairs.iter().zip(weights) {
        let w = w?;
        if w > 0.0 {
            g.set_weight(authors[i], authors[j], w);
        }
    }
    Ok(g)
}

/// Interaction network: one event per reply between its author and the
/// parent's author; self-replies are dropped; weight = event count.
pub fn build_in(reading: &Reading, corpus: &Corpus) -> WeightedGraph {
    build_in_with(reading, corpus, NodeScope::Active)
}

pub fn build_in_with(reading: &Reading, corpus: &Corpus, scope: NodeScope) -> WeightedGraph {
    let mut g = WeightedGraph::with_nodes(node_set(reading, corpus, scope));
    for r in reading.artifacts().iter().filter(|a| a.kind == ArtifactKind::Reply) {
        let parent = r.parent_id.as_deref().and_then(|p| reading.artifact(p));
        if let Some(parent) = parent {
            g.add_weight(&r.author_id, &parent.author_id, 1.0);
        }
    }
    g
}

pub fn bipartite_from_selection(authors: impl IntoIterator<Item = String>, selection: &[SelectedWord]) -> BipartiteGraph {
    let mut bg = BipartiteGraph {
        author_nodes: authors.into_iter().collect(),
        ..Default::default()
    };
    for w in selection {
        bg.add_edge(&w.author_id, &w.lemma);
    }
    bg
}

/// Two-mode author–word graph from the selected words.
pub fn build_cn_bipartite(
    reading: &Reading,
    corpus: &Corpus,
    params: &WordSelectionParams,
    analyzer: &Analyzer,
) -> Result<BipartiteGraph, Error> {
    let trace = select_cn_words_traced(reading, params, analyzer, Execution::default())?;
    Ok(bipartite_from_selection(node_set(reading, corpus, NodeScope::Active), &trace.selected))
}

/// The three networks of one reading, with the intermediate CN artifacts.
#[derive(Debug, Clone)]
pub struct ReadingNetworks {
    pub reading_id: String,
    pub an: WeightedGraph,
    pub in_: WeightedGraph,
    pub cn: WeightedGraph,
    pub bipartite: BipartiteGraph,
    pub selection: Vec<SelectedWord>,
}

pub fn build_all(
    reading: &Reading,
    corpus: &Corpus,
    store: &EmbeddingStore,
    analyzer: &Analyzer,
    config: &PipelineConfig,
) -> Result<ReadingNetworks, Error> {
    let an = build_an_with(reading, corpus, store, config.threshold, config.scope, config.exec)?;
    let in_ = build_in_with(reading, corpus, config.scope);
    let trace = select_cn_words_traced(reading, &config.words, analyzer, config.exec)?;
    let bipartite = bipartite_from_selection(node_set(reading, corpus, config.scope), &trace.selected);
    let cn = bipartite.project();
    Ok(ReadingNetworks {
        reading_id: reading.id.clone(),
        an,
        in_,
        cn,
        bipartite,
        selection: trace.selected,
    })
}

/// Builds every reading's networks, readings fanned out per `config.exec`.
/// Output is ordered by reading id.
pub fn build_corpus(
    corpus: &Corpus,
    store: &EmbeddingStore,
    analyzer: &Analyzer,
    config: &PipelineConfig,
) -> Result<Vec<ReadingNetworks>, Error> {
    let readings: Vec<&Reading> = corpus.readings.values().collect();
    config
        .exec
        .map_slice(&readings, |r| build_all(r, corpus, store, analyzer, config))
        .into_iter()
        .collect()
}
