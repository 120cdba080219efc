//! Tokenization, rule lemmatization, noun filtering, tf-idf and the
//! creation-network word selection.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::path::Path;
use std::sync::OnceLock;

use serde::Serialize;
use thiserror::Error;

use crate::corpus::{Artifact, Reading};
use crate::exec::Execution;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TextError {
    #[error("idf undefined for {lemma:?}: present in artifact {artifact_id} but in no document")]
    UndefinedIdf { lemma: String, artifact_id: String },
    #[error("invalid word-selection parameter: {0}")]
    InvalidParams(String),
    #[error("cannot read word list {path}: {reason}")]
    WordList { path: String, reason: String },
}

const STOPWORDS: &str = include_str!("../data/stopwords.txt");
const NOUNS: &str = include_str!("../data/nouns.txt");
const VERBS: &str = include_str!("../data/verbs.txt");

/// Parses a one-term-per-line list, skipping blanks and `#` comments.
pub fn parse_word_list(text: &str) -> HashSet<String> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(str::to_lowercase)
        .collect()
}

pub fn read_word_list(path: &Path) -> Result<HashSet<String>, TextError> {
    std::fs::read_to_string(path)
        .map(|t| parse_word_list(&t))
        .map_err(|e| TextError::WordList {
            path: path.display().to_string(),
            reason: e.to_string(),
        })
}

pub fn default_stopwords() -> &'static HashSet<String> {
    static SET: OnceLock<HashSet<String>> = OnceLock::new();
    SET.get_or_init(|| parse_word_list(STOPWORDS))
}

pub fn default_nouns() -> &'static HashSet<String> {
    static SET: OnceLock<HashSet<String>> = OnceLock::new();
    SET.get_or_init(|| parse_word_list(NOUNS))
}

/// Base forms the lemmatizer may reduce -ing/-ed forms to.
fn base_lexicon() -> &'static HashSet<String> {
    static SET: OnceLock<HashSet<String>> = OnceLock::new();
    SET.get_or_init(|| {
        let mut s = parse_word_list(NOUNS);
        s.extend(parse_word_list(VERBS));
        s
    })
}

/// Splits on anything that is neither alphanumeric nor an in-word hyphen or
/// apostrophe, lowercases, and strips edge punctuation and a possessive `'s`.
pub fn tokenize(text: &str) -> Vec<String> {
    let is_joiner = |c: char| c == '-' || c == '\'' || c == '\u{2019}';
    text.split(|c: char| !(c.is_alphanumeric() || is_joiner(c)))
        .filter_map(|raw| {
            let mut t = raw.trim_matches(is_joiner).to_lowercase();
            for suffix in ["'s", "\u{2019}s"] {
                if t.len() > suffix.len() && t.ends_with(suffix) {
                    t.truncate(t.len() - suffix.len());
                }
            }
            let t = t.trim_matches(is_joiner).to_string();
            (!t.is_empty()).then_some(t)
        })
        .collect()
}

const IRREGULAR: &[(&str, &str)] = &[
    ("children", "child"),
    ("men", "man"),
    ("women", "woman"),
    ("people", "person"),
    ("feet", "foot"),
    ("teeth", "tooth"),
    ("mice", "mouse"),
    ("geese", "goose"),
    ("lives", "life"),
    ("selves", "self"),
    ("knives", "knife"),
    ("wives", "wife"),
    ("leaves", "leaf"),
    ("analyses", "analysis"),
    ("theses", "thesis"),
    ("hypotheses", "hypothesis"),
    ("bases", "basis"),
    ("crises", "crisis"),
    ("criteria", "criterion"),
    ("phenomena", "phenomenon"),
    ("curricula", "curriculum"),
    ("media", "media"),
    ("data", "data"),
    ("is", "be"),
    ("are", "be"),
    ("was", "be"),
    ("were", "be"),
    ("been", "be"),
    ("has", "have"),
    ("had", "have"),
    ("does", "do"),
    ("did", "do"),
    ("went", "go"),
    ("made", "make"),
    ("thought", "think"),
    ("taught", "teach"),
    ("brought", "bring"),
    ("felt", "feel"),
    ("found", "find"),
    ("told", "tell"),
    ("said", "say"),
    ("saw", "see"),
    ("seen", "see"),
    ("took", "take"),
    ("taken", "take"),
    ("gave", "give"),
    ("given", "give"),
    ("wrote", "write"),
    ("written", "write"),
    ("began", "begin"),
    ("begun", "begin"),
    ("became", "become"),
    ("chose", "choose"),
    ("chosen", "choose"),
    ("knew", "know"),
    ("known", "know"),
    ("understood", "understand"),
];

fn irregular(word: &str) -> Option<&'static str> {
    static MAP: OnceLock<HashMap<&'static str, &'static str>> = OnceLock::new();
    MAP.get_or_init(|| IRREGULAR.iter().copied().collect()).get(word).copied()
}

fn strip_suffix_to_lexicon(word: &str, suffix: &str, lexicon: &HashSet<String>) -> Option<String> {
    let stem = word.strip_suffix(suffix)?;
    if stem.len() < 2 {
        return None;
    }
    if lexicon.contains(stem) {
        return Some(stem.to_string());
    }
    let with_e = format!("{stem}e");
    if lexicon.contains(&with_e) {
        return Some(with_e);
    }
    let bytes = stem.as_bytes();
    if bytes.len() >= 3 && bytes[bytes.len() - 1] == bytes[bytes.len() - 2] {
        let undoubled = &stem[..stem.len() - 1];
        if lexicon.contains(undoubled) {
            return Some(undoubled.to_string());
        }
    }
    if let Some(i_stem) = stem.strip_suffix('i') {
        let y = format!("{i_stem}y");
        if lexicon.contains(&y) {
            return Some(y);
        }
    }
    None
}

/// English lemma via the irregular lexicon, then plural rules, then
/// -ing/-ed reduction when the stem is a known base form.
pub fn lemmatize(surface: &str) -> String {
    lemmatize_with(surface, base_lexicon())
}

pub fn lemmatize_with(surface: &str, lexicon: &HashSet<String>) -> String {
    let w = surface.to_lowercase();
    if let Some(base) = irregular(&w) {
        return base.to_string();
    }
    if lexicon.contains(&w) || !w.chars().all(|c| c.is_alphabetic() || c == '-' || c == '\'') {
        return w;
    }
    let n = w.len();
    if n > 4 && w.ends_with("ies") {
        return format!("{}y", &w[..n - 3]);
    }
    if n > 4 && ["sses", "xes", "ches", "shes", "zes"].iter().any(|s| w.ends_with(s)) {
        return w[..n - 2].to_string();
    }
    if n > 3 && w.ends_with('s') && !["ss", "us", "is"].iter().any(|s| w.ends_with(s)) {
        return w[..n - 1].to_string();
    }
    if n > 5 && w.ends_with("ing") {
        if let Some(l) = strip_suffix_to_lexicon(&w, "ing", lexicon) {
            return l;
        }
    }
    if n > 4 && w.ends_with("ed") {
        if let Some(l) = strip_suffix_to_lexicon(&w, "ed", lexicon) {
            return l;
        }
    }
    w
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Pos {
    Noun,
    Other,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub surface: String,
    pub lemma: String,
    pub pos: Pos,
}

/// Assigns a part of speech to a lemma.
pub trait PosTagger: Send + Sync {
    fn tag(&self, lemma: &str) -> Pos;
}

const NOUN_SUFFIXES: &[&str] = &[
    "tion", "sion", "ment", "ness", "ity", "ism", "ship", "hood", "ance", "ence", "ogy", "ist",
];

/// Noun lexicon plus derivational-suffix heuristics. Stopwords are never nouns.
#[derive(Debug, Clone)]
pub struct LexiconTagger {
    nouns: HashSet<String>,
    stopwords: HashSet<String>,
}

impl Default for LexiconTagger {
    fn default() -> Self {
        LexiconTagger {
            nouns: default_nouns().clone(),
            stopwords: default_stopwords().clone(),
        }
    }
}

impl LexiconTagger {
    pub fn new(nouns: HashSet<String>, stopwords: HashSet<String>) -> Self {
        LexiconTagger { nouns, stopwords }
    }

    pub fn with_nouns(mut self, nouns: HashSet<String>) -> Self {
        self.nouns = nouns;
        self
    }

    pub fn with_stopwords(mut self, stopwords: HashSet<String>) -> Self {
        self.stopwords = stopwords;
        self
    }
}

impl PosTagger for LexiconTagger {
    fn tag(&self, lemma: &str) -> Pos {
        if self.stopwords.contains(lemma) || !lemma.chars().any(char::is_alphabetic) {
            return Pos::Other;
        }
        if self.nouns.contains(lemma) {
            return Pos::Noun;
        }
        let by_suffix = NOUN_SUFFIXES
            .iter()
            .any(|s| lemma.len() >= s.len() + 3 && lemma.ends_with(s));
        if by_suffix {
            Pos::Noun
        } else {
            Pos::Other
        }
    }
}

pub fn filter_nouns(tokens: Vec<Token>) -> Vec<Token> {
    tokens.into_iter().filter(|t| t.pos == Pos::Noun).collect()
}

/// Tokenizer, lemmatizer and tagger bundled together.
pub struct Analyzer {
    tagger: Box<dyn PosTagger>,
}

impl Default for Analyzer {
    fn default() -> Self {
        Analyzer::new(Box::new(LexiconTagger::default()))
    }
}

impl Analyzer {
    pub fn new(tagger: Box<dyn PosTagger>) -> Self {
        Analyzer { tagger }
    }

    pub fn analyze(&self, text: &str) -> Vec<Token> {
        tokenize(text)
            .into_iter()
            .map(|surface| {
                let lemma = lemmatize(&surface);
                let pos = self.tagger.tag(&lemma);
                Token { surface, lemma, pos }
            })
            .collect()
    }

    /// Lemmas of the noun tokens in `text`, in order.
    pub fn noun_lemmas(&self, text: &str) -> Vec<String> {
        filter_nouns(self.analyze(text)).into_iter().map(|t| t.lemma).collect()
    }
}

/// One tf-idf document: an artifact with a non-empty noun list.
#[derive(Debug, Clone)]
pub struct Document {
    pub artifact_id: String,
    pub author_id: String,
    pub counts: BTreeMap<String, usize>,
}

/// The documents of one reading and their document frequencies.
#[derive(Debug, Clone)]
pub struct DocumentSet {
    docs: Vec<Document>,
    by_artifact: HashMap<String, usize>,
    df: BTreeMap<String, usize>,
}

impl DocumentSet {
    pub fn from_reading(reading: &Reading, analyzer: &Analyzer, extra_stop: &BTreeSet<String>, exec: Execution) -> Self {
        let lemma_lists = exec.map_slice(reading.artifacts(), |a: &Artifact| {
            analyzer
                .noun_lemmas(&a.body)
                .into_iter()
                .filter(|l| !extra_stop.contains(l))
                .collect::<Vec<_>>()
        });
        let docs = reading
            .artifacts()
            .iter()
            .zip(lemma_lists)
            .filter(|(_, lemmas)| !lemmas.is_empty())
            .map(|(a, lemmas)| {
                let mut counts = BTreeMap::new();
                for l in lemmas {
                    *counts.entry(l).or_insert(0) += 1;
                }
                Document {
                    artifact_id: a.id.clone(),
                    author_id: a.author_id.clone(),
                    counts,
                }
            });
        Self::from_documents(docs)
    }

    pub fn from_documents(docs: impl IntoIterator<Item = Document>) -> Self {
        let docs: Vec<Document> = docs.into_iter().filter(|d| !d.counts.is_empty()).collect();
        let mut df = BTreeMap::new();
        for d in &docs {
            for lemma in d.counts.keys() {
                *df.entry(lemma.clone()).or_insert(0) += 1;
            }
        }
        let by_artifact = docs.iter().enumerate().map(|(i, d)| (d.artifact_id.clone(), i)).collect();
        DocumentSet { docs, by_artifact, df }
    }

    pub fn documents(&self) -> &[Document] {
        &self.docs
    }

    pub fn len(&self) -> usize {
        self.docs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.docs.is_empty()
    }

    pub fn document_frequency(&self, lemma: &str) -> usize {
        self.df.get(lemma).copied().unwrap_or(0)
    }

    pub fn term_frequency(&self, lemma: &str, artifact_id: &str) -> usize {
        self.by_artifact
            .get(artifact_id)
            .and_then(|&i| self.docs[i].counts.get(lemma))
            .copied()
            .unwrap_or(0)
    }

    /// Reading-wide raw count of `lemma`.
    pub fn total_count(&self, lemma: &str) -> usize {
        self.docs.iter().filter_map(|d| d.counts.get(lemma)).sum()
    }

    /// `tf × ln(N / df)`, zero when the artifact does not use the lemma.
    pub fn tfidf(&self, lemma: &str, artifact_id: &str) -> Result<f64, TextError> {
        let tf = self.term_frequency(lemma, artifact_id);
        if tf == 0 {
            return Ok(0.0);
        }
        let df = self.document_frequency(lemma);
        if df == 0 {
            return Err(TextError::UndefinedIdf {
                lemma: lemma.to_string(),
                artifact_id: artifact_id.to_string(),
            });
        }
        Ok(tf as f64 * (self.docs.len() as f64 / df as f64).ln())
    }
}

/// tf-idf of `lemma` in `artifact`, with the reading's artifacts as documents.
pub fn tfidf(lemma: &str, artifact: &Artifact, reading: &Reading, analyzer: &Analyzer) -> Result<f64, TextError> {
    DocumentSet::from_reading(reading, analyzer, &BTreeSet::new(), Execution::Sequential).tfidf(lemma, &artifact.id)
}

/// How per-artifact scores are folded into one score per lemma before the
/// lowest-scoring lemmas are dropped.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ScoreAggregation {
    #[default]
    Max,
    Mean,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WordSelectionParams {
    pub min_frequency: usize,
    pub drop_lowest: usize,
    pub top_k: usize,
    /// Extra lemmas removed before counting, for manual curation.
    pub stopwords: BTreeSet<String>,
    pub aggregation: ScoreAggregation,
}

impl Default for WordSelectionParams {
    fn default() -> Self {
        WordSelectionParams {
            min_frequency: 5,
            drop_lowest: 5,
            top_k: 70,
            stopwords: BTreeSet::new(),
            aggregation: ScoreAggregation::Max,
        }
    }
}

impl WordSelectionParams {
    pub fn validate(&self) -> Result<(), TextError> {
        if self.min_frequency == 0 {
            return Err(TextError::InvalidParams("min_frequency must be at least 1".into()));
        }
        if self.top_k == 0 {
            return Err(TextError::InvalidParams("top_k must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SelectedWord {
    pub lemma: String,
    pub author_id: String,
    pub score: f64,
}

/// A scored (lemma, artifact) occurrence.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScoredPair {
    pub lemma: String,
    pub artifact_id: String,
    pub author_id: String,
    pub score: f64,
}

/// Every intermediate stage of the word selection, for inspection.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SelectionTrace {
    /// Lemmas meeting the frequency floor, with their reading-wide counts.
    pub frequent: BTreeMap<String, usize>,
    /// Aggregate score per frequent lemma.
    pub lemma_scores: BTreeMap<String, f64>,
    /// Lemmas removed for having the lowest aggregate scores, lowest first.
    pub dropped: Vec<String>,
    /// Surviving pairs in rank order, before the top-k cut.
    pub ranked: Vec<ScoredPair>,
    pub selected: Vec<SelectedWord>,
}

fn by_score_desc(a: &ScoredPair, b: &ScoredPair) -> Ordering {
    b.score
        .total_cmp(&a.score)
        .then_with(|| a.lemma.cmp(&b.lemma))
        .then_with(|| a.artifact_id.cmp(&b.artifact_id))
}

pub fn select_from_documents(docs: &DocumentSet, params: &WordSelectionParams) -> Result<SelectionTrace, TextError> {
    params.validate()?;

    let mut totals: BTreeMap<String, usize> = BTreeMap::new();
    for d in docs.documents() {
        for (lemma, &c) in &d.counts {
            *totals.entry(lemma.clone()).or_insert(0) += c;
        }
    }
    let frequent: BTreeMap<String, usize> = totals
        .into_iter()
        .filter(|&(_, c)| c >= params.min_frequency)
        .collect();

    let mut pairs = Vec::new();
    for d in docs.documents() {
        for lemma in d.counts.keys().filter(|l| frequent.contains_key(*l)) {
            pairs.push(ScoredPair {
                lemma: lemma.clone(),
                artifact_id: d.artifact_id.clone(),
                author_id: d.author_id.clone(),
                score: docs.tfidf(lemma, &d.artifact_id)?,
            });
        }
    }
    pairs.sort_by(by_score_desc);

    let mut per_lemma: BTreeMap<String, Vec<f64>> = BTreeMap::new();
    for p in &pairs {
        per_lemma.entry(p.lemma.clone()).or_default().push(p.score);
    }
    let lemma_scores: BTreeMap<String, f64> = per_lemma
        .into_iter()
        .map(|(lemma, mut scores)| {
            // Summation in a fixed order keeps the mean independent of input order.
            scores.sort_by(f64::total_cmp);
            let agg = match params.aggregation {
                ScoreAggregation::Max => scores.iter().copied().fold(f64::NEG_INFINITY, f64::max),
                ScoreAggregation::Mean => scores.iter().sum::<f64>() / scores.len() as f64,
            };
            (lemma, agg)
        })
        .collect();

    let mut ascending: Vec<(&String, f64)> = lemma_scores.iter().map(|(l, &s)| (l, s)).collect();
    ascending.sort_by(|a, b| a.1.total_cmp(&b.1).then_with(|| a.0.cmp(b.0)));
    let dropped: Vec<String> = ascending
        .iter()
        .take(params.drop_lowest)
        .map(|(l, _)| (*l).clone())
        .collect();
    let dropped_set: HashSet<&str> = dropped.iter().map(String::as_str).collect();

    let ranked: Vec<ScoredPair> = pairs
        .into_iter()
        .filter(|p| !dropped_set.contains(p.lemma.as_str()))
        .collect();

    let mut seen: HashSet<(&str, &str)> = HashSet::new();
    let mut selected = Vec::new();
    for p in ranked.iter().take(params.top_k) {
        // Rank order is descending, so the first hit carries the max score.
        if seen.insert((p.lemma.as_str(), p.author_id.as_str())) {
            selected.push(SelectedWord {
                lemma: p.lemma.clone(),
                author_id: p.author_id.clone(),
                score: p.score,
            });
        }
    }

    Ok(SelectionTrace {
        frequent,
        lemma_scores,
        dropped,
        ranked,
        selected,
    })
}

/// Selects the (lemma, author) pairs that feed the creation network.
pub fn select_cn_words(reading: &Reading, params: &WordSelectionParams, analyzer: &Analyzer) -> Result<Vec<SelectedWord>, TextError> {
    select_cn_words_traced(reading, params, analyzer, Execution::default()).map(|t| t.selected)
}

pub fn select_cn_words_traced(
    reading: &Reading,
    params: &WordSelectionParams,
    analyzer: &Analyzer,
    exec: Execution,
) -> Result<SelectionTrace, TextError> {
    params.validate()?;
    let docs = DocumentSet::from_reading(reading, analyzer, &params.stopwords, exec);
    select_from_documents(&docs, params)
}
