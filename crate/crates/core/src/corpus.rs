//! Discourse data model: readings, quotes, annotations and replies.
//!
//! A corpus is loaded from JSONL or CSV, validated in full, and is immutable
//! afterwards. Replies must resolve, within their own reading, to an
//! annotation at the head of an acyclic chain.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CorpusError {
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("artifact {0}: parent does not exist in its reading")]
    DanglingParent(String),
    #[error("artifact {0}: parent belongs to a different reading")]
    CrossReadingParent(String),
    #[error("artifact {0}: quote does not exist in its reading")]
    MissingQuote(String),
    #[error("artifact {0}: reply chain does not terminate at an annotation")]
    CyclicThread(String),
    #[error("duplicate {kind} id {id} in reading {reading_id}")]
    DuplicateId {
        kind: &'static str,
        id: String,
        reading_id: String,
    },
    #[error("corpus contains no records")]
    EmptyCorpus,
    #[error("unknown reading {0}")]
    UnknownReading(String),
    #[error("artifact {0} is not part of the corpus")]
    UnknownArtifact(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for CorpusError {
    fn from(e: std::io::Error) -> Self {
        CorpusError::Io(e.to_string())
    }
}

/// On-disk record encoding.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CorpusFormat {
    Jsonl,
    Csv,
}

impl CorpusFormat {
    /// Picks a format from a file extension, defaulting to JSONL.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("csv") => CorpusFormat::Csv,
            _ => CorpusFormat::Jsonl,
        }
    }
}

impl FromStr for CorpusFormat {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "jsonl" => Ok(CorpusFormat::Jsonl),
            "csv" => Ok(CorpusFormat::Csv),
            other => Err(format!("unknown corpus format {other:?}")),
        }
    }
}

/// Lowercases and collapses every whitespace run to a single space.
pub fn normalize_text(text: &str) -> String {
    text.split_whitespace()
        .map(|w| w.to_lowercase())
        .collect::<Vec<_>>()
        .join(" ")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Quote {
    pub id: String,
    pub reading_id: String,
    pub text: String,
    pub normalized_text: String,
}

impl Quote {
    pub fn new(id: impl Into<String>, reading_id: impl Into<String>, text: impl Into<String>) -> Self {
        let text = text.into();
        let normalized_text = normalize_text(&text);
        Quote {
            id: id.into(),
            reading_id: reading_id.into(),
            text,
            normalized_text,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ArtifactKind {
    Annotation,
    Reply,
}

impl fmt::Display for ArtifactKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ArtifactKind::Annotation => "annotation",
            ArtifactKind::Reply => "reply",
        })
    }
}

/// An annotation anchored to a quote, or a reply to another artifact.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Artifact {
    pub id: String,
    pub author_id: String,
    pub reading_id: String,
    pub kind: ArtifactKind,
    pub quote_id: Option<String>,
    pub parent_id: Option<String>,
    pub body: String,
    /// Opaque timestamp, kept verbatim for export.
    pub timestamp: Option<String>,
}

impl Artifact {
    pub fn annotation(
        id: impl Into<String>,
        author_id: impl Into<String>,
        reading_id: impl Into<String>,
        quote_id: impl Into<String>,
        body: impl Into<String>,
    ) -> Self {
        Artifact {
            id: id.into(),
            author_id: author_id.into(),
            reading_id: reading_id.into(),
            kind: ArtifactKind::Annotation,
            quote_id: Some(quote_id.into()),
            parent_id: None,
            body: body.into(),
            timestamp: None,
        }
    }

    pub fn reply(
        id: impl Into<String>,
        author_id: impl Into<String>,
        reading_id: impl Into<String>,
        parent_id: impl Into<String>,
        body: impl Into<String>,
    ) -> Self {
        Artifact {
            id: id.into(),
            author_id: author_id.into(),
            reading_id: reading_id.into(),
            kind: ArtifactKind::Reply,
            quote_id: None,
            parent_id: Some(parent_id.into()),
            body: body.into(),
            timestamp: None,
        }
    }

    pub fn is_annotation(&self) -> bool {
        self.kind == ArtifactKind::Annotation
    }

    /// Whitespace-delimited token count of the raw body.
    pub fn word_count(&self) -> usize {
        self.body.split_whitespace().count()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reading {
    pub id: String,
    pub title: String,
    pub quotes: BTreeMap<String, Quote>,
    artifacts: Vec<Artifact>,
    index: HashMap<String, usize>,
}

impl Reading {
    pub fn artifacts(&self) -> &[Artifact] {
        &self.artifacts
    }

    pub fn artifact(&self, id: &str) -> Option<&Artifact> {
        self.index.get(id).map(|&i| &self.artifacts[i])
    }

    pub fn quote(&self, id: &str) -> Option<&Quote> {
        self.quotes.get(id)
    }

    /// Authors with at least one artifact in this reading.
    pub fn active_authors(&self) -> BTreeSet<String> {
        self.artifacts.iter().map(|a| a.author_id.clone()).collect()
    }

    /// Annotation at the head of `artifact`'s reply chain.
    pub fn thread_root<'a>(&'a self, artifact: &'a Artifact) -> Result<&'a Artifact, CorpusError> {
        self.walk_to_root(artifact).map(|(root, _)| root)
    }

    /// Number of reply hops between `artifact` and its root annotation.
    pub fn thread_depth(&self, artifact: &Artifact) -> Result<usize, CorpusError> {
        self.walk_to_root(artifact).map(|(_, depth)| depth)
    }

    fn walk_to_root<'a>(&'a self, artifact: &'a Artifact) -> Result<(&'a Artifact, usize), CorpusError> {
        let mut current = artifact;
        let mut depth = 0;
        while current.kind == ArtifactKind::Reply {
            // A chain longer than the reading itself must revisit an artifact.
            if depth > self.artifacts.len() {
                return Err(CorpusError::CyclicThread(artifact.id.clone()));
            }
            let parent_id = current
                .parent_id
                .as_deref()
                .ok_or_else(|| CorpusError::DanglingParent(current.id.clone()))?;
            current = self
                .artifact(parent_id)
                .ok_or_else(|| CorpusError::DanglingParent(current.id.clone()))?;
            depth += 1;
        }
        Ok((current, depth))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Corpus {
    pub readings: BTreeMap<String, Reading>,
    pub authors: BTreeSet<String>,
}

impl Corpus {
    pub fn reading(&self, id: &str) -> Result<&Reading, CorpusError> {
        self.readings
            .get(id)
            .ok_or_else(|| CorpusError::UnknownReading(id.to_string()))
    }

    pub fn artifact_count(&self) -> usize {
        self.readings.values().map(|r| r.artifacts.len()).sum()
    }

    /// Builds and validates a corpus from in-memory parts.
    ///
    /// Readings are created on demand from the `reading_id` of quotes and
    /// artifacts; `titles` supplies optional display titles.
    pub fn from_parts(
        titles: impl IntoIterator<Item = (String, String)>,
        quotes: impl IntoIterator<Item = Quote>,
        artifacts: impl IntoIterator<Item = Artifact>,
    ) -> Result<Corpus, Vec<CorpusError>> {
        let mut builder = CorpusBuilder::default();
        for (id, title) in titles {
            builder.add_reading(id, title);
        }
        for q in quotes {
            builder.add_quote(q);
        }
        for a in artifacts {
            builder.add_artifact(a);
        }
        builder.finish()
    }
}

/// Head annotation of `artifact`'s thread; identity for annotations.
pub fn thread_root<'a>(artifact: &Artifact, corpus: &'a Corpus) -> Result<&'a Artifact, CorpusError> {
    let reading = corpus.reading(&artifact.reading_id)?;
    let own = reading
        .artifact(&artifact.id)
        .ok_or_else(|| CorpusError::UnknownArtifact(artifact.id.clone()))?;
    reading.thread_root(own)
}

#[derive(Default)]
struct CorpusBuilder {
    titles: BTreeMap<String, String>,
    quotes: Vec<Quote>,
    artifacts: Vec<Artifact>,
    errors: Vec<CorpusError>,
}

impl CorpusBuilder {
    fn add_reading(&mut self, id: String, title: String) {
        self.titles.insert(id, title);
    }

    fn add_quote(&mut self, q: Quote) {
        self.quotes.push(q);
    }

    fn add_artifact(&mut self, a: Artifact) {
        self.artifacts.push(a);
    }

    fn finish(mut self) -> Result<Corpus, Vec<CorpusError>> {
        if self.titles.is_empty() && self.quotes.is_empty() && self.artifacts.is_empty() {
            return Err(vec![CorpusError::EmptyCorpus]);
        }
        let mut readings: BTreeMap<String, Reading> = BTreeMap::new();
        let ensure = |readings: &mut BTreeMap<String, Reading>, id: &str, titles: &BTreeMap<String, String>| {
            if !readings.contains_key(id) {
                readings.insert(
                    id.to_string(),
                    Reading {
                        id: id.to_string(),
                        title: titles.get(id).cloned().unwrap_or_else(|| id.to_string()),
                        quotes: BTreeMap::new(),
                        artifacts: Vec::new(),
                        index: HashMap::new(),
                    },
                );
            }
        };
        for id in self.titles.keys() {
            ensure(&mut readings, id, &self.titles);
        }
        for q in std::mem::take(&mut self.quotes) {
            ensure(&mut readings, &q.reading_id, &self.titles);
            let reading = readings.get_mut(&q.reading_id).expect("reading just ensured");
            if reading.quotes.contains_key(&q.id) {
                self.errors.push(CorpusError::DuplicateId {
                    kind: "quote",
                    id: q.id.clone(),
                    reading_id: q.reading_id.clone(),
                });
                continue;
            }
            reading.quotes.insert(q.id.clone(), q);
        }
        let mut authors = BTreeSet::new();
        for a in std::mem::take(&mut self.artifacts) {
            ensure(&mut readings, &a.reading_id, &self.titles);
            let reading = readings.get_mut(&a.reading_id).expect("reading just ensured");
            if reading.index.contains_key(&a.id) {
                self.errors.push(CorpusError::DuplicateId {
                    kind: "artifact",
                    id: a.id.clone(),
                    reading_id: a.reading_id.clone(),
                });
                continue;
            }
            authors.insert(a.author_id.clone());
            reading.index.insert(a.id.clone(), reading.artifacts.len());
            reading.artifacts.push(a);
        }

        for reading in readings.values() {
            for a in &reading.artifacts {
                match a.kind {
                    ArtifactKind::Annotation => {
                        let qid = a.quote_id.as_deref().unwrap_or_default();
                        if !reading.quotes.contains_key(qid) {
                            self.errors.push(CorpusError::MissingQuote(a.id.clone()));
                        }
                    }
                    ArtifactKind::Reply => {
                        let pid = a.parent_id.as_deref().unwrap_or_default();
                        if reading.artifact(pid).is_none() {
                            let elsewhere = readings
                                .values()
                                .any(|r| r.id != reading.id && r.artifact(pid).is_some());
                            self.errors.push(if elsewhere {
                                CorpusError::CrossReadingParent(a.id.clone())
                            } else {
                                CorpusError::DanglingParent(a.id.clone())
                            });
                        } else if let Err(CorpusError::CyclicThread(id)) = reading.thread_root(a) {
                            self.errors.push(CorpusError::CyclicThread(id));
                        }
                    }
                }
            }
        }

        if self.errors.is_empty() {
            Ok(Corpus { readings, authors })
        } else {
            Err(self.errors)
        }
    }
}

/// One line of the JSONL corpus, or one row of the CSV variant.
#[derive(Debug, Default, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRecord {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    record: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    id: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    reading_id: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    author_id: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    kind: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    quote_id: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    parent_id: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    body: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    ts: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    text: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    title: Option<String>,
}

const CSV_COLUMNS: [&str; 11] = [
    "record", "id", "reading_id", "author_id", "kind", "quote_id", "parent_id", "body", "ts", "text", "title",
];

enum Parsed {
    Reading(String, String),
    Quote(Quote),
    Artifact(Artifact),
}

fn required(field: Option<String>, name: &str, line: usize) -> Result<String, CorpusError> {
    match field {
        Some(v) if !v.trim().is_empty() => Ok(v),
        _ => Err(CorpusError::Parse {
            line,
            reason: format!("missing required field {name:?}"),
        }),
    }
}

fn reject(line: usize, reason: impl Into<String>) -> CorpusError {
    CorpusError::Parse {
        line,
        reason: reason.into(),
    }
}

impl RawRecord {
    /// CSV leaves absent cells as empty strings.
    fn blank_to_none(mut self) -> Self {
        for f in [
            &mut self.record,
            &mut self.id,
            &mut self.reading_id,
            &mut self.author_id,
            &mut self.kind,
            &mut self.quote_id,
            &mut self.parent_id,
            &mut self.ts,
            &mut self.text,
            &mut self.title,
        ] {
            if f.as_deref() == Some("") {
                *f = None;
            }
        }
        // The body column is always present; an empty cell is an empty body.
        self.body.get_or_insert_with(String::new);
        self
    }

    fn into_parsed(self, line: usize) -> Result<Parsed, CorpusError> {
        match self.record.as_deref().unwrap_or("artifact") {
            "reading" => {
                let id = required(self.id, "id", line)?;
                let title = self.title.unwrap_or_else(|| id.clone());
                Ok(Parsed::Reading(id, title))
            }
            "quote" => {
                let id = required(self.id, "id", line)?;
                let reading_id = required(self.reading_id, "reading_id", line)?;
                let text = required(self.text, "text", line)?;
                Ok(Parsed::Quote(Quote::new(id, reading_id, text)))
            }
            "artifact" => {
                let id = required(self.id, "id", line)?;
                let reading_id = required(self.reading_id, "reading_id", line)?;
                let author_id = required(self.author_id, "author_id", line)?;
                let kind = match self.kind.as_deref() {
                    Some("annotation") => ArtifactKind::Annotation,
                    Some("reply") => ArtifactKind::Reply,
                    Some(other) => return Err(reject(line, format!("unknown kind {other:?}"))),
                    None => return Err(reject(line, "missing required field \"kind\"")),
                };
                let body = self
                    .body
                    .ok_or_else(|| reject(line, "missing required field \"body\""))?;
                match kind {
                    ArtifactKind::Annotation => {
                        if self.quote_id.is_none() {
                            return Err(reject(line, format!("annotation {id} has no quote_id")));
                        }
                        if self.parent_id.is_some() {
                            return Err(reject(line, format!("annotation {id} must not have a parent_id")));
                        }
                        if body.trim().is_empty() {
                            return Err(reject(line, format!("annotation {id} has an empty body")));
                        }
                    }
                    ArtifactKind::Reply => {
                        if self.parent_id.is_none() {
                            return Err(reject(line, format!("reply {id} has no parent_id")));
                        }
                        if self.quote_id.is_some() {
                            return Err(reject(line, format!("reply {id} must not have a quote_id")));
                        }
                    }
                }
                Ok(Parsed::Artifact(Artifact {
                    id,
                    author_id,
                    reading_id,
                    kind,
                    quote_id: self.quote_id,
                    parent_id: self.parent_id,
                    body,
                    timestamp: self.ts,
                }))
            }
            other => Err(reject(line, format!("unknown record type {other:?}"))),
        }
    }
}

fn parse_jsonl<R: Read>(input: R) -> (Vec<(usize, Parsed)>, Vec<CorpusError>) {
    let mut out = Vec::new();
    let mut errors = Vec::new();
    for (i, line) in BufReader::new(input).lines().enumerate() {
        let lineno = i + 1;
        let line = match line {
            Ok(l) => l,
            Err(e) => {
                errors.push(reject(lineno, format!("unreadable line: {e}")));
                continue;
            }
        };
        if line.trim().is_empty() {
            continue;
        }
        match serde_json::from_str::<RawRecord>(&line) {
            Ok(raw) => match raw.into_parsed(lineno) {
                Ok(p) => out.push((lineno, p)),
                Err(e) => errors.push(e),
            },
            Err(e) => errors.push(reject(lineno, e.to_string())),
        }
    }
    (out, errors)
}

fn parse_csv<R: Read>(input: R) -> (Vec<(usize, Parsed)>, Vec<CorpusError>) {
    let mut out = Vec::new();
    let mut errors = Vec::new();
    let mut reader = csv::ReaderBuilder::new().flexible(false).from_reader(input);
    for row in reader.deserialize::<RawRecord>() {
        match row {
            Ok(raw) => {
                // Header is line 1; rows are counted from there.
                let lineno = out.len() + errors.len() + 2;
                match raw.blank_to_none().into_parsed(lineno) {
                    Ok(p) => out.push((lineno, p)),
                    Err(e) => errors.push(e),
                }
            }
            Err(e) => {
                let lineno = e.position().map(|p| p.line() as usize).unwrap_or(0);
                errors.push(reject(lineno, e.to_string()));
            }
        }
    }
    (out, errors)
}

/// Parses and validates a corpus, reporting every problem found.
pub fn read_corpus_report<R: Read>(input: R, format: CorpusFormat) -> Result<Corpus, Vec<CorpusError>> {
    let (records, mut errors) = match format {
        CorpusFormat::Jsonl => parse_jsonl(input),
        CorpusFormat::Csv => parse_csv(input),
    };
    if records.is_empty() && errors.is_empty() {
        return Err(vec![CorpusError::EmptyCorpus]);
    }
    let mut builder = CorpusBuilder::default();
    for (_, p) in records {
        match p {
            Parsed::Reading(id, title) => builder.add_reading(id, title),
            Parsed::Quote(q) => builder.add_quote(q),
            Parsed::Artifact(a) => builder.add_artifact(a),
        }
    }
    match builder.finish() {
        Ok(corpus) if errors.is_empty() => Ok(corpus),
        Ok(_) => Err(errors),
        Err(mut more) => {
            errors.append(&mut more);
            Err(errors)
        }
    }
}

/// Like [`read_corpus_report`] but stops at the first error.
pub fn read_corpus<R: Read>(input: R, format: CorpusFormat) -> Result<Corpus, CorpusError> {
    read_corpus_report(input, format).map_err(|mut errs| errs.swap_remove(0))
}

pub fn load_corpus_report(path: &Path, format: CorpusFormat) -> Result<Corpus, Vec<CorpusError>> {
    let file = std::fs::File::open(path).map_err(|e| vec![CorpusError::from(e)])?;
    read_corpus_report(file, format)
}

pub fn load_corpus(path: &Path, format: CorpusFormat) -> Result<Corpus, CorpusError> {
    load_corpus_report(path, format).map_err(|mut errs| errs.swap_remove(0))
}

fn canonical_records(corpus: &Corpus) -> Vec<RawRecord> {
    let mut records = Vec::new();
    for reading in corpus.readings.values() {
        records.push(RawRecord {
            record: Some("reading".into()),
            id: Some(reading.id.clone()),
            title: Some(reading.title.clone()),
            ..Default::default()
        });
        for q in reading.quotes.values() {
            records.push(RawRecord {
                record: Some("quote".into()),
                id: Some(q.id.clone()),
                reading_id: Some(q.reading_id.clone()),
                text: Some(q.text.clone()),
                ..Default::default()
            });
        }
        for a in &reading.artifacts {
            records.push(RawRecord {
                record: None,
                id: Some(a.id.clone()),
                reading_id: Some(a.reading_id.clone()),
                author_id: Some(a.author_id.clone()),
                kind: Some(a.kind.to_string()),
                quote_id: a.quote_id.clone(),
                parent_id: a.parent_id.clone(),
                body: Some(a.body.clone()),
                ts: a.timestamp.clone(),
                ..Default::default()
            });
        }
    }
    records
}

/// Writes the corpus as canonical JSONL: per reading, its reading record,
/// quotes by id, then artifacts in their original order.
pub fn write_jsonl<W: Write>(corpus: &Corpus, mut out: W) -> std::io::Result<()> {
    for rec in canonical_records(corpus) {
        serde_json::to_writer(&mut out, &rec)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

pub fn write_csv<W: Write>(corpus: &Corpus, out: W) -> std::io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_COLUMNS)?;
    for rec in canonical_records(corpus) {
        let cells: [Option<&String>; 11] = [
            rec.record.as_ref(),
            rec.id.as_ref(),
            rec.reading_id.as_ref(),
            rec.author_id.as_ref(),
            rec.kind.as_ref(),
            rec.quote_id.as_ref(),
            rec.parent_id.as_ref(),
            rec.body.as_ref(),
            rec.ts.as_ref(),
            rec.text.as_ref(),
            rec.title.as_ref(),
        ];
        w.write_record(cells.iter().map(|c| c.map(String::as_str).unwrap_or("")))?;
    }
    w.flush()
}

/// Per-reading descriptive counts.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReadingStats {
    pub reading_id: String,
    pub posts: usize,
    pub replies: usize,
    /// Mean raw word count over annotation bodies; `None` with no annotations.
    pub avg_words_per_post: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeanSd {
    pub mean: f64,
    pub sd: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StatsTable {
    pub rows: Vec<ReadingStats>,
    pub posts: Option<MeanSd>,
    pub replies: Option<MeanSd>,
    /// Over readings that have at least one annotation.
    pub avg_words: Option<MeanSd>,
}

fn population_mean_sd(values: &[f64]) -> Option<MeanSd> {
    if values.is_empty() {
        return None;
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    Some(MeanSd { mean, sd: var.sqrt() })
}

pub fn reading_stats(reading: &Reading) -> ReadingStats {
    let annotations: Vec<&Artifact> = reading.artifacts.iter().filter(|a| a.is_annotation()).collect();
    let posts = annotations.len();
    let avg = (posts > 0).then(|| annotations.iter().map(|a| a.word_count()).sum::<usize>() as f64 / posts as f64);
    ReadingStats {
        reading_id: reading.id.clone(),
        posts,
        replies: reading.artifacts.len() - posts,
        avg_words_per_post: avg,
    }
}

/// Posts, replies and average words per post for each reading (or just
/// `reading_id`), with population mean and SD of the per-reading counts.
pub fn descriptive_stats(corpus: &Corpus, reading_id: Option<&str>) -> Result<StatsTable, CorpusError> {
    let rows: Vec<ReadingStats> = match reading_id {
        Some(id) => vec![reading_stats(corpus.reading(id)?)],
        None => corpus.readings.values().map(reading_stats).collect(),
    };
    let posts: Vec<f64> = rows.iter().map(|r| r.posts as f64).collect();
    let replies: Vec<f64> = rows.iter().map(|r| r.replies as f64).collect();
    let words: Vec<f64> = rows.iter().filter_map(|r| r.avg_words_per_post).collect();
    Ok(StatsTable {
        avg_words: population_mean_sd(&words),
        posts: population_mean_sd(&posts),
        replies: population_mean_sd(&replies),
        rows,
    })
}
