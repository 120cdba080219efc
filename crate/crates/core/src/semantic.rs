//! Quote embeddings, cosine similarity and joint-quote detection.
//!
//! Vectors normally come from an external sentence-embedding model and are
//! ingested from disk. [`hash_embed`] is a deterministic stand-in for tests
//! and for corpora without precomputed vectors.
//!
//! Binary embedding layout (all integers little-endian):
//!
//! ```text
//! magic   8 bytes  "AICNETEV"
//! version u32      1
//! dim     u32
//! count   u32
//! count × { id_len u32, id UTF-8 bytes, dim × f32 }
//! ```

use std::collections::{BTreeMap, BTreeSet};
use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::{normalize_text, Corpus, Quote};
use crate::exec::Execution;

pub const BINARY_MAGIC: &[u8; 8] = b"AICNETEV";
pub const BINARY_VERSION: u32 = 1;
/// Dimension of the external sentence-embedding vectors.
pub const MODEL_DIM: usize = 768;
pub const DEFAULT_HASH_DIM: usize = 256;
pub const DEFAULT_THRESHOLD: f64 = 0.8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SemanticError {
    #[error("quote {quote_id}: vector has {found} components, expected {expected}")]
    DimensionMismatch {
        quote_id: String,
        expected: usize,
        found: usize,
    },
    #[error("quote {0}: zero vector")]
    ZeroVector(String),
    #[error("no embedding for quote {0}")]
    MissingEmbedding(String),
    #[error("cannot embed empty text")]
    EmptyText,
    #[error("embedding dimension must be at least {min}, got {got}")]
    InvalidDim { min: usize, got: usize },
    #[error("threshold must lie in (0, 1], got {0}")]
    InvalidThreshold(f64),
    #[error("duplicate embedding for quote {0}")]
    DuplicateQuote(String),
    #[error("embedding file: {0}")]
    Format(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for SemanticError {
    fn from(e: std::io::Error) -> Self {
        SemanticError::Io(e.to_string())
    }
}

/// Fixed-dimension vectors keyed by quote id.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct EmbeddingStore {
    dim: usize,
    vectors: BTreeMap<String, Vec<f64>>,
}

impl EmbeddingStore {
    pub fn new(dim: usize) -> Self {
        EmbeddingStore {
            dim,
            vectors: BTreeMap::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn get(&self, quote_id: &str) -> Option<&[f64]> {
        self.vectors.get(quote_id).map(Vec::as_slice)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &Vec<f64>)> {
        self.vectors.iter()
    }

    pub fn insert(&mut self, quote_id: impl Into<String>, vector: Vec<f64>) -> Result<(), SemanticError> {
        let quote_id = quote_id.into();
        if self.vectors.is_empty() && self.dim == 0 {
            self.dim = vector.len();
        }
        if vector.len() != self.dim {
            return Err(SemanticError::DimensionMismatch {
                quote_id,
                expected: self.dim,
                found: vector.len(),
            });
        }
        if vector.iter().all(|&x| x == 0.0) {
            return Err(SemanticError::ZeroVector(quote_id));
        }
        if self.vectors.contains_key(&quote_id) {
            return Err(SemanticError::DuplicateQuote(quote_id));
        }
        self.vectors.insert(quote_id, vector);
        Ok(())
    }

    /// Quote ids in the store that no reading of `corpus` defines.
    pub fn orphans(&self, corpus: &Corpus) -> Vec<String> {
        let known: BTreeSet<&str> = corpus
            .readings
            .values()
            .flat_map(|r| r.quotes.keys().map(String::as_str))
            .collect();
        self.vectors
            .keys()
            .filter(|id| !known.contains(id.as_str()))
            .cloned()
            .collect()
    }

    /// Embeds every quote of the corpus with [`hash_embed`].
    pub fn hashed(corpus: &Corpus, dim: usize) -> Result<Self, SemanticError> {
        let mut store = EmbeddingStore::new(dim);
        for reading in corpus.readings.values() {
            for q in reading.quotes.values() {
                store.insert(q.id.clone(), hash_embed(&q.text, dim)?)?;
            }
        }
        Ok(store)
    }
}

#[derive(Serialize, Deserialize)]
struct JsonlVector {
    quote_id: String,
    vector: Vec<f64>,
}

pub fn read_embeddings_jsonl<R: Read>(input: R) -> Result<EmbeddingStore, SemanticError> {
    let mut store = EmbeddingStore::new(0);
    for (i, line) in BufReader::new(input).lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let rec: JsonlVector = serde_json::from_str(&line)
            .map_err(|e| SemanticError::Format(format!("line {}: {e}", i + 1)))?;
        store.insert(rec.quote_id, rec.vector)?;
    }
    Ok(store)
}

pub fn write_embeddings_jsonl<W: Write>(store: &EmbeddingStore, mut out: W) -> Result<(), SemanticError> {
    for (id, v) in &store.vectors {
        serde_json::to_writer(
            &mut out,
            &JsonlVector {
                quote_id: id.clone(),
                vector: v.clone(),
            },
        )
        .map_err(|e| SemanticError::Format(e.to_string()))?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

fn read_u32(bytes: &[u8], at: &mut usize) -> Result<u32, SemanticError> {
    let end = *at + 4;
    let chunk = bytes
        .get(*at..end)
        .ok_or_else(|| SemanticError::Format("truncated binary file".into()))?;
    *at = end;
    Ok(u32::from_le_bytes(chunk.try_into().expect("four bytes")))
}

pub fn read_embeddings_binary(bytes: &[u8]) -> Result<EmbeddingStore, SemanticError> {
    if bytes.len() < 8 || &bytes[..8] != BINARY_MAGIC {
        return Err(SemanticError::Format("bad magic header".into()));
    }
    let mut at = 8;
    let version = read_u32(bytes, &mut at)?;
    if version != BINARY_VERSION {
        return Err(SemanticError::Format(format!("unsupported version {version}")));
    }
    let dim = read_u32(bytes, &mut at)? as usize;
    let count = read_u32(bytes, &mut at)? as usize;
    let mut store = EmbeddingStore::new(dim);
    for _ in 0..count {
        let id_len = read_u32(bytes, &mut at)? as usize;
        let id_bytes = bytes
            .get(at..at + id_len)
            .ok_or_else(|| SemanticError::Format("truncated binary file".into()))?;
        at += id_len;
        let id = std::str::from_utf8(id_bytes)
            .map_err(|_| SemanticError::Format("quote id is not UTF-8".into()))?
            .to_string();
        let mut v = Vec::with_capacity(dim);
        for _ in 0..dim {
            v.push(f32::from_bits(read_u32(bytes, &mut at)?) as f64);
        }
        store.insert(id, v)?;
    }
    if at != bytes.len() {
        return Err(SemanticError::Format("trailing bytes after last record".into()));
    }
    Ok(store)
}

/// Writes the binary variant; components are narrowed to f32.
pub fn write_embeddings_binary<W: Write>(store: &EmbeddingStore, mut out: W) -> Result<(), SemanticError> {
    out.write_all(BINARY_MAGIC)?;
    out.write_all(&BINARY_VERSION.to_le_bytes())?;
    out.write_all(&(store.dim as u32).to_le_bytes())?;
    out.write_all(&(store.vectors.len() as u32).to_le_bytes())?;
    for (id, v) in &store.vectors {
        out.write_all(&(id.len() as u32).to_le_bytes())?;
        out.write_all(id.as_bytes())?;
        for &x in v {
            out.write_all(&(x as f32).to_le_bytes())?;
        }
    }
    Ok(())
}

/// A loaded store plus the ids it holds that the corpus does not define.
#[derive(Debug, Clone)]
pub struct LoadedEmbeddings {
    pub store: EmbeddingStore,
    pub orphan_warnings: Vec<String>,
}

/// Loads JSONL or binary embeddings, sniffing the magic header.
pub fn load_embeddings(path: &Path, corpus: Option<&Corpus>) -> Result<LoadedEmbeddings, SemanticError> {
    let bytes = std::fs::read(path)?;
    let store = if bytes.starts_with(BINARY_MAGIC) {
        read_embeddings_binary(&bytes)?
    } else {
        read_embeddings_jsonl(bytes.as_slice())?
    };
    let orphan_warnings = corpus.map(|c| store.orphans(c)).unwrap_or_default();
    Ok(LoadedEmbeddings { store, orphan_warnings })
}

const FNV_OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
const FNV_PRIME: u64 = 0x0000_0100_0000_01b3;

/// 64-bit FNV-1a.
pub fn fnv1a(bytes: &[u8]) -> u64 {
    bytes
        .iter()
        .fold(FNV_OFFSET, |h, &b| (h ^ b as u64).wrapping_mul(FNV_PRIME))
}

/// Deterministic character n-gram embedding.
///
/// The normalized text is padded with one space on each side; every
/// character 3-, 4- and 5-gram is hashed with FNV-1a. Bucket is
/// `hash % dim`, sign is `+1` when bit 63 is clear. Texts shorter than three
/// characters contribute their whole padded form as one gram. The count
/// vector is L2-normalized.
pub fn hash_embed(text: &str, dim: usize) -> Result<Vec<f64>, SemanticError> {
    if dim < 8 {
        return Err(SemanticError::InvalidDim { min: 8, got: dim });
    }
    let norm = normalize_text(text);
    if norm.is_empty() {
        return Err(SemanticError::EmptyText);
    }
    let chars: Vec<char> = format!(" {norm} ").chars().collect();
    let mut v = vec![0.0f64; dim];
    let mut add = |gram: &[char]| {
        let s: String = gram.iter().collect();
        let h = fnv1a(s.as_bytes());
        let sign = if h >> 63 == 0 { 1.0 } else { -1.0 };
        v[(h % dim as u64) as usize] += sign;
    };
    if chars.len() < 3 {
        add(&chars);
    } else {
        for n in 3..=5 {
            for gram in chars.windows(n) {
                add(gram);
            }
        }
    }
    let norm2 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm2 == 0.0 {
        return Err(SemanticError::ZeroVector(text.to_string()));
    }
    v.iter_mut().for_each(|x| *x /= norm2);
    Ok(v)
}

/// Cosine similarity clamped to [-1, 1].
pub fn cosine(u: &[f64], v: &[f64]) -> Result<f64, SemanticError> {
    if u.len() != v.len() {
        return Err(SemanticError::DimensionMismatch {
            quote_id: String::new(),
            expected: u.len(),
            found: v.len(),
        });
    }
    let nu = u.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nv = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if nu == 0.0 || nv == 0.0 {
        return Err(SemanticError::ZeroVector(String::new()));
    }
    let dot: f64 = u.iter().zip(v).map(|(a, b)| a * b).sum();
    Ok((dot / (nu * nv)).clamp(-1.0, 1.0))
}

/// 1.0 for the same quote or identical normalized text, otherwise the
/// cosine of the stored vectors.
pub fn quote_similarity(q1: &Quote, q2: &Quote, store: &EmbeddingStore) -> Result<f64, SemanticError> {
    if q1.id == q2.id || q1.normalized_text == q2.normalized_text {
        return Ok(1.0);
    }
    let u = store
        .get(&q1.id)
        .ok_or_else(|| SemanticError::MissingEmbedding(q1.id.clone()))?;
    let v = store
        .get(&q2.id)
        .ok_or_else(|| SemanticError::MissingEmbedding(q2.id.clone()))?;
    cosine(u, v)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JointPair {
    pub quote_a: String,
    pub quote_b: String,
    pub similarity: f64,
}

pub fn check_threshold(tau: f64) -> Result<(), SemanticError> {
    if tau > 0.0 && tau <= 1.0 {
        Ok(())
    } else {
        Err(SemanticError::InvalidThreshold(tau))
    }
}

/// Unordered quote pairs across the two sets whose similarity reaches `tau`,
/// sorted by `(quote_a, quote_b)` with `quote_a <= quote_b`.
pub fn joint_pairs(qu: &[&Quote], qv: &[&Quote], store: &EmbeddingStore, tau: f64) -> Result<Vec<JointPair>, SemanticError> {
    check_threshold(tau)?;
    joint_pairs_with(qu, qv, tau, |a, b| quote_similarity(a, b, store))
}

pub(crate) fn joint_pairs_with<F>(qu: &[&Quote], qv: &[&Quote], tau: f64, mut sim: F) -> Result<Vec<JointPair>, SemanticError>
where
    F: FnMut(&Quote, &Quote) -> Result<f64, SemanticError>,
{
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for a in qu {
        for b in qv {
            let (lo, hi) = if a.id <= b.id { (a, b) } else { (b, a) };
            if !seen.insert((lo.id.as_str(), hi.id.as_str())) {
                continue;
            }
            let s = sim(lo, hi)?;
            if s >= tau {
                out.push(JointPair {
                    quote_a: lo.id.clone(),
                    quote_b: hi.id.clone(),
                    similarity: s,
                });
            }
        }
    }
    out.sort_by(|x, y| (&x.quote_a, &x.quote_b).cmp(&(&y.quote_a, &y.quote_b)));
    Ok(out)
}

/// Dense pairwise similarities over a fixed quote list.
#[derive(Debug, Clone)]
pub struct SimilarityMatrix {
    ids: Vec<String>,
    index: BTreeMap<String, usize>,
    values: Vec<Vec<f64>>,
}

impl SimilarityMatrix {
    /// Computes every row, fanning rows out per `exec`.
    pub fn compute(quotes: &[&Quote], store: &EmbeddingStore, exec: Execution) -> Result<Self, SemanticError> {
        let rows = exec.map_indexed(quotes.len(), |i| {
            quotes
                .iter()
                .map(|q| quote_similarity(quotes[i], q, store))
                .collect::<Result<Vec<f64>, _>>()
        });
        let values = rows.into_iter().collect::<Result<Vec<_>, _>>()?;
        let ids: Vec<String> = quotes.iter().map(|q| q.id.clone()).collect();
        let index = ids.iter().enumerate().map(|(i, id)| (id.clone(), i)).collect();
        Ok(SimilarityMatrix { ids, index, values })
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn get(&self, a: &str, b: &str) -> Option<f64> {
        Some(self.values[*self.index.get(a)?][*self.index.get(b)?])
    }
}
