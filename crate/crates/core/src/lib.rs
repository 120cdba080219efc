//! Joint attention, interaction and creation (AIC) networks for threaded
//! annotation discourse.
//!
//! A [`corpus::Corpus`] of readings, quotes, annotations and replies is turned
//! into three learner–learner networks per reading:
//!
//! - **AN** joins learners whose highlighted quotes are identical or
//!   semantically similar ([`networks::build_an`]);
//! - **IN** joins learners who replied to each other ([`networks::build_in`]);
//! - **CN** joins learners who share tf-idf-selected nouns
//!   ([`networks::build_cn_bipartite`], [`graph::project`]).
//!
//! [`metrics`] computes transitivity, degree centralization, closeness and
//! betweenness on those graphs, and [`synth`] generates corpora with planted
//! structure to check the whole pipeline against.

pub mod corpus;
pub mod exec;
pub mod export;
pub mod graph;
pub mod metrics;
pub mod networks;
pub mod report;
pub mod semantic;
pub mod synth;
pub mod textpipe;

pub use corpus::{Artifact, ArtifactKind, Corpus, CorpusError, CorpusFormat, Quote, Reading};
pub use exec::Execution;
pub use graph::{BipartiteGraph, WeightedGraph};
pub use metrics::{MetricsError, NetworkMetricsRow, NodeMetricsRow, PathMode};
pub use networks::{NodeScope, PipelineConfig, ReadingNetworks};
pub use semantic::{EmbeddingStore, SemanticError};
pub use synth::{GroundTruth, SynthError, SynthParams, VerificationReport};
pub use textpipe::{Analyzer, TextError, WordSelectionParams};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error(transparent)]
    Corpus(#[from] CorpusError),
    #[error(transparent)]
    Text(#[from] TextError),
    #[error(transparent)]
    Semantic(#[from] SemanticError),
    #[error(transparent)]
    Metrics(#[from] MetricsError),
    #[error(transparent)]
    Synth(#[from] SynthError),
    #[error(transparent)]
    Export(#[from] export::ExportError),
}
