use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "aicnet", version, about = "Joint attention, interaction and creation networks for annotation discourse")]
pub struct Cli {
    /// Run every stage single-threaded.
    #[arg(long, global = true)]
    pub sequential: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Load a corpus and report every validation error.
    Validate(CorpusArgs),
    /// Posts, replies and average words per post for each reading.
    Stats(StatsArgs),
    /// Build one network of one reading and export it.
    Build(BuildArgs),
    /// Node-level and network-level measures.
    Metrics(MetricsArgs),
    /// Measures of two readings side by side.
    Compare(CompareArgs),
    /// Generate a synthetic corpus with planted networks.
    Synth(SynthArgs),
}

#[derive(Debug, Args)]
pub struct CorpusArgs {
    /// Corpus file (.jsonl or .csv).
    pub corpus: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TableFormat {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    pub corpus: PathBuf,
    /// Restrict to one reading.
    #[arg(long)]
    pub reading: Option<String>,
    #[arg(long, value_enum, default_value_t = TableFormat::Csv)]
    pub format: TableFormat,
    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Embedder {
    /// Precomputed vectors from --embeddings.
    File,
    /// Deterministic character n-gram hashing.
    Hash,
}

#[derive(Debug, Clone, Args)]
pub struct PipelineArgs {
    /// Similarity threshold for joint quotes.
    #[arg(long, default_value_t = 0.8)]
    pub threshold: f64,
    /// Minimum reading-wide count for a noun lemma.
    #[arg(long = "min-freq", default_value_t = 5, value_parser = clap::value_parser!(u64).range(1..))]
    pub min_freq: u64,
    /// Number of lowest-scoring lemmas to discard.
    #[arg(long = "drop-lowest", default_value_t = 5)]
    pub drop_lowest: usize,
    /// Number of top (word, document) pairs kept.
    #[arg(long = "top-words", default_value_t = 70, value_parser = clap::value_parser!(u64).range(1..))]
    pub top_words: u64,
    /// Quote embeddings (JSONL or binary).
    #[arg(long)]
    pub embeddings: Option<PathBuf>,
    /// Embedding source; defaults to `file` when --embeddings is given, else `hash`.
    #[arg(long, value_enum)]
    pub embedder: Option<Embedder>,
    /// Dimension of the hashing embedder.
    #[arg(long = "hash-dim", default_value_t = 256)]
    pub hash_dim: usize,
    /// Stopword list, one term per line; replaces the built-in list.
    #[arg(long)]
    pub stopwords: Option<PathBuf>,
    /// Noun lexicon, one term per line; replaces the built-in list.
    #[arg(long = "noun-lexicon")]
    pub noun_lexicon: Option<PathBuf>,
    /// Include every corpus author as a node, not only those active in the reading.
    #[arg(long)]
    pub roster: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Network {
    An,
    In,
    Cn,
}

#[derive(Debug, Args)]
pub struct BuildArgs {
    pub corpus: PathBuf,
    #[arg(long)]
    pub reading: String,
    #[arg(long, value_enum)]
    pub network: Network,
    /// Comma-separated subset of graphml, dot, csv, json.
    #[arg(long, default_value = "graphml")]
    pub format: String,
    /// Output directory.
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
    #[command(flatten)]
    pub pipeline: PipelineArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Level {
    Node,
    Network,
    All,
}

#[derive(Debug, Args)]
pub struct MetricsArgs {
    pub corpus: PathBuf,
    #[arg(long, value_enum, default_value_t = Level::All)]
    pub level: Level,
    /// Restrict to one reading.
    #[arg(long)]
    pub reading: Option<String>,
    #[arg(long, value_enum, default_value_t = TableFormat::Csv)]
    pub format: TableFormat,
    /// Output directory; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub pipeline: PipelineArgs,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    pub corpus: PathBuf,
    pub reading_a: String,
    pub reading_b: String,
    #[arg(long, value_enum, default_value_t = TableFormat::Csv)]
    pub format: TableFormat,
    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub pipeline: PipelineArgs,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    #[arg(long, default_value_t = 13, value_parser = clap::value_parser!(u64).range(2..))]
    pub authors: u64,
    /// Distinct quote texts.
    #[arg(long, default_value_t = 12, value_parser = clap::value_parser!(u64).range(1..))]
    pub quotes: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Full generator parameters as JSON; overrides the structural flags.
    #[arg(long)]
    pub params: Option<PathBuf>,
    #[arg(long, default_value_t = 0.8)]
    pub threshold: f64,
    #[arg(long = "min-freq", default_value_t = 5, value_parser = clap::value_parser!(u64).range(1..))]
    pub min_freq: u64,
    #[arg(long = "drop-lowest", default_value_t = 5)]
    pub drop_lowest: usize,
    #[arg(long = "top-words", default_value_t = 70, value_parser = clap::value_parser!(u64).range(1..))]
    pub top_words: u64,
    /// Output directory.
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}
