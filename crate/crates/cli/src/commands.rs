use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};

use aicnet_core::corpus::{descriptive_stats, load_corpus_report, write_jsonl};
use aicnet_core::export::{render, GraphFormat};
use aicnet_core::metrics::{network_report, node_report, NetworkMetricsRow, NodeMetricsRow};
use aicnet_core::networks::{build_all, build_an_with, build_in_with, bipartite_from_selection};
use aicnet_core::report;
use aicnet_core::semantic::{load_embeddings, write_embeddings_jsonl};
use aicnet_core::synth::{generate, verify};
use aicnet_core::textpipe::{default_nouns, default_stopwords, read_word_list, select_cn_words_traced, LexiconTagger};
use aicnet_core::{
    Analyzer, Corpus, CorpusFormat, EmbeddingStore, Execution, NodeScope, PipelineConfig, ReadingNetworks, SemanticError,
    SynthParams, WordSelectionParams,
};
use serde::Serialize;

use crate::args::{
    BuildArgs, Cli, Command, CompareArgs, CorpusArgs, Embedder, Level, MetricsArgs, Network, PipelineArgs, StatsArgs,
    SynthArgs, TableFormat,
};

/// How a command failed; decides the exit code.
#[derive(Debug)]
pub enum Failure {
    /// Bad input: missing files, malformed records, infeasible parameters.
    Input(String),
    /// A result broke an invariant the pipeline guarantees.
    Internal(String),
}

impl Failure {
    pub fn message(&self) -> &str {
        match self {
            Failure::Input(m) | Failure::Internal(m) => m,
        }
    }
}

impl From<aicnet_core::Error> for Failure {
    fn from(e: aicnet_core::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

type Outcome<T = ()> = Result<T, Failure>;

fn input(e: impl ToString) -> Failure {
    Failure::Input(e.to_string())
}

pub fn run(cli: Cli) -> Outcome {
    let exec = if cli.sequential {
        Execution::Sequential
    } else {
        Execution::default()
    };
    match cli.command {
        Command::Validate(a) => validate(a),
        Command::Stats(a) => stats(a),
        Command::Build(a) => build(a, exec),
        Command::Metrics(a) => metrics(a, exec),
        Command::Compare(a) => compare(a, exec),
        Command::Synth(a) => synth(a),
    }
}

fn load(path: &Path) -> Outcome<Corpus> {
    load_corpus_report(path, CorpusFormat::from_path(path)).map_err(|errors| {
        let lines: Vec<String> = errors.iter().map(|e| format!("  {e}")).collect();
        Failure::Input(format!(
            "{}: {} error(s)\n{}",
            path.display(),
            errors.len(),
            lines.join("\n")
        ))
    })
}

/// Writes `content` to `path`, or to stdout when `path` is `None`.
fn emit(path: Option<&Path>, content: &str) -> Outcome {
    match path {
        Some(p) => write_file(p, content.as_bytes()),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn write_file(path: &Path, bytes: &[u8]) -> Outcome {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| input(format!("{}: {e}", dir.display())))?;
    }
    fs::write(path, bytes).map_err(|e| input(format!("{}: {e}", path.display())))
}

fn validate(a: CorpusArgs) -> Outcome {
    let corpus = load(&a.corpus)?;
    println!(
        "ok: {} reading(s), {} author(s), {} artifact(s)",
        corpus.readings.len(),
        corpus.authors.len(),
        corpus.artifact_count()
    );
    Ok(())
}

fn stats(a: StatsArgs) -> Outcome {
    let corpus = load(&a.corpus)?;
    let table = descriptive_stats(&corpus, a.reading.as_deref()).map_err(input)?;
    let text = match a.format {
        TableFormat::Csv => report::stats_csv(&table),
        TableFormat::Json => report::stats_json(&table),
    };
    emit(a.out.as_deref(), &text)
}

struct Pipeline {
    config: PipelineConfig,
    analyzer: Analyzer,
    store: EmbeddingStore,
}

fn pipeline(p: &PipelineArgs, corpus: &Corpus, exec: Execution) -> Outcome<Pipeline> {
    let words = WordSelectionParams {
        min_frequency: p.min_freq as usize,
        drop_lowest: p.drop_lowest,
        top_k: p.top_words as usize,
        ..Default::default()
    };
    words.validate().map_err(input)?;
    if !(p.threshold > 0.0 && p.threshold <= 1.0) {
        return Err(input(SemanticError::InvalidThreshold(p.threshold)));
    }
    let config = PipelineConfig {
        threshold: p.threshold,
        words,
        scope: if p.roster { NodeScope::Roster } else { NodeScope::Active },
        exec,
    };

    let nouns = match &p.noun_lexicon {
        Some(path) => read_word_list(path).map_err(input)?,
        None => default_nouns().clone(),
    };
    let stopwords = match &p.stopwords {
        Some(path) => read_word_list(path).map_err(input)?,
        None => default_stopwords().clone(),
    };
    let analyzer = Analyzer::new(Box::new(LexiconTagger::new(nouns, stopwords)));

    let embedder = p
        .embedder
        .unwrap_or(if p.embeddings.is_some() { Embedder::File } else { Embedder::Hash });
    let store = match (embedder, &p.embeddings) {
        (Embedder::Hash, _) => EmbeddingStore::hashed(corpus, p.hash_dim).map_err(input)?,
        (Embedder::File, Some(path)) => {
            let loaded = load_embeddings(path, Some(corpus)).map_err(|e| input(format!("{}: {e}", path.display())))?;
            for id in &loaded.orphan_warnings {
                eprintln!("warning: embedding for unknown quote {id}");
            }
            loaded.store
        }
        // No vectors at all: building AN reports the first missing quote.
        (Embedder::File, None) => EmbeddingStore::new(0),
    };
    Ok(Pipeline { config, analyzer, store })
}

fn parse_formats(list: &str) -> Outcome<BTreeSet<GraphFormat>> {
    let formats = list
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<GraphFormat>().map_err(input))
        .collect::<Outcome<BTreeSet<_>>>()?;
    if formats.is_empty() {
        return Err(input("--format needs at least one of graphml, dot, csv, json"));
    }
    Ok(formats)
}

fn build(a: BuildArgs, exec: Execution) -> Outcome {
    let formats = parse_formats(&a.format)?;
    let corpus = load(&a.corpus)?;
    let reading = corpus.reading(&a.reading).map_err(input)?;
    let p = pipeline(&a.pipeline, &corpus, exec)?;
    let cfg = &p.config;
    let (graph, tag) = match a.network {
        Network::An => (
            build_an_with(reading, &corpus, &p.store, cfg.threshold, cfg.scope, cfg.exec)?,
            "an",
        ),
        Network::In => (build_in_with(reading, &corpus, cfg.scope), "in"),
        Network::Cn => {
            let trace = select_cn_words_traced(reading, &cfg.words, &p.analyzer, cfg.exec).map_err(input)?;
            let authors = match cfg.scope {
                NodeScope::Active => reading.active_authors(),
                NodeScope::Roster => corpus.authors.clone(),
            };
            (bipartite_from_selection(authors, &trace.selected).project(), "cn")
        }
    };
    let name = format!("{}_{tag}", reading.id);
    for f in formats {
        let path = a.out.join(format!("{name}.{}", f.extension()));
        write_file(&path, render(&graph, &name, f).as_bytes())?;
        eprintln!("wrote {}", path.display());
    }
    Ok(())
}

fn check_unit(label: &str, v: Option<f64>) -> Outcome {
    match v {
        Some(x) if !(0.0..=1.0 + 1e-12).contains(&x) => Err(Failure::Internal(format!("{label} = {x} lies outside [0, 1]"))),
        _ => Ok(()),
    }
}

fn check_node_rows(reading: &str, rows: &[NodeMetricsRow]) -> Outcome {
    for r in rows {
        check_unit(&format!("{reading}/{} AN closeness", r.author_id), r.an_closeness)?;
        check_unit(&format!("{reading}/{} IN betweenness", r.author_id), r.in_betweenness)?;
        check_unit(&format!("{reading}/{} CN betweenness", r.author_id), r.cn_betweenness)?;
    }
    Ok(())
}

fn check_network_rows(rows: &[NetworkMetricsRow]) -> Outcome {
    for r in rows {
        check_unit(&format!("{} AN transitivity", r.reading_id), r.an_transitivity)?;
        check_unit(&format!("{} IN centralization", r.reading_id), r.in_centralization)?;
        check_unit(&format!("{} CN transitivity", r.reading_id), r.cn_transitivity)?;
    }
    Ok(())
}

fn build_readings(corpus: &Corpus, only: Option<&str>, p: &Pipeline) -> Outcome<Vec<ReadingNetworks>> {
    let readings = match only {
        Some(id) => vec![corpus.reading(id).map_err(input)?],
        None => corpus.readings.values().collect(),
    };
    p.config
        .exec
        .map_slice(&readings, |r| build_all(r, corpus, &p.store, &p.analyzer, &p.config))
        .into_iter()
        .map(|r| r.map_err(Failure::from))
        .collect()
}

#[derive(Serialize)]
struct NodeTable<'a> {
    reading_id: &'a str,
    rows: &'a [NodeMetricsRow],
}

#[derive(Serialize)]
struct MetricsJson<'a> {
    #[serde(skip_serializing_if = "Option::is_none")]
    nodes: Option<Vec<NodeTable<'a>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    networks: Option<&'a [NetworkMetricsRow]>,
}

fn metrics(a: MetricsArgs, exec: Execution) -> Outcome {
    let corpus = load(&a.corpus)?;
    let p = pipeline(&a.pipeline, &corpus, exec)?;
    let built = build_readings(&corpus, a.reading.as_deref(), &p)?;

    let want_nodes = matches!(a.level, Level::Node | Level::All);
    let want_networks = matches!(a.level, Level::Network | Level::All);

    let node_tables: Vec<(String, Vec<NodeMetricsRow>)> = if want_nodes {
        built
            .iter()
            .map(|n| (n.reading_id.clone(), node_report(&n.an, &n.in_, &n.cn, &corpus.authors, exec)))
            .collect()
    } else {
        Vec::new()
    };
    for (id, rows) in &node_tables {
        check_node_rows(id, rows)?;
    }
    let network_rows = if want_networks {
        network_report(built.iter().map(|n| (n.reading_id.as_str(), &n.an, &n.in_, &n.cn)))
    } else {
        Vec::new()
    };
    check_network_rows(&network_rows)?;

    match (a.format, &a.out) {
        (TableFormat::Json, None) => {
            let doc = MetricsJson {
                nodes: want_nodes.then(|| {
                    node_tables
                        .iter()
                        .map(|(id, rows)| NodeTable { reading_id: id, rows })
                        .collect()
                }),
                networks: want_networks.then_some(network_rows.as_slice()),
            };
            let mut s = serde_json::to_string_pretty(&doc).map_err(|e| Failure::Internal(e.to_string()))?;
            s.push('\n');
            emit(None, &s)
        }
        (TableFormat::Csv, None) => {
            let mut sections = Vec::new();
            for (id, rows) in &node_tables {
                sections.push(format!("# {id}\n{}", report::node_table_csv(rows)));
            }
            if want_networks {
                let table = report::network_table_csv(&network_rows);
                sections.push(if want_nodes { format!("# networks\n{table}") } else { table });
            }
            if !want_networks && node_tables.len() == 1 {
                // A lone table needs no section marker.
                return emit(None, &report::node_table_csv(&node_tables[0].1));
            }
            emit(None, &sections.join("\n"))
        }
        (format, Some(dir)) => {
            let ext = match format {
                TableFormat::Csv => "csv",
                TableFormat::Json => "json",
            };
            for (id, rows) in &node_tables {
                let text = match format {
                    TableFormat::Csv => report::node_table_csv(rows),
                    TableFormat::Json => report::node_table_json(id, rows),
                };
                write_file(&dir.join(format!("nodes_{id}.{ext}")), text.as_bytes())?;
            }
            if want_networks {
                let text = match format {
                    TableFormat::Csv => report::network_table_csv(&network_rows),
                    TableFormat::Json => report::network_table_json(&network_rows),
                };
                write_file(&dir.join(format!("networks.{ext}")), text.as_bytes())?;
            }
            Ok(())
        }
    }
}

fn compare(a: CompareArgs, exec: Execution) -> Outcome {
    let corpus = load(&a.corpus)?;
    let ra = corpus.reading(&a.reading_a).map_err(input)?;
    let rb = corpus.reading(&a.reading_b).map_err(input)?;
    let p = pipeline(&a.pipeline, &corpus, exec)?;
    let na = build_all(ra, &corpus, &p.store, &p.analyzer, &p.config)?;
    let nb = build_all(rb, &corpus, &p.store, &p.analyzer, &p.config)?;
    let rep = report::compare(&na, &nb, exec);
    for w in &rep.warnings {
        eprintln!("warning: {w}");
    }
    let text = match a.format {
        TableFormat::Csv => report::compare_csv(&rep),
        TableFormat::Json => report::compare_json(&rep),
    };
    emit(a.out.as_deref(), &text)
}

fn synth(a: SynthArgs) -> Outcome {
    let params = match &a.params {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| input(format!("{}: {e}", path.display())))?;
            serde_json::from_str::<SynthParams>(&text).map_err(|e| input(format!("{}: {e}", path.display())))?
        }
        None => {
            let mut p = SynthParams::randomized(a.authors as usize, a.quotes as usize, a.seed);
            p.threshold = a.threshold;
            p.min_frequency = a.min_freq as usize;
            p.drop_lowest = a.drop_lowest;
            p.top_k = a.top_words as usize;
            p
        }
    };
    let (corpus, store, truth) = generate(&params).map_err(input)?;

    // The generator's own check: its corpus must rebuild to what it planted.
    let report = verify(&corpus, &store, &truth, &params.pipeline_config(), &Analyzer::default())?;
    if !report.passed() {
        let detail = serde_json::to_string(&report).unwrap_or_default();
        return Err(Failure::Internal(format!("generated corpus does not rebuild to its ground truth: {detail}")));
    }

    let mut corpus_bytes = Vec::new();
    write_jsonl(&corpus, &mut corpus_bytes).map_err(input)?;
    let mut embed_bytes = Vec::new();
    write_embeddings_jsonl(&store, &mut embed_bytes).map_err(input)?;
    let files: [(PathBuf, Vec<u8>); 4] = [
        (a.out.join("corpus.jsonl"), corpus_bytes),
        (a.out.join("embeddings.jsonl"), embed_bytes),
        (a.out.join("ground_truth.json"), pretty_json(&truth)?),
        (a.out.join("params.json"), pretty_json(&params)?),
    ];
    for (path, bytes) in &files {
        write_file(path, bytes)?;
        eprintln!("wrote {}", path.display());
    }
    Ok(())
}

fn pretty_json<T: Serialize>(value: &T) -> Outcome<Vec<u8>> {
    let mut v = serde_json::to_vec_pretty(value).map_err(|e| Failure::Internal(e.to_string()))?;
    v.push(b'\n');
    Ok(v)
}
