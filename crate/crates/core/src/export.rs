//! Graph file exporters and the parsers used to read them back.
//!
//! Every format carries edge weights at full precision and flags isolated
//! nodes with `isolated=true`. Node and edge order follow id order, so a
//! graph always serializes to the same bytes.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::str::FromStr;

use quick_xml::events::Event;
use quick_xml::Reader;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{EdgeRecord, WeightedGraph};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ExportError {
    #[error("graphml: {0}")]
    GraphMl(String),
    #[error("dot: line {line}: {reason}")]
    Dot { line: usize, reason: String },
    #[error("unknown graph format {0:?}")]
    UnknownFormat(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GraphFormat {
    GraphMl,
    Dot,
    Csv,
    Json,
}

impl GraphFormat {
    pub const ALL: [GraphFormat; 4] = [GraphFormat::GraphMl, GraphFormat::Dot, GraphFormat::Csv, GraphFormat::Json];

    pub fn extension(self) -> &'static str {
        match self {
            GraphFormat::GraphMl => "graphml",
            GraphFormat::Dot => "dot",
            GraphFormat::Csv => "csv",
            GraphFormat::Json => "json",
        }
    }
}

impl FromStr for GraphFormat {
    type Err = ExportError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "graphml" => Ok(GraphFormat::GraphMl),
            "dot" => Ok(GraphFormat::Dot),
            "csv" => Ok(GraphFormat::Csv),
            "json" => Ok(GraphFormat::Json),
            _ => Err(ExportError::UnknownFormat(s.to_string())),
        }
    }
}

/// Renders a graph in `format`. `name` becomes the graph id.
pub fn render(g: &WeightedGraph, name: &str, format: GraphFormat) -> String {
    match format {
        GraphFormat::GraphMl => to_graphml(g, name),
        GraphFormat::Dot => to_dot(g, name),
        GraphFormat::Csv => to_csv(g),
        GraphFormat::Json => to_json(g, name),
    }
}

fn xml_escape(s: &str) -> String {
    quick_xml::escape::escape(s).into_owned()
}

pub fn to_graphml(g: &WeightedGraph, name: &str) -> String {
    let isolates = g.isolates();
    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    out.push_str("<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n");
    out.push_str("  <key id=\"isolated\" for=\"node\" attr.name=\"isolated\" attr.type=\"boolean\"/>\n");
    out.push_str("  <key id=\"weight\" for=\"edge\" attr.name=\"weight\" attr.type=\"double\"/>\n");
    let _ = writeln!(out, "  <graph id=\"{}\" edgedefault=\"undirected\">", xml_escape(name));
    for n in g.nodes() {
        let _ = writeln!(
            out,
            "    <node id=\"{}\"><data key=\"isolated\">{}</data></node>",
            xml_escape(n),
            isolates.contains(n)
        );
    }
    for (u, v, w) in g.edges() {
        let _ = writeln!(
            out,
            "    <edge source=\"{}\" target=\"{}\"><data key=\"weight\">{w}</data></edge>",
            xml_escape(u),
            xml_escape(v)
        );
    }
    out.push_str("  </graph>\n</graphml>\n");
    out
}

fn attr(e: &quick_xml::events::BytesStart<'_>, name: &[u8]) -> Result<Option<String>, ExportError> {
    for a in e.attributes() {
        let a = a.map_err(|err| ExportError::GraphMl(err.to_string()))?;
        if a.key.as_ref() == name {
            let v = a.unescape_value().map_err(|err| ExportError::GraphMl(err.to_string()))?;
            return Ok(Some(v.into_owned()));
        }
    }
    Ok(None)
}

/// Reads back a GraphML document written by [`to_graphml`].
pub fn parse_graphml(text: &str) -> Result<WeightedGraph, ExportError> {
    let mut reader = Reader::from_str(text);
    reader.config_mut().trim_text(true);
    let mut g = WeightedGraph::new();
    let mut pending_edge: Option<(String, String)> = None;
    let mut data_key: Option<String> = None;
    let mut edge_weight: Option<f64> = None;
    loop {
        match reader.read_event() {
            Err(e) => return Err(ExportError::GraphMl(e.to_string())),
            Ok(Event::Eof) => break,
            Ok(Event::Start(e)) | Ok(Event::Empty(e)) => match e.name().as_ref() {
                b"node" => {
                    let id = attr(&e, b"id")?.ok_or_else(|| ExportError::GraphMl("node without id".into()))?;
                    g.add_node(id);
                }
                b"edge" => {
                    let s = attr(&e, b"source")?.ok_or_else(|| ExportError::GraphMl("edge without source".into()))?;
                    let t = attr(&e, b"target")?.ok_or_else(|| ExportError::GraphMl("edge without target".into()))?;
                    pending_edge = Some((s, t));
                    edge_weight = None;
                }
                b"data" => data_key = attr(&e, b"key")?,
                _ => {}
            },
            Ok(Event::Text(t)) => {
                if pending_edge.is_some() && data_key.as_deref() == Some("weight") {
                    let raw = t.unescape().map_err(|e| ExportError::GraphMl(e.to_string()))?;
                    edge_weight = Some(
                        raw.trim()
                            .parse()
                            .map_err(|_| ExportError::GraphMl(format!("bad weight {raw:?}")))?,
                    );
                }
            }
            Ok(Event::End(e)) => match e.name().as_ref() {
                b"data" => data_key = None,
                b"edge" => {
                    let (s, t) = pending_edge.take().expect("edge start seen");
                    let w = edge_weight.take().unwrap_or(1.0);
                    g.set_weight(&s, &t, w);
                }
                _ => {}
            },
            Ok(_) => {}
        }
    }
    Ok(g)
}

fn dot_quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

pub fn to_dot(g: &WeightedGraph, name: &str) -> String {
    let isolates = g.isolates();
    let mut out = String::new();
    let _ = writeln!(out, "graph {} {{", dot_quote(name));
    for n in g.nodes() {
        let _ = writeln!(out, "  {} [isolated={}];", dot_quote(n), isolates.contains(n));
    }
    for (u, v, w) in g.edges() {
        let _ = writeln!(out, "  {} -- {} [weight={w}];", dot_quote(u), dot_quote(v));
    }
    out.push_str("}\n");
    out
}

/// Splits off one quoted or bare DOT identifier.
fn dot_ident(s: &str) -> Option<(String, &str)> {
    let s = s.trim_start();
    if let Some(rest) = s.strip_prefix('"') {
        let mut out = String::new();
        let mut chars = rest.char_indices();
        while let Some((i, c)) = chars.next() {
            match c {
                '\\' => out.push(chars.next()?.1),
                '"' => return Some((out, &rest[i + 1..])),
                _ => out.push(c),
            }
        }
        None
    } else {
        let end = s
            .find(|c: char| !(c.is_alphanumeric() || c == '_' || c == '.' || c == '-'))
            .unwrap_or(s.len());
        (end > 0).then(|| (s[..end].to_string(), &s[end..]))
    }
}

fn dot_weight(attrs: &str) -> Option<f64> {
    attrs
        .trim()
        .trim_start_matches('[')
        .trim_end_matches(';')
        .trim_end_matches(']')
        .split(',')
        .find_map(|kv| {
            let (k, v) = kv.split_once('=')?;
            (k.trim() == "weight").then(|| v.trim().trim_matches('"').parse().ok())?
        })
}

/// Reads back the DOT subset written by [`to_dot`]: one statement per line.
pub fn parse_dot(text: &str) -> Result<WeightedGraph, ExportError> {
    let mut g = WeightedGraph::new();
    for (i, line) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = line.trim();
        if line.is_empty() || line == "}" || line.starts_with("graph ") || line.starts_with("//") {
            continue;
        }
        let err = |reason: &str| ExportError::Dot {
            line: lineno,
            reason: reason.to_string(),
        };
        let (first, rest) = dot_ident(line).ok_or_else(|| err("expected node id"))?;
        let rest = rest.trim_start();
        if let Some(after) = rest.strip_prefix("--") {
            let (second, attrs) = dot_ident(after).ok_or_else(|| err("expected edge target"))?;
            let w = dot_weight(attrs).ok_or_else(|| err("edge without weight"))?;
            g.set_weight(&first, &second, w);
        } else {
            g.add_node(first);
        }
    }
    Ok(g)
}

/// Edge list with a header; isolated nodes appear as rows with empty target.
pub fn to_csv(g: &WeightedGraph) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    let _ = w.write_record(["source", "target", "weight"]);
    for (u, v, wt) in g.edges() {
        let _ = w.write_record([u, v, &wt.to_string()]);
    }
    for n in g.isolates() {
        let _ = w.write_record([n.as_str(), "", ""]);
    }
    String::from_utf8(w.into_inner().expect("in-memory writer")).expect("utf-8 input")
}

#[derive(Serialize, Deserialize)]
struct JsonNode {
    id: String,
    isolated: bool,
}

#[derive(Serialize, Deserialize)]
struct JsonGraph {
    name: String,
    directed: bool,
    nodes: Vec<JsonNode>,
    edges: Vec<EdgeRecord>,
}

pub fn to_json(g: &WeightedGraph, name: &str) -> String {
    let isolates: BTreeSet<String> = g.isolates();
    let doc = JsonGraph {
        name: name.to_string(),
        directed: false,
        nodes: g
            .nodes()
            .iter()
            .map(|n| JsonNode {
                id: n.clone(),
                isolated: isolates.contains(n),
            })
            .collect(),
        edges: g
            .edges()
            .map(|(u, v, w)| EdgeRecord {
                source: u.into(),
                target: v.into(),
                weight: w,
            })
            .collect(),
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("plain data serializes");
    s.push('\n');
    s
}

pub fn parse_json(text: &str) -> Result<WeightedGraph, serde_json::Error> {
    let doc: JsonGraph = serde_json::from_str(text)?;
    let mut g = WeightedGraph::with_nodes(doc.nodes.into_iter().map(|n| n.id));
    for e in doc.edges {
        g.set_weight(&e.source, &e.target, e.weight);
    }
    Ok(g)
}
