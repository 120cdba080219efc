//! Tabular output: descriptive statistics, node-level and network-level
//! measures, and two-reading comparisons.
//!
//! CSV renderings round for display and print `na` for missing values.
//! JSON renderings keep full precision and use `null`.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::corpus::StatsTable;
use crate::metrics::{network_row, node_report, NetworkMetricsRow, NodeMetricsRow};
use crate::networks::ReadingNetworks;
use crate::Execution;

pub const NA: &str = "na";
pub const METRIC_DECIMALS: usize = 2;
pub const STATS_DECIMALS: usize = 1;

/// Fixed-point display; `na` for `None`, and no negative zero.
pub fn fmt_opt(value: Option<f64>, decimals: usize) -> String {
    match value {
        None => NA.to_string(),
        Some(v) => {
            let s = format!("{v:.decimals$}");
            if s.starts_with('-') && s[1..].chars().all(|c| c == '0' || c == '.') {
                s[1..].to_string()
            } else {
                s
            }
        }
    }
}

fn csv_string(rows: &[Vec<String>]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.write_record(r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory writer")).expect("utf-8 cells")
}

fn json_string<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("plain data serializes");
    s.push('\n');
    s
}

/// Readings as columns; Posts, Replies and Average words per post as rows,
/// with population mean and SD across readings.
pub fn stats_csv(table: &StatsTable) -> String {
    let mut header = vec!["Reading".to_string()];
    header.extend(table.rows.iter().map(|r| r.reading_id.clone()));
    header.push("Mean".into());
    header.push("SD".into());

    let ms = |m: &Option<crate::corpus::MeanSd>| -> [String; 2] {
        match m {
            Some(m) => [fmt_opt(Some(m.mean), STATS_DECIMALS), fmt_opt(Some(m.sd), STATS_DECIMALS)],
            None => [NA.into(), NA.into()],
        }
    };
    let mut posts = vec!["Posts".to_string()];
    posts.extend(table.rows.iter().map(|r| r.posts.to_string()));
    posts.extend(ms(&table.posts));
    let mut replies = vec!["Replies".to_string()];
    replies.extend(table.rows.iter().map(|r| r.replies.to_string()));
    replies.extend(ms(&table.replies));
    let mut words = vec!["Average words per post".to_string()];
    words.extend(table.rows.iter().map(|r| fmt_opt(r.avg_words_per_post, STATS_DECIMALS)));
    words.extend(ms(&table.avg_words));
    csv_string(&[header, posts, replies, words])
}

pub fn stats_json(table: &StatsTable) -> String {
    json_string(table)
}

/// Measures as rows, authors as columns.
pub fn node_table_csv(rows: &[NodeMetricsRow]) -> String {
    let mut header = vec!["Measure".to_string()];
    header.extend(rows.iter().map(|r| r.author_id.clone()));
    let line = |name: &str, pick: fn(&NodeMetricsRow) -> Option<f64>| -> Vec<String> {
        let mut v = vec![name.to_string()];
        v.extend(rows.iter().map(|r| fmt_opt(pick(r), METRIC_DECIMALS)));
        v
    };
    csv_string(&[
        header,
        line("AN Closeness", |r| r.an_closeness),
        line("IN Betweenness", |r| r.in_betweenness),
        line("CN Betweenness", |r| r.cn_betweenness),
    ])
}

#[derive(Serialize)]
struct NodeTableJson<'a> {
    reading_id: &'a str,
    rows: &'a [NodeMetricsRow],
}

pub fn node_table_json(reading_id: &str, rows: &[NodeMetricsRow]) -> String {
    json_string(&NodeTableJson { reading_id, rows })
}

/// One row per reading.
pub fn network_table_csv(rows: &[NetworkMetricsRow]) -> String {
    let mut out = vec![vec![
        "Reading".to_string(),
        "AN transitivity".to_string(),
        "IN centralization".to_string(),
        "CN transitivity".to_string(),
    ]];
    for r in rows {
        out.push(vec![
            r.reading_id.clone(),
            fmt_opt(r.an_transitivity, METRIC_DECIMALS),
            fmt_opt(r.in_centralization, METRIC_DECIMALS),
            fmt_opt(r.cn_transitivity, METRIC_DECIMALS),
        ]);
    }
    csv_string(&out)
}

pub fn network_table_json(rows: &[NetworkMetricsRow]) -> String {
    json_string(&rows)
}

/// Value in each reading and their difference (`b − a`).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Delta {
    pub a: Option<f64>,
    pub b: Option<f64>,
    pub delta: Option<f64>,
}

impl Delta {
    fn new(a: Option<f64>, b: Option<f64>) -> Self {
        Delta {
            a,
            b,
            delta: a.zip(b).map(|(x, y)| y - x),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NodeDelta {
    pub author_id: String,
    pub an_closeness: Delta,
    pub in_betweenness: Delta,
    pub cn_betweenness: Delta,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompareReport {
    pub reading_a: String,
    pub reading_b: String,
    pub an_transitivity: Delta,
    pub in_centralization: Delta,
    pub cn_transitivity: Delta,
    pub nodes: Vec<NodeDelta>,
    pub warnings: Vec<String>,
}

/// Side-by-side measures of two readings. Node rows cover the union of both
/// readings' authors.
pub fn compare(a: &ReadingNetworks, b: &ReadingNetworks, exec: Execution) -> CompareReport {
    let roster_a = a.an.nodes().clone();
    let roster_b = b.an.nodes().clone();
    let union: BTreeSet<String> = roster_a.union(&roster_b).cloned().collect();
    let mut warnings = Vec::new();
    if roster_a.is_disjoint(&roster_b) {
        warnings.push(format!(
            "readings {} and {} share no authors; node deltas are undefined",
            a.reading_id, b.reading_id
        ));
    }
    let na = node_report(&a.an, &a.in_, &a.cn, &union, exec);
    let nb = node_report(&b.an, &b.in_, &b.cn, &union, exec);
    let nodes = na
        .iter()
        .zip(&nb)
        .map(|(x, y)| NodeDelta {
            author_id: x.author_id.clone(),
            an_closeness: Delta::new(x.an_closeness, y.an_closeness),
            in_betweenness: Delta::new(x.in_betweenness, y.in_betweenness),
            cn_betweenness: Delta::new(x.cn_betweenness, y.cn_betweenness),
        })
        .collect();
    let ra = network_row(&a.reading_id, &a.an, &a.in_, &a.cn);
    let rb = network_row(&b.reading_id, &b.an, &b.in_, &b.cn);
    CompareReport {
        reading_a: a.reading_id.clone(),
        reading_b: b.reading_id.clone(),
        an_transitivity: Delta::new(ra.an_transitivity, rb.an_transitivity),
        in_centralization: Delta::new(ra.in_centralization, rb.in_centralization),
        cn_transitivity: Delta::new(ra.cn_transitivity, rb.cn_transitivity),
        nodes,
        warnings,
    }
}

pub fn compare_csv(report: &CompareReport) -> String {
    let mut rows = vec![vec![
        "Scope".to_string(),
        "Measure".to_string(),
        report.reading_a.clone(),
        report.reading_b.clone(),
        "Delta".to_string(),
    ]];
    let mut push = |scope: &str, measure: &str, d: &Delta| {
        rows.push(vec![
            scope.to_string(),
            measure.to_string(),
            fmt_opt(d.a, METRIC_DECIMALS),
            fmt_opt(d.b, METRIC_DECIMALS),
            fmt_opt(d.delta, METRIC_DECIMALS),
        ]);
    };
    push("network", "AN transitivity", &report.an_transitivity);
    push("network", "IN centralization", &report.in_centralization);
    push("network", "CN transitivity", &report.cn_transitivity);
    for n in &report.nodes {
        push(&n.author_id, "AN Closeness", &n.an_closeness);
        push(&n.author_id, "IN Betweenness", &n.in_betweenness);
        push(&n.author_id, "CN Betweenness", &n.cn_betweenness);
    }
    csv_string(&rows)
}

pub fn compare_json(report: &CompareReport) -> String {
    json_string(report)
}
