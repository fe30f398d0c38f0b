//! Keyword baseline and graph-vs-keyword retrieval comparison.

use alloc::collections::BTreeSet;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::corpus::DesignCaseDoc;
use crate::graph::GraphSnapshot;
use crate::search::{parse_query, retrieve, SearchError, SearchParams};

mod synth;

pub use synth::{generate_synthetic_corpus, SynthError, SynthParams, SynthQuery, SyntheticCorpus};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EvalError {
    #[error("no queries to evaluate")]
    NoQueries,
    #[error(transparent)]
    Search(#[from] SearchError),
}

/// True when `needle` occurs in `haystack` with non-alphanumeric characters
/// (or the text ends) on both sides. Both must already be lowercase.
fn contains_token(haystack: &str, needle: &str) -> bool {
    if needle.is_empty() {
        return false;
    }
    let mut from = 0;
    while let Some(pos) = haystack[from..].find(needle) {
        let start = from + pos;
        let end = start + needle.len();
        let before = haystack[..start].chars().next_back();
        let after = haystack[end..].chars().next();
        if !before.is_some_and(char::is_alphanumeric) && !after.is_some_and(char::is_alphanumeric) {
            return true;
        }
        from = start + haystack[start..].chars().next().map_or(1, char::len_utf8);
    }
    false
}

/// Plain AND keyword search: documents whose raw text contains every
/// whitespace-separated query token, case-insensitively, on token boundaries.
pub fn keyword_search(query_raw: &str, docs: &[DesignCaseDoc]) -> Vec<String> {
    let tokens: Vec<String> = query_raw
        .split_whitespace()
        .map(str::to_lowercase)
        .collect();
    if tokens.is_empty() {
        return Vec::new();
    }
    docs.iter()
        .filter(|d| {
            let text = d.full_text().to_lowercase();
            tokens.iter().all(|t| contains_token(&text, t))
        })
        .map(|d| d.id.clone())
        .collect()
}

/// One evaluated query.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KpiRow {
    pub query: String,
    pub keyword_count: usize,
    pub graph_direct_count: usize,
    pub graph_transitive_count: usize,
    /// Keyword results also found by the graph search.
    pub overlap_count: usize,
    /// `None` when the keyword baseline found nothing.
    pub uplift_pct: Option<f64>,
    /// Set on rows excluded from the average.
    pub flagged: bool,
}

impl KpiRow {
    pub fn graph_total(&self) -> usize {
        self.graph_direct_count + self.graph_transitive_count
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KpiReport {
    pub rows: Vec<KpiRow>,
    /// Mean uplift over unflagged rows; 0 when every row is flagged.
    pub average_uplift_pct: f64,
    /// Time to produce the evaluated snapshot, filled in by the caller.
    #[serde(default)]
    pub rebuild_seconds: f64,
}

impl KpiReport {
    pub fn eligible_rows(&self) -> impl Iterator<Item = &KpiRow> {
        self.rows.iter().filter(|r| !r.flagged)
    }
}

/// Percentage increase of `graph_total` over `keyword_count`.
pub fn uplift_pct(keyword_count: usize, graph_total: usize) -> Option<f64> {
    (keyword_count > 0)
        .then(|| 100.0 * (graph_total as f64 - keyword_count as f64) / keyword_count as f64)
}

/// Runs every query through the keyword baseline and the graph search and
/// compares result counts before any result limit is applied.
pub fn compare_kpi<S: AsRef<str>>(
    queries: &[S],
    docs: &[DesignCaseDoc],
    snap: &GraphSnapshot,
    params: &SearchParams,
) -> Result<KpiReport, EvalError> {
    if queries.is_empty() {
        return Err(EvalError::NoQueries);
    }
    params.validate()?;
    let mut rows = Vec::with_capacity(queries.len());
    for q in queries {
        let q = q.as_ref();
        let keyword: BTreeSet<String> = keyword_search(q, docs).into_iter().collect();
        let (direct, transitive) = match parse_query(q, snap) {
            Ok(query) => retrieve(&query, snap, params)?,
            Err(SearchError::EmptyQuery { .. }) => (Vec::new(), Vec::new()),
            Err(e) => return Err(e.into()),
        };
        let graph: BTreeSet<&str> = direct
            .iter()
            .chain(&transitive)
            .map(|h| h.doc_id.as_str())
            .collect();
        let overlap_count = keyword
            .iter()
            .filter(|k| graph.contains(k.as_str()))
            .count();
        let uplift = uplift_pct(keyword.len(), direct.len() + transitive.len());
        rows.push(KpiRow {
            query: q.to_string(),
            keyword_count: keyword.len(),
            graph_direct_count: direct.len(),
            graph_transitive_count: transitive.len(),
            overlap_count,
            uplift_pct: uplift,
            flagged: uplift.is_none(),
        });
    }
    let eligible: Vec<f64> = rows.iter().filter_map(|r| r.uplift_pct).collect();
    let average_uplift_pct = if eligible.is_empty() {
        0.0
    } else {
        eligible.iter().sum::<f64>() / eligible.len() as f64
    };
    Ok(KpiReport {
        rows,
        average_uplift_pct,
        rebuild_seconds: 0.0,
    })
}
