//! Query answering: direct hits, bounded shortest-path expansion, ranking,
//! verbal explanations, and the result subgraph.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::graph::{EdgeRef, GraphSnapshot};

mod direct;
mod explain;
pub mod paths;
mod query;
mod rank;
mod subgraph;

pub use direct::direct_hits;
pub use explain::{explain, Evidence, Explanation, TemplateId};
pub use paths::expand_transitive;
pub use query::{parse_query, parse_query_in, Query};
pub use rank::rank_results;
pub use subgraph::{
    extract_subgraph, NodeTag, Subgraph, SubgraphEdge, SubgraphNode, QUERY_NODE_ID,
};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SearchError {
    #[error("query has no searchable terms")]
    EmptyQuery { unknown_terms: Vec<String> },
    #[error("invalid search parameters: {0}")]
    InvalidParams(String),
    #[error("snapshot integrity: {0}")]
    Integrity(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SearchParams {
    /// Minimum query–document cosine for a direct hit.
    pub tau_q: f64,
    /// Per-hop cost added to `1 - weight`.
    pub beta: f64,
    /// Maximum total path cost.
    pub radius: f64,
    pub max_hops: usize,
    pub limit: usize,
}

impl Default for SearchParams {
    fn default() -> Self {
        SearchParams {
            tau_q: 0.1,
            beta: 0.05,
            radius: 1.5,
            max_hops: 4,
            limit: 20,
        }
    }
}

impl SearchParams {
    pub fn validate(&self) -> Result<(), SearchError> {
        let bad = |m: String| Err(SearchError::InvalidParams(m));
        if !(self.tau_q > 0.0 && self.tau_q < 1.0) {
            return bad(format!("tau_q must be in (0,1), got {}", self.tau_q));
        }
        if !(self.beta >= 0.0 && self.beta.is_finite()) {
            return bad(format!("beta must be >= 0, got {}", self.beta));
        }
        if self.radius.is_nan() || self.radius <= 0.0 {
            return bad(format!("radius must be > 0, got {}", self.radius));
        }
        if self.max_hops < 1 {
            return bad("max_hops must be >= 1".into());
        }
        if self.limit < 1 {
            return bad("limit must be >= 1".into());
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ResultKind {
    Direct,
    Transitive,
}

impl ResultKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ResultKind::Direct => "direct",
            ResultKind::Transitive => "transitive",
        }
    }
}

/// A scored document before explanation.
#[derive(Debug, Clone, PartialEq)]
pub struct Hit {
    pub doc_id: String,
    pub kind: ResultKind,
    pub score: f64,
    /// Direct-hit document the result was reached from (itself if direct).
    pub origin: String,
    /// Node ids from origin to result; empty for direct hits.
    pub nodes: Vec<String>,
    /// Path cost; 0 for direct hits.
    pub cost: f64,
    /// Linking nodes the query matched exactly (direct hits).
    pub matched_nodes: Vec<String>,
}

impl Hit {
    /// Path as oriented edge references, origin first.
    pub fn path(&self) -> Vec<EdgeRef> {
        self.nodes
            .windows(2)
            .map(|w| EdgeRef::new(w[0].clone(), w[1].clone()))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchResult {
    pub doc_id: String,
    pub kind: ResultKind,
    pub score: f64,
    pub origin: String,
    /// Oriented edges from `origin` to `doc_id`; empty for direct hits.
    pub path: Vec<EdgeRef>,
    #[serde(default)]
    pub cost: f64,
    pub explanation: Explanation,
}

/// Everything one query produced.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchOutcome {
    pub query: Query,
    /// Ranked, explained, truncated to the limit.
    pub results: Vec<SearchResult>,
    /// Counts before truncation.
    pub direct_total: usize,
    pub transitive_total: usize,
}

/// Direct and transitive hits for a parsed query, before ranking.
pub fn retrieve(
    query: &Query,
    snap: &GraphSnapshot,
    params: &SearchParams,
) -> Result<(Vec<Hit>, Vec<Hit>), SearchError> {
    params.validate()?;
    let direct = direct_hits(query, snap, params);
    let transitive = expand_transitive(&direct, snap, params);
    Ok((direct, transitive))
}

/// Full pipeline: parse, retrieve, rank, explain.
pub fn search(
    raw: &str,
    snap: &GraphSnapshot,
    params: &SearchParams,
) -> Result<SearchOutcome, SearchError> {
    params.validate()?;
    let query = parse_query(raw, snap)?;
    let (direct, transitive) = retrieve(&query, snap, params)?;
    let (direct_total, transitive_total) = (direct.len(), transitive.len());
    let results = rank_results(direct, transitive, params.limit)
        .into_iter()
        .map(|hit| {
            let explanation = explain(&hit, snap, &query)?;
            Ok(SearchResult {
                path: hit.path(),
                doc_id: hit.doc_id,
                kind: hit.kind,
                score: hit.score,
                origin: hit.origin,
                cost: hit.cost,
                explanation,
            })
        })
        .collect::<Result<Vec<_>, SearchError>>()?;
    Ok(SearchOutcome {
        query,
        results,
        direct_total,
        transitive_total,
    })
}
