use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::SearchError;
use crate::graph::GraphSnapshot;
use crate::textmine::{
    extract_ngrams, normalize, vectorize, OutOfVocabulary, TfidfVector, TokenStream,
};

/// A normalized query with its vector over the snapshot vocabulary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Query {
    pub raw: String,
    pub tokens: TokenStream,
    /// Normalized tokens joined by spaces.
    pub phrase: String,
    /// Keys are always a subset of the snapshot vocabulary.
    pub vector: TfidfVector,
    /// Query tokens missing from the vocabulary, in query order.
    pub unknown_terms: Vec<String>,
}

pub fn parse_query(raw: &str, snap: &GraphSnapshot) -> Result<Query, SearchError> {
    parse_query_in(raw, "en", snap)
}

/// Normalizes with the snapshot's resources and vectorizes with its frozen
/// statistics; unknown terms are dropped from the vector and listed.
pub fn parse_query_in(
    raw: &str,
    language: &str,
    snap: &GraphSnapshot,
) -> Result<Query, SearchError> {
    let mut tokens = normalize(raw, language, snap.resources()).with_doc_id("query");
    if tokens.is_empty() {
        return Err(SearchError::EmptyQuery {
            unknown_terms: Vec::new(),
        });
    }
    let stats = snap.term_stats();
    let mut seen = BTreeSet::new();
    let unknown_terms: Vec<String> = tokens
        .tokens
        .iter()
        .filter(|t| !stats.contains_key(t.as_str()) && seen.insert(t.as_str()))
        .cloned()
        .collect();
    let unknown_count = tokens
        .tokens
        .iter()
        .filter(|t| !stats.contains_key(t.as_str()))
        .count();
    tokens.unknown_ratio = unknown_count as f64 / tokens.len() as f64;

    let counts = extract_ngrams(&tokens.tokens, snap.config().n_max)
        .map_err(|e| SearchError::InvalidParams(alloc::format!("{e}")))?;
    let vector = vectorize(
        "query",
        &counts,
        stats,
        snap.corpus_size(),
        OutOfVocabulary::Drop,
    );
    if vector.is_empty() {
        return Err(SearchError::EmptyQuery { unknown_terms });
    }
    Ok(Query {
        raw: raw.into(),
        phrase: tokens.phrase(),
        tokens,
        vector,
        unknown_terms,
    })
}
