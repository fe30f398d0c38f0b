//! Explainable graph search over lessons-learned failure reports.
//!
//! The crate turns a corpus of design-case reports plus project metadata into
//! a multi-node-type knowledge graph, answers free-text queries with direct
//! hits and bounded shortest-path (transitive) results, explains each result,
//! and folds user feedback back into edge weights.
//!
//! Everything here is pure computation over in-memory values and builds
//! without `std`; file formats, clocks, and the network service live in the
//! `llg` crate.
//!
//! Pipeline overview:
//!
//! - [`corpus`]: document and project-forest model plus validation.
//! - [`textmine`]: normalization, n-grams, TFIDF, technical terms, entities.
//! - [`graph`]: graph construction, incremental insertion, snapshots.
//! - [`search`]: query parsing, direct hits, transitive expansion, ranking,
//!   explanations, and result subgraphs.
//! - [`assist`]: dictionary-based term checking and suggestions.
//! - [`feedback`]: feedback records and weight updates.
//! - [`eval`]: keyword baseline, KPI comparison, synthetic corpora.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod assist;
pub mod corpus;
pub mod eval;
pub mod feedback;
pub mod graph;
mod hash;
pub mod search;
pub mod textmine;

pub use assist::{Dictionary, TermCheck};
pub use corpus::{
    validate_corpus, Corpus, CorpusReport, DesignCaseDoc, ElementKind, Finding, ProjectElement,
    ProjectForest,
};
pub use feedback::{
    apply_feedback, ApplyReport, FeedbackDraft, FeedbackError, FeedbackLog, FeedbackRecord,
};
pub use graph::{
    add_document, build_graph, build_snapshot, doc_similarity, BuildConfig, EdgeRef, GraphEdge,
    GraphError, GraphNode, GraphSnapshot, LinkingKind, NodeKind, RelationLevel,
};
pub use search::{search, Explanation, Query, ResultKind, SearchError, SearchParams, SearchResult};
pub use textmine::{Gazetteer, GazetteerEntry, TextResources, TfidfVector, TokenStream};
