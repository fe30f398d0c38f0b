//! The multi-node-type knowledge graph.
//!
//! Design-case nodes (one per report), project-element nodes (one per
//! metadata element), and linking nodes (technical terms, shared n-grams,
//! gazetteer entities) are connected by undirected weighted edges on three
//! relation levels:
//!
//! - `L1`: report ↔ report, weighted by TFIDF cosine.
//! - `L2`: report ↔ linking node or project element.
//! - `L3`: anything created by incremental insertion of a new report.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::hash::fnv1a_hex;
use crate::textmine::{ClassifierParams, TextError, TfidfVector};

mod analysis;
mod build;
mod incremental;
mod snapshot;

pub use analysis::{analyze_corpus, analyze_document, CorpusAnalysis, DocAnalysis};
pub use build::{build_graph, build_snapshot};
pub use incremental::add_document;
pub use snapshot::{GraphSnapshot, SnapshotParts};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GraphError {
    #[error("invalid build config: {0}")]
    InvalidConfig(String),
    #[error("document '{0}' already exists in the graph")]
    DuplicateDocument(String),
    #[error("document '{doc}': {message}")]
    InvalidDocument { doc: String, message: String },
    #[error("snapshot integrity: {0}")]
    Integrity(String),
    #[error(transparent)]
    Text(#[from] TextError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NodeKind {
    DesignCase,
    ProjectElement,
    Linking,
}

impl NodeKind {
    pub fn as_str(self) -> &'static str {
        match self {
            NodeKind::DesignCase => "design_case",
            NodeKind::ProjectElement => "project_element",
            NodeKind::Linking => "linking",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LinkingKind {
    Term,
    Ngram,
    Entity,
}

impl LinkingKind {
    pub fn as_str(self) -> &'static str {
        match self {
            LinkingKind::Term => "term",
            LinkingKind::Ngram => "ngram",
            LinkingKind::Entity => "entity",
        }
    }
}

/// Node ids are prefixed by kind so report, element, and term ids never clash.
pub mod node_id {
    use super::LinkingKind;
    use alloc::format;
    use alloc::string::String;

    pub fn design_case(doc_id: &str) -> String {
        format!("doc:{doc_id}")
    }

    pub fn project_element(element_id: &str) -> String {
        format!("pe:{element_id}")
    }

    pub fn linking(kind: LinkingKind, key: &str) -> String {
        format!("{}:{key}", kind.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphNode {
    pub id: String,
    pub kind: NodeKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub linking_kind: Option<LinkingKind>,
    pub label: String,
    /// Doc id, element id, term, or entity canonical form.
    pub payload_ref: String,
    /// Normalized surface forms a query can match exactly (linking nodes).
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub surfaces: Vec<String>,
}

impl GraphNode {
    pub fn design_case(doc_id: &str, title: &str) -> Self {
        GraphNode {
            id: node_id::design_case(doc_id),
            kind: NodeKind::DesignCase,
            linking_kind: None,
            label: if title.is_empty() {
                doc_id.into()
            } else {
                title.into()
            },
            payload_ref: doc_id.into(),
            surfaces: Vec::new(),
        }
    }

    pub fn project_element(element_id: &str, name: &str) -> Self {
        GraphNode {
            id: node_id::project_element(element_id),
            kind: NodeKind::ProjectElement,
            linking_kind: None,
            label: name.into(),
            payload_ref: element_id.into(),
            surfaces: Vec::new(),
        }
    }

    pub fn linking(kind: LinkingKind, key: &str, label: &str, mut surfaces: Vec<String>) -> Self {
        surfaces.sort();
        surfaces.dedup();
        GraphNode {
            id: node_id::linking(kind, key),
            kind: NodeKind::Linking,
            linking_kind: Some(kind),
            label: label.into(),
            payload_ref: key.into(),
            surfaces,
        }
    }

    pub fn is_design_case(&self) -> bool {
        self.kind == NodeKind::DesignCase
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum RelationLevel {
    L1,
    L2,
    L3,
}

impl RelationLevel {
    pub fn as_str(self) -> &'static str {
        match self {
            RelationLevel::L1 => "L1",
            RelationLevel::L2 => "L2",
            RelationLevel::L3 => "L3",
        }
    }
}

/// Undirected weighted edge, stored with `src < dst`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphEdge {
    pub src: String,
    pub dst: String,
    pub level: RelationLevel,
    pub weight: f64,
    /// Shared terms, entity canonical form, element name, or feedback refs.
    #[serde(default)]
    pub provenance: Vec<String>,
}

impl GraphEdge {
    pub fn new(
        a: String,
        b: String,
        level: RelationLevel,
        weight: f64,
        provenance: Vec<String>,
    ) -> Self {
        let (src, dst) = if a <= b { (a, b) } else { (b, a) };
        GraphEdge {
            src,
            dst,
            level,
            weight,
            provenance,
        }
    }

    pub fn key(&self) -> EdgeRef {
        EdgeRef {
            src: self.src.clone(),
            dst: self.dst.clone(),
        }
    }

    /// The endpoint opposite `node`.
    pub fn other(&self, node: &str) -> &str {
        if self.src == node {
            &self.dst
        } else {
            &self.src
        }
    }
}

/// Reference to an edge by endpoint ids.
///
/// In result paths the pair is oriented in traversal order; lookups ignore
/// orientation.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct EdgeRef {
    pub src: String,
    pub dst: String,
}

impl EdgeRef {
    pub fn new(src: impl Into<String>, dst: impl Into<String>) -> Self {
        EdgeRef {
            src: src.into(),
            dst: dst.into(),
        }
    }

    pub fn canonical(&self) -> EdgeRef {
        if self.src <= self.dst {
            self.clone()
        } else {
            EdgeRef::new(self.dst.clone(), self.src.clone())
        }
    }
}

/// Graph construction parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct BuildConfig {
    /// Minimum cosine for an L1 edge.
    pub tau_sim: f64,
    /// Entity edge weight when the gazetteer entry has none.
    pub entity_weight: f64,
    pub project_edge_weight: f64,
    /// Upper bound for term and n-gram edge weights.
    pub term_node_weight_cap: f64,
    pub n_max: usize,
    pub classifier: ClassifierParams,
}

impl Default for BuildConfig {
    fn default() -> Self {
        BuildConfig {
            tau_sim: 0.15,
            entity_weight: 0.9,
            project_edge_weight: 0.8,
            term_node_weight_cap: 0.7,
            n_max: 3,
            classifier: ClassifierParams::default(),
        }
    }
}

fn unit_weight(name: &str, w: f64) -> Result<(), GraphError> {
    if w > 0.0 && w <= 1.0 {
        Ok(())
    } else {
        Err(GraphError::InvalidConfig(format!(
            "{name} must be in (0,1], got {w}"
        )))
    }
}

impl BuildConfig {
    pub fn validate(&self) -> Result<(), GraphError> {
        // tau_sim = 1 is allowed: it keeps only identical documents linked.
        unit_weight("tau_sim", self.tau_sim)?;
        unit_weight("entity_weight", self.entity_weight)?;
        unit_weight("project_edge_weight", self.project_edge_weight)?;
        unit_weight("term_node_weight_cap", self.term_node_weight_cap)?;
        unit_weight(
            "classifier.specificity_frac",
            self.classifier.specificity_frac,
        )?;
        if self.n_max < 1 {
            return Err(GraphError::InvalidConfig("n_max must be at least 1".into()));
        }
        Ok(())
    }

    /// Stable fingerprint of every parameter.
    pub fn hash(&self) -> String {
        let canonical = format!(
            "tau_sim={:?};entity_weight={:?};project_edge_weight={:?};term_node_weight_cap={:?};n_max={};specificity_frac={:?};min_count={}",
            self.tau_sim,
            self.entity_weight,
            self.project_edge_weight,
            self.term_node_weight_cap,
            self.n_max,
            self.classifier.specificity_frac,
            self.classifier.min_count,
        );
        fnv1a_hex(canonical.as_bytes())
    }
}

/// Cosine similarity of two unit TFIDF vectors; 0 for empty vectors.
pub fn doc_similarity(a: &TfidfVector, b: &TfidfVector) -> f64 {
    a.cosine(b)
}

/// L2 weight of a term or n-gram edge.
pub(crate) fn term_edge_weight(tfidf_weight: f64, cap: f64) -> f64 {
    (2.0 * tfidf_weight).min(cap)
}
