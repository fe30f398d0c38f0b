use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{BuildConfig, GraphEdge, GraphError, GraphNode, NodeKind, RelationLevel};
use crate::corpus::{DesignCaseDoc, ProjectForest};
use crate::textmine::{Gazetteer, TermStats, TextResources, TfidfVector};

/// Plain, serializable contents of a snapshot.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SnapshotParts {
    pub version: u64,
    #[serde(default)]
    pub built_at: String,
    pub config_hash: String,
    pub config: BuildConfig,
    pub nodes: Vec<GraphNode>,
    pub edges: Vec<GraphEdge>,
    pub tfidf_index: BTreeMap<String, TfidfVector>,
    pub term_stats: BTreeMap<String, TermStats>,
    /// Number of documents the term statistics were computed over.
    pub corpus_size: u64,
    /// Highest feedback record id folded into the edge weights.
    #[serde(default)]
    pub feedback_watermark: u64,
    pub docs: Vec<DesignCaseDoc>,
    #[serde(default)]
    pub forest: ProjectForest,
    #[serde(default)]
    pub resources: TextResources,
    #[serde(default)]
    pub gazetteer: Gazetteer,
}

impl SnapshotParts {
    /// Empty parts for `config`, version 0.
    pub fn empty(config: BuildConfig) -> Self {
        SnapshotParts {
            version: 0,
            built_at: String::new(),
            config_hash: config.hash(),
            config,
            nodes: Vec::new(),
            edges: Vec::new(),
            tfidf_index: BTreeMap::new(),
            term_stats: BTreeMap::new(),
            corpus_size: 0,
            feedback_watermark: 0,
            docs: Vec::new(),
            forest: ProjectForest::default(),
            resources: TextResources::default(),
            gazetteer: Gazetteer::default(),
        }
    }
}

#[derive(Debug, Clone, Default)]
struct GraphIndex {
    node_pos: BTreeMap<String, usize>,
    // Per node: (neighbor index, edge index), sorted by neighbor.
    adjacency: Vec<Vec<(usize, usize)>>,
    edge_pos: BTreeMap<(usize, usize), usize>,
    doc_pos: BTreeMap<String, usize>,
    surfaces: BTreeMap<String, Vec<usize>>,
}

/// Immutable built graph. Nodes are ordered by id, so node indices compare
/// the same way node ids do.
#[derive(Debug, Clone)]
pub struct GraphSnapshot {
    parts: SnapshotParts,
    index: GraphIndex,
}

impl PartialEq for GraphSnapshot {
    fn eq(&self, other: &Self) -> bool {
        self.parts == other.parts
    }
}

impl Serialize for GraphSnapshot {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.parts.serialize(s)
    }
}

impl<'de> Deserialize<'de> for GraphSnapshot {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let parts = SnapshotParts::deserialize(d)?;
        GraphSnapshot::from_parts(parts).map_err(serde::de::Error::custom)
    }
}

fn integrity(msg: String) -> GraphError {
    GraphError::Integrity(msg)
}

fn level_fits(level: RelationLevel, a: NodeKind, b: NodeKind) -> bool {
    use NodeKind::*;
    match level {
        RelationLevel::L1 => a == DesignCase && b == DesignCase,
        RelationLevel::L2 => matches!(
            (a, b),
            (DesignCase, Linking | ProjectElement) | (Linking | ProjectElement, DesignCase)
        ),
        RelationLevel::L3 => a == DesignCase || b == DesignCase,
    }
}

impl GraphSnapshot {
    /// An empty graph (version 0) for `config`.
    pub fn empty(config: BuildConfig) -> Self {
        Self::from_parts(SnapshotParts::empty(config)).expect("empty parts are valid")
    }

    /// Canonicalizes ordering, checks every structural invariant, and
    /// indexes the graph.
    pub fn from_parts(mut parts: SnapshotParts) -> Result<Self, GraphError> {
        if parts.config_hash != parts.config.hash() {
            return Err(integrity(format!(
                "config hash mismatch: stored {}, computed {}",
                parts.config_hash,
                parts.config.hash()
            )));
        }
        parts.nodes.sort_by(|a, b| a.id.cmp(&b.id));
        for e in &mut parts.edges {
            if e.src > e.dst {
                core::mem::swap(&mut e.src, &mut e.dst);
            }
        }
        parts
            .edges
            .sort_by(|a, b| (&a.src, &a.dst).cmp(&(&b.src, &b.dst)));

        let mut index = GraphIndex::default();
        for (i, n) in parts.nodes.iter().enumerate() {
            if index.node_pos.insert(n.id.clone(), i).is_some() {
                return Err(integrity(format!("duplicate node id '{}'", n.id)));
            }
            if (n.kind == NodeKind::Linking) != n.linking_kind.is_some() {
                return Err(integrity(format!(
                    "node '{}': linking_kind must be present exactly on linking nodes",
                    n.id
                )));
            }
            if n.kind != NodeKind::Linking && !n.surfaces.is_empty() {
                return Err(integrity(format!(
                    "node '{}': surfaces on non-linking node",
                    n.id
                )));
            }
            for s in &n.surfaces {
                index.surfaces.entry(s.clone()).or_default().push(i);
            }
        }
        index.adjacency = alloc::vec![Vec::new(); parts.nodes.len()];
        for (ei, e) in parts.edges.iter().enumerate() {
            let (Some(&a), Some(&b)) = (index.node_pos.get(&e.src), index.node_pos.get(&e.dst))
            else {
                return Err(integrity(format!(
                    "edge {}–{} references a missing node",
                    e.src, e.dst
                )));
            };
            if a == b {
                return Err(integrity(format!("self-loop on '{}'", e.src)));
            }
            if !(e.weight > 0.0 && e.weight <= 1.0) {
                return Err(integrity(format!(
                    "edge {}–{} weight {} outside (0,1]",
                    e.src, e.dst, e.weight
                )));
            }
            if !level_fits(e.level, parts.nodes[a].kind, parts.nodes[b].kind) {
                return Err(integrity(format!(
                    "edge {}–{}: level {} does not fit {} ↔ {}",
                    e.src,
                    e.dst,
                    e.level.as_str(),
                    parts.nodes[a].kind.as_str(),
                    parts.nodes[b].kind.as_str()
                )));
            }
            if index.edge_pos.insert((a, b), ei).is_some() {
                return Err(integrity(format!("duplicate edge {}–{}", e.src, e.dst)));
            }
            index.adjacency[a].push((b, ei));
            index.adjacency[b].push((a, ei));
        }
        for adj in &mut index.adjacency {
            adj.sort_unstable();
        }

        let design_cases: BTreeSet<&str> = parts
            .nodes
            .iter()
            .filter(|n| n.is_design_case())
            .map(|n| n.payload_ref.as_str())
            .collect();
        let indexed: BTreeSet<&str> = parts.tfidf_index.keys().map(String::as_str).collect();
        if design_cases != indexed {
            return Err(integrity(
                "tfidf_index must cover exactly the design-case nodes".into(),
            ));
        }
        for (i, d) in parts.docs.iter().enumerate() {
            if index.doc_pos.insert(d.id.clone(), i).is_some() {
                return Err(integrity(format!("duplicate document '{}'", d.id)));
            }
        }
        let stored: BTreeSet<&str> = index.doc_pos.keys().map(String::as_str).collect();
        if stored != design_cases {
            return Err(integrity(
                "stored documents must match the design-case nodes".into(),
            ));
        }
        Ok(GraphSnapshot { parts, index })
    }

    pub fn parts(&self) -> &SnapshotParts {
        &self.parts
    }

    pub fn into_parts(self) -> SnapshotParts {
        self.parts
    }

    /// Sets the build timestamp before the snapshot is published.
    pub fn with_built_at(mut self, built_at: impl Into<String>) -> Self {
        self.parts.built_at = built_at.into();
        self
    }

    pub fn version(&self) -> u64 {
        self.parts.version
    }

    pub fn built_at(&self) -> &str {
        &self.parts.built_at
    }

    pub fn config(&self) -> &BuildConfig {
        &self.parts.config
    }

    pub fn config_hash(&self) -> &str {
        &self.parts.config_hash
    }

    pub fn nodes(&self) -> &[GraphNode] {
        &self.parts.nodes
    }

    pub fn edges(&self) -> &[GraphEdge] {
        &self.parts.edges
    }

    pub fn node_count(&self) -> usize {
        self.parts.nodes.len()
    }

    pub fn node_index(&self, id: &str) -> Option<usize> {
        self.index.node_pos.get(id).copied()
    }

    pub fn node(&self, id: &str) -> Option<&GraphNode> {
        self.node_index(id).map(|i| &self.parts.nodes[i])
    }

    pub fn node_at(&self, index: usize) -> &GraphNode {
        &self.parts.nodes[index]
    }

    pub fn edge_at(&self, index: usize) -> &GraphEdge {
        &self.parts.edges[index]
    }

    /// `(neighbor index, edge index)` pairs, ordered by neighbor.
    pub fn neighbors(&self, node: usize) -> &[(usize, usize)] {
        &self.index.adjacency[node]
    }

    pub fn edge_index_between(&self, a: usize, b: usize) -> Option<usize> {
        let key = if a <= b { (a, b) } else { (b, a) };
        self.index.edge_pos.get(&key).copied()
    }

    /// Edge between two node ids, in either orientation.
    pub fn edge_between(&self, a: &str, b: &str) -> Option<&GraphEdge> {
        let (a, b) = (self.node_index(a)?, self.node_index(b)?);
        self.edge_index_between(a, b).map(|e| &self.parts.edges[e])
    }

    pub fn degree(&self, node: usize) -> usize {
        self.index.adjacency[node].len()
    }

    /// Linking nodes whose normalized surface equals `surface`.
    pub fn linking_nodes_for(&self, surface: &str) -> &[usize] {
        self.index
            .surfaces
            .get(surface)
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    pub fn surfaces(&self) -> impl Iterator<Item = (&str, &[usize])> {
        self.index
            .surfaces
            .iter()
            .map(|(s, v)| (s.as_str(), v.as_slice()))
    }

    pub fn docs(&self) -> &[DesignCaseDoc] {
        &self.parts.docs
    }

    pub fn doc(&self, id: &str) -> Option<&DesignCaseDoc> {
        self.index.doc_pos.get(id).map(|&i| &self.parts.docs[i])
    }

    pub fn doc_vector(&self, doc_id: &str) -> Option<&TfidfVector> {
        self.parts.tfidf_index.get(doc_id)
    }

    pub fn tfidf_index(&self) -> &BTreeMap<String, TfidfVector> {
        &self.parts.tfidf_index
    }

    pub fn term_stats(&self) -> &BTreeMap<String, TermStats> {
        &self.parts.term_stats
    }

    pub fn corpus_size(&self) -> u64 {
        self.parts.corpus_size
    }

    pub fn feedback_watermark(&self) -> u64 {
        self.parts.feedback_watermark
    }

    pub fn forest(&self) -> &ProjectForest {
        &self.parts.forest
    }

    pub fn resources(&self) -> &TextResources {
        &self.parts.resources
    }

    pub fn gazetteer(&self) -> &Gazetteer {
        &self.parts.gazetteer
    }
}
