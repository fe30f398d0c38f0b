use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::{Query, ResultKind, SearchResult};
use crate::graph::{node_id, EdgeRef, GraphSnapshot};

/// Id of the pseudo-node standing for the query.
pub const QUERY_NODE_ID: &str = "query";

/// Role of a node in the result subgraph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NodeTag {
    Query,
    Direct,
    Transitive,
    Connector,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubgraphNode {
    pub id: String,
    /// Graph node kind, or `"query"` for the pseudo-node.
    pub kind: String,
    pub tag: NodeTag,
    pub label: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubgraphEdge {
    pub src: String,
    pub dst: String,
    /// `L1`/`L2`/`L3`, or `"query"` for query pseudo-edges.
    pub level: String,
    pub weight: f64,
    #[serde(default)]
    pub provenance: Vec<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Subgraph {
    pub nodes: Vec<SubgraphNode>,
    pub edges: Vec<SubgraphEdge>,
}

impl Subgraph {
    pub fn node(&self, id: &str) -> Option<&SubgraphNode> {
        self.nodes.iter().find(|n| n.id == id)
    }
}

/// The partial graph shown next to the results: the query, every result,
/// and every edge on a transitive path.
///
/// Nodes are ordered by tag (query, direct, transitive, connector), then id;
/// edges by endpoints.
pub fn extract_subgraph(query: &Query, results: &[SearchResult], snap: &GraphSnapshot) -> Subgraph {
    let mut tags: BTreeMap<String, NodeTag> = BTreeMap::new();
    let mut edges: BTreeMap<EdgeRef, SubgraphEdge> = BTreeMap::new();

    let tag = |tags: &mut BTreeMap<String, NodeTag>, id: &str, t: NodeTag| {
        let e = tags.entry(id.to_string()).or_insert(t);
        if t < *e {
            *e = t;
        }
    };

    for r in results {
        let doc = node_id::design_case(&r.doc_id);
        match r.kind {
            ResultKind::Direct => {
                tag(&mut tags, &doc, NodeTag::Direct);
                let key = EdgeRef::new(QUERY_NODE_ID, doc.clone());
                edges.insert(
                    key,
                    SubgraphEdge {
                        src: QUERY_NODE_ID.into(),
                        dst: doc,
                        level: "query".into(),
                        weight: r.score,
                        provenance: Vec::new(),
                    },
                );
            }
            ResultKind::Transitive => {
                tag(&mut tags, &doc, NodeTag::Transitive);
                for step in &r.path {
                    for end in [&step.src, &step.dst] {
                        let t = if *end == doc {
                            NodeTag::Transitive
                        } else {
                            NodeTag::Connector
                        };
                        tag(&mut tags, end, t);
                    }
                    if let Some(e) = snap.edge_between(&step.src, &step.dst) {
                        edges.entry(e.key()).or_insert_with(|| SubgraphEdge {
                            src: e.src.clone(),
                            dst: e.dst.clone(),
                            level: e.level.as_str().into(),
                            weight: e.weight,
                            provenance: e.provenance.clone(),
                        });
                    }
                }
            }
        }
    }

    let mut nodes: Vec<SubgraphNode> = Vec::with_capacity(tags.len() + 1);
    nodes.push(SubgraphNode {
        id: QUERY_NODE_ID.into(),
        kind: "query".into(),
        tag: NodeTag::Query,
        label: query.raw.clone(),
    });
    for (id, t) in tags {
        let (kind, label) = match snap.node(&id) {
            Some(n) => (n.kind.as_str().to_string(), n.label.clone()),
            None => ("unknown".to_string(), id.clone()),
        };
        nodes.push(SubgraphNode {
            id,
            kind,
            tag: t,
            label,
        });
    }
    nodes.sort_by(|a, b| a.tag.cmp(&b.tag).then_with(|| a.id.cmp(&b.id)));

    Subgraph {
        nodes,
        edges: edges.into_values().collect(),
    }
}
