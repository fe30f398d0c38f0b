use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::{Hit, Query, ResultKind, SearchError};
use crate::graph::{node_id, EdgeRef, GraphNode, GraphSnapshot, LinkingKind, NodeKind};

/// Clauses spelled out before the rest are summarized.
const MAX_CLAUSES: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TemplateId {
    DirectMatch,
    SharedLinking,
    ViaDocument,
    SameModule,
}

/// What an explanation refers to: every item exists in the snapshot.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Evidence {
    /// Matched query terms or shared term / n-gram labels.
    #[serde(default)]
    pub terms: Vec<String>,
    /// Entity canonical forms.
    #[serde(default)]
    pub entities: Vec<String>,
    /// Intermediate document ids.
    #[serde(default)]
    pub documents: Vec<String>,
    /// Project element ids.
    #[serde(default)]
    pub elements: Vec<String>,
    /// Every graph node the explanation touches.
    #[serde(default)]
    pub nodes: Vec<String>,
    /// Every graph edge the explanation touches.
    #[serde(default)]
    pub edges: Vec<EdgeRef>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Explanation {
    pub template_id: TemplateId,
    pub text: String,
    pub evidence: Evidence,
}

fn push_unique(v: &mut Vec<String>, s: &str) {
    if !v.iter().any(|x| x == s) {
        v.push(s.to_string());
    }
}

fn linking_word(kind: Option<LinkingKind>) -> &'static str {
    match kind {
        Some(LinkingKind::Term) => "technical term",
        Some(LinkingKind::Ngram) => "phrase",
        Some(LinkingKind::Entity) | None => "entity",
    }
}

fn node<'s>(snap: &'s GraphSnapshot, id: &str) -> Result<&'s GraphNode, SearchError> {
    snap.node(id)
        .ok_or_else(|| SearchError::Integrity(format!("node '{id}' is not in the snapshot")))
}

/// Renders the template explanation for one hit.
///
/// Transitive paths are read as segments between consecutive documents;
/// each segment becomes one clause (shared linking node, shared project
/// element, or direct text similarity).
pub fn explain(hit: &Hit, snap: &GraphSnapshot, query: &Query) -> Result<Explanation, SearchError> {
    match hit.kind {
        ResultKind::Direct => explain_direct(hit, snap, query),
        ResultKind::Transitive => explain_path(hit, snap),
    }
}

fn explain_direct(
    hit: &Hit,
    snap: &GraphSnapshot,
    query: &Query,
) -> Result<Explanation, SearchError> {
    let doc_node = node_id::design_case(&hit.doc_id);
    node(snap, &doc_node)?;
    let vector = snap
        .doc_vector(&hit.doc_id)
        .ok_or_else(|| SearchError::Integrity(format!("no vector for '{}'", hit.doc_id)))?;

    let mut ev = Evidence::default();
    ev.nodes.push(doc_node.clone());
    for t in &query.tokens.tokens {
        if vector.weight(t) > 0.0 {
            push_unique(&mut ev.terms, t);
        }
    }
    let mut parts: Vec<String> = Vec::new();
    if !ev.terms.is_empty() {
        parts.push(format!("matched your query terms: {}", ev.terms.join(", ")));
    }
    for id in &hit.matched_nodes {
        let n = node(snap, id)?;
        if snap.edge_between(&doc_node, id).is_none() {
            return Err(SearchError::Integrity(format!(
                "no edge between '{doc_node}' and '{id}'"
            )));
        }
        ev.nodes.push(id.clone());
        ev.edges.push(EdgeRef::new(doc_node.clone(), id.clone()));
        match n.linking_kind {
            Some(LinkingKind::Entity) => push_unique(&mut ev.entities, &n.payload_ref),
            _ => {
                if ev.terms.contains(&n.payload_ref) {
                    continue;
                }
                push_unique(&mut ev.terms, &n.payload_ref);
            }
        }
        parts.push(format!(
            "matched {} '{}'",
            linking_word(n.linking_kind),
            n.label
        ));
    }
    if parts.is_empty() {
        parts.push("matched your query".into());
    }
    Ok(Explanation {
        template_id: TemplateId::DirectMatch,
        text: parts.join("; "),
        evidence: ev,
    })
}

fn explain_path(hit: &Hit, snap: &GraphSnapshot) -> Result<Explanation, SearchError> {
    if hit.nodes.len() < 2 {
        return Err(SearchError::Integrity(format!(
            "transitive result '{}' has no path",
            hit.doc_id
        )));
    }
    let mut ev = Evidence::default();
    let mut nodes: Vec<&GraphNode> = Vec::with_capacity(hit.nodes.len());
    for id in &hit.nodes {
        nodes.push(node(snap, id)?);
        ev.nodes.push(id.clone());
    }
    for w in hit.nodes.windows(2) {
        if snap.edge_between(&w[0], &w[1]).is_none() {
            return Err(SearchError::Integrity(format!(
                "path edge {}–{} is not in the snapshot",
                w[0], w[1]
            )));
        }
        ev.edges.push(EdgeRef::new(w[0].clone(), w[1].clone()));
    }

    // Split the path at documents: each segment is doc–doc or doc–X–doc.
    let doc_positions: Vec<usize> = nodes
        .iter()
        .enumerate()
        .filter(|(_, n)| n.kind == NodeKind::DesignCase)
        .map(|(i, _)| i)
        .collect();
    let mut clauses: Vec<String> = Vec::new();
    let mut segment_kinds: BTreeSet<NodeKind> = BTreeSet::new();
    for pair in doc_positions.windows(2) {
        let (a, b) = (nodes[pair[0]], nodes[pair[1]]);
        let clause = match pair[1] - pair[0] {
            1 => {
                segment_kinds.insert(NodeKind::DesignCase);
                let w = snap
                    .edge_between(&a.id, &b.id)
                    .map(|e| e.weight)
                    .unwrap_or_default();
                format!(
                    "{} is textually similar to {} ({w:.2})",
                    a.payload_ref, b.payload_ref
                )
            }
            _ => {
                let mid = nodes[pair[0] + 1];
                segment_kinds.insert(mid.kind);
                match mid.kind {
                    NodeKind::ProjectElement => {
                        push_unique(&mut ev.elements, &mid.payload_ref);
                        let kind = snap
                            .forest()
                            .get(&mid.payload_ref)
                            .map_or("project element", |e| e.kind.as_str());
                        format!(
                            "{} and {} belong to the same {kind} '{}'",
                            a.payload_ref, b.payload_ref, mid.label
                        )
                    }
                    _ => {
                        match mid.linking_kind {
                            Some(LinkingKind::Entity) => {
                                push_unique(&mut ev.entities, &mid.payload_ref)
                            }
                            _ => push_unique(&mut ev.terms, &mid.payload_ref),
                        }
                        format!(
                            "{} shares {} '{}' with {}",
                            a.payload_ref,
                            linking_word(mid.linking_kind),
                            mid.label,
                            b.payload_ref
                        )
                    }
                }
            }
        };
        clauses.push(clause);
    }
    for &i in &doc_positions[1..doc_positions.len() - 1] {
        push_unique(&mut ev.documents, &nodes[i].payload_ref);
    }

    let origin = &nodes[0].payload_ref;
    let template_id = if clauses.len() > 1 {
        TemplateId::ViaDocument
    } else if segment_kinds.contains(&NodeKind::Linking) {
        TemplateId::SharedLinking
    } else if segment_kinds.contains(&NodeKind::ProjectElement) {
        TemplateId::SameModule
    } else {
        // One similarity hop: the direct hit itself is the intermediary.
        push_unique(&mut ev.documents, origin);
        TemplateId::ViaDocument
    };

    let mut text = format!("Related to direct hit {origin}");
    if template_id == TemplateId::ViaDocument && clauses.len() > 1 {
        text.push_str(&format!(" through document {}", ev.documents.join(", ")));
    }
    text.push_str(": ");
    let shown = clauses.len().min(MAX_CLAUSES);
    text.push_str(&clauses[..shown].join("; "));
    if clauses.len() > shown {
        text.push_str(&format!("; and {} further links", clauses.len() - shown));
    }
    text.push('.');
    Ok(Explanation {
        template_id,
        text,
        evidence: ev,
    })
}
