use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use super::build::{entity_surfaces, project_edges, similarity_edge};
use super::{
    analyze_document, node_id, term_edge_weight, GraphEdge, GraphError, GraphNode, GraphSnapshot,
    LinkingKind, NodeKind, RelationLevel,
};
use crate::corpus::DesignCaseDoc;
use crate::textmine::{
    classify_technical_terms, gazetteer_terms, idf, is_ngram, vectorize, EntityRecognizer,
    OutOfVocabulary, TermStats,
};

/// Inserts one report into a copy of `snap` without touching existing edges.
///
/// Term statistics stay frozen: known terms keep their idf, and terms the
/// corpus has never seen enter the statistics with `df = 1` and the
/// out-of-vocabulary weight `idf(n, 0)`, so later queries can reach them.
/// Every new edge uses the build rules but is tagged `L3`. New term and
/// entity nodes may be created for the document; n-gram nodes are not,
/// since they need two documents.
pub fn add_document(snap: &GraphSnapshot, doc: DesignCaseDoc) -> Result<GraphSnapshot, GraphError> {
    if snap.doc(&doc.id).is_some() {
        return Err(GraphError::DuplicateDocument(doc.id));
    }
    if doc.failure_description.trim().is_empty() {
        return Err(GraphError::InvalidDocument {
            doc: doc.id,
            message: "empty failure_description".into(),
        });
    }
    snap.forest()
        .check_path(&doc.project_path)
        .map_err(|message| GraphError::InvalidDocument {
            doc: doc.id.clone(),
            message,
        })?;

    let config = snap.config().clone();
    let recognizer = EntityRecognizer::new(snap.gazetteer());
    let analysis = analyze_document(&doc, snap.resources(), &recognizer, config.n_max)?;
    let n = snap.corpus_size();

    let mut parts = snap.parts().clone();
    let mut new_stats: BTreeMap<String, TermStats> = BTreeMap::new();
    for (term, count) in &analysis.terms {
        if !parts.term_stats.contains_key(term) && *count > 0 {
            new_stats.insert(
                term.clone(),
                TermStats {
                    term: term.clone(),
                    df: 1,
                    total_count: u64::from(*count),
                    idf: idf(n, 0),
                },
            );
        }
    }
    parts
        .term_stats
        .extend(new_stats.iter().map(|(k, v)| (k.clone(), v.clone())));
    let vector = vectorize(
        &doc.id,
        &analysis.terms,
        &parts.term_stats,
        n,
        OutOfVocabulary::Smoothed,
    );

    let doc_node = GraphNode::design_case(&doc.id, &doc.title);
    let doc_node_id = doc_node.id.clone();
    let mut nodes: Vec<GraphNode> = alloc::vec![doc_node];
    let mut edges: Vec<GraphEdge> = Vec::new();

    for other in snap.tfidf_index().values() {
        if let Some(e) = similarity_edge(&vector, other, RelationLevel::L3, config.tau_sim) {
            edges.push(e);
        }
    }

    // Existing term and n-gram nodes the document mentions.
    let mut linked_terms: BTreeSet<(LinkingKind, String)> = BTreeSet::new();
    for node in snap.nodes().iter().filter(|n| n.kind == NodeKind::Linking) {
        let Some(kind @ (LinkingKind::Term | LinkingKind::Ngram)) = node.linking_kind else {
            continue;
        };
        if vector.weight(&node.payload_ref) > 0.0 {
            linked_terms.insert((kind, node.payload_ref.clone()));
        }
    }
    // Technical terms that are new to the corpus.
    let technical = classify_technical_terms(
        &new_stats,
        &analysis.tokens.uppercase,
        &gazetteer_terms(snap.gazetteer(), snap.resources()),
        n,
        &config.classifier,
    );
    for t in technical {
        let id = node_id::linking(LinkingKind::Term, &t);
        if snap.node(&id).is_none() && !is_ngram(&t) {
            nodes.push(GraphNode::linking(
                LinkingKind::Term,
                &t,
                &t,
                alloc::vec![t.clone()],
            ));
            linked_terms.insert((LinkingKind::Term, t));
        }
    }
    for (kind, term) in linked_terms {
        edges.push(GraphEdge::new(
            doc_node_id.clone(),
            node_id::linking(kind, &term),
            RelationLevel::L3,
            term_edge_weight(vector.weight(&term), config.term_node_weight_cap),
            alloc::vec![term],
        ));
    }

    let matched: BTreeSet<&str> = analysis
        .entities
        .iter()
        .map(|m| m.canonical.as_str())
        .collect();
    for entry in &snap.gazetteer().entries {
        if !matched.contains(entry.canonical.as_str()) {
            continue;
        }
        let id = node_id::linking(LinkingKind::Entity, &entry.canonical);
        if snap.node(&id).is_none() {
            nodes.push(GraphNode::linking(
                LinkingKind::Entity,
                &entry.canonical,
                &entry.canonical,
                entity_surfaces(entry, snap.resources()),
            ));
        }
        edges.push(GraphEdge::new(
            doc_node_id.clone(),
            id,
            RelationLevel::L3,
            entry.weight.unwrap_or(config.entity_weight),
            alloc::vec![entry.canonical.clone()],
        ));
    }

    edges.extend(project_edges(
        &doc,
        snap.forest(),
        RelationLevel::L3,
        config.project_edge_weight,
    )?);

    parts.version += 1;
    parts.nodes.extend(nodes);
    parts.edges.extend(edges);
    parts.tfidf_index.insert(doc.id.clone(), vector);
    parts.docs.push(doc);
    GraphSnapshot::from_parts(parts)
}
