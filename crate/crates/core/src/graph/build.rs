use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::{
    node_id, term_edge_weight, BuildConfig, CorpusAnalysis, GraphEdge, GraphError, GraphNode,
    GraphSnapshot, LinkingKind, RelationLevel, SnapshotParts,
};
use crate::corpus::{Corpus, DesignCaseDoc, ProjectForest};
use crate::textmine::{is_ngram, normalize, GazetteerEntry, TextResources, TfidfVector};

/// Shared terms listed on an L1 edge.
const L1_PROVENANCE_TERMS: usize = 5;

pub(super) fn entity_surfaces(entry: &GazetteerEntry, resources: &TextResources) -> Vec<String> {
    entry
        .all_forms()
        .into_iter()
        .map(|f| normalize(f, "en", resources).phrase())
        .filter(|s| !s.is_empty())
        .collect()
}

pub(super) fn similarity_edge(
    a: &TfidfVector,
    b: &TfidfVector,
    level: RelationLevel,
    tau_sim: f64,
) -> Option<GraphEdge> {
    let cos = a.cosine(b);
    if cos < tau_sim || cos <= 0.0 {
        return None;
    }
    let provenance = a
        .shared_terms(b)
        .into_iter()
        .take(L1_PROVENANCE_TERMS)
        .map(|(t, _)| t)
        .collect();
    Some(GraphEdge::new(
        node_id::design_case(&a.doc_id),
        node_id::design_case(&b.doc_id),
        level,
        cos,
        provenance,
    ))
}

pub(super) fn project_edges(
    doc: &DesignCaseDoc,
    forest: &ProjectForest,
    level: RelationLevel,
    weight: f64,
) -> Result<Vec<GraphEdge>, GraphError> {
    doc.project_path
        .iter()
        .map(|el_id| {
            let el = forest
                .get(el_id)
                .ok_or_else(|| GraphError::InvalidDocument {
                    doc: doc.id.clone(),
                    message: format!("unknown project element '{el_id}'"),
                })?;
            Ok(GraphEdge::new(
                node_id::design_case(&doc.id),
                node_id::project_element(el_id),
                level,
                weight,
                alloc::vec![el.name.clone()],
            ))
        })
        .collect()
}

/// Builds a fresh snapshot from a validated corpus and its analysis.
///
/// The result has `version = previous_version + 1` (or 1) and an empty
/// `built_at`; callers stamp the time before publishing.
pub fn build_graph(
    corpus: &Corpus,
    analysis: &CorpusAnalysis,
    config: &BuildConfig,
    previous_version: Option<u64>,
) -> Result<GraphSnapshot, GraphError> {
    config.validate()?;
    if analysis.docs.len() != corpus.docs.len() || analysis.vectors.len() != corpus.docs.len() {
        return Err(GraphError::Integrity(
            "analysis does not match the corpus".into(),
        ));
    }
    let mut nodes: Vec<GraphNode> = Vec::new();
    let mut edges: Vec<GraphEdge> = Vec::new();

    for doc in &corpus.docs {
        nodes.push(GraphNode::design_case(&doc.id, &doc.title));
    }
    for el in corpus.forest.iter() {
        nodes.push(GraphNode::project_element(&el.id, &el.name));
    }

    // L1: report ↔ report similarity.
    let vectors = &analysis.vectors;
    for i in 0..vectors.len() {
        for j in i + 1..vectors.len() {
            if let Some(e) =
                similarity_edge(&vectors[i], &vectors[j], RelationLevel::L1, config.tau_sim)
            {
                edges.push(e);
            }
        }
    }

    // L2: technical terms and shared n-grams.
    let ngrams = analysis
        .stats
        .values()
        .filter(|s| is_ngram(&s.term) && s.df >= 2)
        .map(|s| (LinkingKind::Ngram, s.term.as_str()));
    let terms = analysis
        .technical
        .iter()
        .map(|t| (LinkingKind::Term, t.as_str()));
    for (kind, term) in terms.chain(ngrams) {
        let linked: Vec<(&str, f64)> = vectors
            .iter()
            .filter_map(|v| {
                let w = v.weight(term);
                (w > 0.0).then_some((v.doc_id.as_str(), w))
            })
            .collect();
        if linked.is_empty() {
            continue;
        }
        let node = GraphNode::linking(kind, term, term, alloc::vec![String::from(term)]);
        for (doc_id, w) in linked {
            edges.push(GraphEdge::new(
                node_id::design_case(doc_id),
                node.id.clone(),
                RelationLevel::L2,
                term_edge_weight(w, config.term_node_weight_cap),
                alloc::vec![String::from(term)],
            ));
        }
        nodes.push(node);
    }

    // L2: gazetteer entities.
    let mut entity_docs: BTreeMap<&str, BTreeSet<&str>> = BTreeMap::new();
    for a in &analysis.docs {
        for m in &a.entities {
            entity_docs
                .entry(m.canonical.as_str())
                .or_default()
                .insert(a.tokens.doc_id.as_str());
        }
    }
    for entry in &corpus.gazetteer.entries {
        let Some(docs) = entity_docs.get(entry.canonical.as_str()) else {
            continue;
        };
        let node = GraphNode::linking(
            LinkingKind::Entity,
            &entry.canonical,
            &entry.canonical,
            entity_surfaces(entry, &corpus.resources),
        );
        let weight = entry.weight.unwrap_or(config.entity_weight);
        for doc_id in docs {
            edges.push(GraphEdge::new(
                node_id::design_case(doc_id),
                node.id.clone(),
                RelationLevel::L2,
                weight,
                alloc::vec![entry.canonical.clone()],
            ));
        }
        nodes.push(node);
    }

    // L2: project structure.
    for doc in &corpus.docs {
        edges.extend(project_edges(
            doc,
            &corpus.forest,
            RelationLevel::L2,
            config.project_edge_weight,
        )?);
    }

    let mut parts = SnapshotParts::empty(config.clone());
    parts.version = previous_version.map_or(1, |v| v + 1);
    parts.nodes = nodes;
    parts.edges = edges;
    parts.tfidf_index = vectors
        .iter()
        .map(|v| (v.doc_id.clone(), v.clone()))
        .collect();
    parts.term_stats = analysis.stats.clone();
    parts.corpus_size = corpus.docs.len() as u64;
    parts.docs = corpus.docs.clone();
    parts.forest = corpus.forest.clone();
    parts.resources = corpus.resources.clone();
    parts.gazetteer = corpus.gazetteer.clone();
    GraphSnapshot::from_parts(parts)
}

/// Analyzes `corpus` and builds its snapshot in one step.
pub fn build_snapshot(
    corpus: &Corpus,
    config: &BuildConfig,
    previous_version: Option<u64>,
) -> Result<GraphSnapshot, GraphError> {
    let analysis = super::analyze_corpus(corpus, config)?;
    build_graph(corpus, &analysis, config, previous_version)
}
