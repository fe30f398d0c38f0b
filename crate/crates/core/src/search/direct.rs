use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use super::{Hit, Query, ResultKind, SearchParams};
use crate::graph::{GraphSnapshot, NodeKind, RelationLevel};

/// Documents matching the query immediately.
///
/// A document qualifies when its cosine with the query reaches `tau_q`, or
/// when it is adjacent to a linking node whose surface equals a query token
/// or the whole normalized query; the score is the larger of cosine and
/// edge weight. Ordered by score, then doc id.
pub fn direct_hits(query: &Query, snap: &GraphSnapshot, params: &SearchParams) -> Vec<Hit> {
    let mut scored: BTreeMap<&str, (f64, BTreeSet<String>)> = BTreeMap::new();
    for (doc_id, vector) in snap.tfidf_index() {
        let cos = query.vector.cosine(vector);
        if cos >= params.tau_q && cos > 0.0 {
            scored.insert(doc_id.as_str(), (cos, BTreeSet::new()));
        }
    }

    let probes: BTreeSet<&str> = query
        .tokens
        .tokens
        .iter()
        .map(String::as_str)
        .chain(core::iter::once(query.phrase.as_str()))
        .collect();
    for probe in probes {
        for &linking in snap.linking_nodes_for(probe) {
            let linking_id = &snap.node_at(linking).id;
            for &(nb, ei) in snap.neighbors(linking) {
                let node = snap.node_at(nb);
                let edge = snap.edge_at(ei);
                if node.kind != NodeKind::DesignCase || edge.level == RelationLevel::L1 {
                    continue;
                }
                let entry = scored
                    .entry(node.payload_ref.as_str())
                    .or_insert((0.0, BTreeSet::new()));
                entry.0 = entry.0.max(edge.weight);
                entry.1.insert(linking_id.clone());
            }
        }
    }

    let mut hits: Vec<Hit> = scored
        .into_iter()
        .map(|(doc_id, (score, matched))| Hit {
            doc_id: doc_id.into(),
            kind: ResultKind::Direct,
            score,
            origin: doc_id.into(),
            nodes: Vec::new(),
            cost: 0.0,
            matched_nodes: matched.into_iter().collect(),
        })
        .collect();
    hits.sort_by(|a, b| {
        b.score
            .total_cmp(&a.score)
            .then_with(|| a.doc_id.cmp(&b.doc_id))
    });
    hits
}
