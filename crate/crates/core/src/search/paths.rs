//! Hop- and cost-bounded shortest paths over a snapshot.
//!
//! Edge cost is `(1 - weight) + beta`. Among paths of (near-)equal cost the
//! one with the lexicographically smaller node-id sequence wins; node
//! indices follow id order, so comparing index sequences is enough.

use alloc::collections::{BTreeMap, BTreeSet, BinaryHeap};
use alloc::vec::Vec;
use core::cmp::Ordering;

use super::{Hit, ResultKind, SearchParams};
use crate::graph::{node_id, GraphSnapshot};

/// Costs closer than this are treated as ties, also against the radius.
pub const COST_EPS: f64 = 1e-12;

pub fn edge_cost(weight: f64, beta: f64) -> f64 {
    (1.0 - weight) + beta
}

/// A loop-free path, origin first.
#[derive(Debug, Clone, PartialEq)]
pub struct PathLabel {
    pub cost: f64,
    pub nodes: Vec<usize>,
}

impl PathLabel {
    pub fn hops(&self) -> usize {
        self.nodes.len() - 1
    }

    /// Strictly preferable: cheaper, or tied on cost and lexicographically smaller.
    pub fn better_than(&self, other: &PathLabel) -> bool {
        if self.cost < other.cost - COST_EPS {
            true
        } else if other.cost < self.cost - COST_EPS {
            false
        } else {
            self.nodes < other.nodes
        }
    }
}

struct Queued(PathLabel);

impl PartialEq for Queued {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Queued {}
impl PartialOrd for Queued {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Queued {
    // Max-heap: reverse so the cheapest, lexicographically smallest pops first.
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .0
            .cost
            .total_cmp(&self.0.cost)
            .then_with(|| other.0.nodes.cmp(&self.0.nodes))
    }
}

/// Best path from `origin` to every node reachable within `radius` and
/// `max_hops`.
///
/// Labels are kept per node as a front over (hops, label): a label survives
/// only if no label with at most as many hops is at least as good. With
/// positive edge costs this yields exactly the optimum over loop-free paths.
pub fn bounded_paths(
    snap: &GraphSnapshot,
    origin: usize,
    beta: f64,
    radius: f64,
    max_hops: usize,
) -> BTreeMap<usize, PathLabel> {
    let mut front: BTreeMap<usize, Vec<PathLabel>> = BTreeMap::new();
    let mut heap = BinaryHeap::new();
    let start = PathLabel {
        cost: 0.0,
        nodes: alloc::vec![origin],
    };
    front.insert(origin, alloc::vec![start.clone()]);
    heap.push(Queued(start));

    while let Some(Queued(label)) = heap.pop() {
        let u = *label.nodes.last().expect("paths are non-empty");
        if !front.get(&u).is_some_and(|f| f.contains(&label)) {
            continue;
        }
        if label.hops() >= max_hops {
            continue;
        }
        for &(v, ei) in snap.neighbors(u) {
            if label.nodes.contains(&v) {
                continue;
            }
            let cost = label.cost + edge_cost(snap.edge_at(ei).weight, beta);
            if cost > radius + COST_EPS {
                continue;
            }
            let mut nodes = label.nodes.clone();
            nodes.push(v);
            let cand = PathLabel { cost, nodes };
            let entries = front.entry(v).or_default();
            let dominated = entries
                .iter()
                .any(|l| l.hops() <= cand.hops() && !cand.better_than(l));
            if dominated {
                continue;
            }
            entries.retain(|l| !(l.hops() >= cand.hops() && cand.better_than(l)));
            entries.push(cand.clone());
            heap.push(Queued(cand));
        }
    }

    front
        .into_iter()
        .filter(|(v, _)| *v != origin)
        .filter_map(|(v, labels)| {
            labels
                .into_iter()
                .reduce(|a, b| if b.better_than(&a) { b } else { a })
                .map(|best| (v, best))
        })
        .collect()
}

/// Documents reachable from the direct hits but not among them.
///
/// When several origins reach a document the cheapest path wins; its score
/// is the origin score times the product of path edge weights.
pub fn expand_transitive(hits: &[Hit], snap: &GraphSnapshot, params: &SearchParams) -> Vec<Hit> {
    let direct: BTreeSet<&str> = hits.iter().map(|h| h.doc_id.as_str()).collect();
    let mut best: BTreeMap<usize, (PathLabel, &Hit)> = BTreeMap::new();
    for hit in hits {
        let Some(origin) = snap.node_index(&node_id::design_case(&hit.doc_id)) else {
            continue;
        };
        for (v, label) in bounded_paths(snap, origin, params.beta, params.radius, params.max_hops) {
            let node = snap.node_at(v);
            if !node.is_design_case() || direct.contains(node.payload_ref.as_str()) {
                continue;
            }
            match best.get(&v) {
                Some((cur, _)) if !label.better_than(cur) => {}
                _ => {
                    best.insert(v, (label, hit));
                }
            }
        }
    }

    let mut out: Vec<Hit> = best
        .into_iter()
        .map(|(v, (label, origin))| {
            let weight_product: f64 = label
                .nodes
                .windows(2)
                .map(|w| {
                    let e = snap
                        .edge_index_between(w[0], w[1])
                        .expect("path edges come from adjacency");
                    snap.edge_at(e).weight
                })
                .product();
            Hit {
                doc_id: snap.node_at(v).payload_ref.clone(),
                kind: ResultKind::Transitive,
                score: origin.score * weight_product,
                origin: origin.doc_id.clone(),
                nodes: label
                    .nodes
                    .iter()
                    .map(|&i| snap.node_at(i).id.clone())
                    .collect(),
                cost: label.cost,
                matched_nodes: Vec::new(),
            }
        })
        .collect();
    out.sort_by(|a, b| {
        b.score
            .total_cmp(&a.score)
            .then_with(|| a.doc_id.cmp(&b.doc_id))
    });
    out
}
