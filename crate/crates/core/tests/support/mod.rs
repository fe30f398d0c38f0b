//! Fixtures and independent reference implementations shared by the
//! integration tests.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use llg_core::corpus::{ElementKind, ProjectElement};
use llg_core::graph::{node_id, GraphSnapshot, NodeKind, SnapshotParts};
use llg_core::search::{expand_transitive, paths::COST_EPS, Hit, ResultKind, SearchResult};
use llg_core::textmine::{compute_tfidf, DocTerms, Gazetteer, TextResources, TfidfVector};
use llg_core::{
    build_snapshot, BuildConfig, Corpus, DesignCaseDoc, GraphEdge, GraphNode, LinkingKind,
    ProjectForest, RelationLevel, SearchParams,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const DOCS: &str = include_str!("../../../llg/fixtures/docs.jsonl");
const PROJECT: &str = include_str!("../../../llg/fixtures/project.json");
const GAZETTEER: &str = include_str!("../../../llg/fixtures/gazetteer.json");
const ABBREVIATIONS: &str = include_str!("../../../llg/fixtures/abbreviations.json");
const QUERIES: &str = include_str!("../../../llg/fixtures/queries.txt");
const STOPWORDS_EN: &str = include_str!("../../../llg/resources/stopwords/en.txt");

pub fn fixture_resources() -> TextResources {
    let abbrevs: BTreeMap<String, String> = serde_json::from_str(ABBREVIATIONS).unwrap();
    let mut res = TextResources::new().with_stopwords("en", STOPWORDS_EN.lines().map(str::trim));
    for (k, v) in &abbrevs {
        res = res.with_abbreviation(k, v);
    }
    res
}

pub fn fixture_corpus() -> Corpus {
    let docs: Vec<DesignCaseDoc> = DOCS
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    let elements: Vec<ProjectElement> = serde_json::from_str(PROJECT).unwrap();
    let (forest, report) = ProjectForest::validate(elements);
    assert!(report.errors.is_empty(), "{:?}", report.errors);
    let gazetteer: Gazetteer = serde_json::from_str(GAZETTEER).unwrap();
    let corpus = Corpus {
        docs,
        forest,
        resources: fixture_resources(),
        gazetteer,
    };
    assert!(corpus.validate().is_accepted());
    corpus
}

pub fn fixture_snapshot() -> GraphSnapshot {
    build_snapshot(&fixture_corpus(), &BuildConfig::default(), None).unwrap()
}

pub fn fixture_queries() -> Vec<String> {
    QUERIES
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .map(String::from)
        .collect()
}

/// Every way a result can disagree with the snapshot it came from.
pub fn explanation_violations(r: &SearchResult, snap: &GraphSnapshot) -> Vec<String> {
    let mut v = Vec::new();
    let ev = &r.explanation.evidence;
    if r.explanation.text.trim().is_empty() {
        v.push(format!("{}: empty explanation text", r.doc_id));
    }
    match r.kind {
        ResultKind::Direct => {
            if !r.path.is_empty() {
                v.push(format!("{}: direct result with a path", r.doc_id));
            }
            if r.origin != r.doc_id {
                v.push(format!("{}: direct result with foreign origin", r.doc_id));
            }
        }
        ResultKind::Transitive => {
            if r.path.is_empty() {
                v.push(format!("{}: transitive result without a path", r.doc_id));
            } else {
                if r.path[0].src != node_id::design_case(&r.origin) {
                    v.push(format!("{}: path does not start at the origin", r.doc_id));
                }
                if r.path.last().unwrap().dst != node_id::design_case(&r.doc_id) {
                    v.push(format!("{}: path does not end at the result", r.doc_id));
                }
                for w in r.path.windows(2) {
                    if w[0].dst != w[1].src {
                        v.push(format!("{}: path is not contiguous", r.doc_id));
                    }
                }
            }
        }
    }
    for e in r.path.iter().chain(&ev.edges) {
        if snap.edge_between(&e.src, &e.dst).is_none() {
            v.push(format!(
                "{}: edge {}–{} not in snapshot",
                r.doc_id, e.src, e.dst
            ));
        }
    }
    for n in &ev.nodes {
        if snap.node(n).is_none() {
            v.push(format!("{}: node {n} not in snapshot", r.doc_id));
        }
    }
    let path_nodes: BTreeSet<&str> = r
        .path
        .iter()
        .flat_map(|e| [e.src.as_str(), e.dst.as_str()])
        .collect();
    for d in &ev.documents {
        if snap.doc(d).is_none() {
            v.push(format!("{}: document {d} not in snapshot", r.doc_id));
        }
        if r.kind == ResultKind::Transitive
            && !path_nodes.contains(node_id::design_case(d).as_str())
        {
            v.push(format!("{}: document {d} not on the path", r.doc_id));
        }
    }
    for el in &ev.elements {
        if !snap.forest().contains(el) {
            v.push(format!("{}: element {el} not in forest", r.doc_id));
        }
    }
    for ent in &ev.entities {
        if snap
            .node(&node_id::linking(LinkingKind::Entity, ent))
            .is_none()
        {
            v.push(format!("{}: entity {ent} has no node", r.doc_id));
        }
    }
    for t in &ev.terms {
        let known = snap.term_stats().contains_key(t)
            || snap.node(&node_id::linking(LinkingKind::Term, t)).is_some()
            || snap
                .node(&node_id::linking(LinkingKind::Ngram, t))
                .is_some();
        if !known {
            v.push(format!("{}: term {t} unknown to snapshot", r.doc_id));
        }
    }
    v
}

// ---------------------------------------------------------------------------
// TFIDF reference

/// Straightforward TFIDF over token lists: raw counts, smoothed idf, L2 norm.
pub fn reference_tfidf(docs: &[Vec<String>]) -> Vec<BTreeMap<String, f64>> {
    let n = docs.len() as f64;
    let mut df: BTreeMap<&str, f64> = BTreeMap::new();
    for d in docs {
        let uniq: BTreeSet<&str> = d.iter().map(String::as_str).collect();
        for t in uniq {
            *df.entry(t).or_default() += 1.0;
        }
    }
    docs.iter()
        .map(|d| {
            let mut count: BTreeMap<&str, f64> = BTreeMap::new();
            for t in d {
                *count.entry(t.as_str()).or_default() += 1.0;
            }
            let raw: Vec<(&str, f64)> = count
                .iter()
                .map(|(t, c)| {
                    let idf = ((1.0 + n) / (1.0 + df[t])).ln() + 1.0;
                    (*t, (1.0 + c.ln()) * idf)
                })
                .collect();
            let norm = raw.iter().map(|(_, w)| w * w).sum::<f64>().sqrt();
            raw.into_iter()
                .map(|(t, w)| (t.to_string(), w / norm))
                .collect()
        })
        .collect()
}

/// Seeded random corpus of at most 10 documents with at most 20 tokens each.
pub fn random_token_corpus(seed: u64) -> Vec<Vec<String>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let vocab = rng.gen_range(3..=15);
    let n_docs = rng.gen_range(1..=10);
    (0..n_docs)
        .map(|_| {
            let len = rng.gen_range(1..=20);
            (0..len)
                .map(|_| format!("w{}", rng.gen_range(0..vocab)))
                .collect()
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Shortest-path reference

/// A random valid snapshot: `doc:*` and `term:*` nodes, doc–doc L1 and
/// doc–term L2 edges. Weights come from a coarse grid on odd seeds so equal
/// path costs (and therefore tie-breaking) actually occur.
pub fn random_snapshot(seed: u64) -> GraphSnapshot {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n_nodes = rng.gen_range(4..=30);
    let n_docs = rng.gen_range(2..=n_nodes);
    let max_edges = rng.gen_range(n_nodes..=80);
    let coarse = seed % 2 == 1;

    let mut parts = SnapshotParts::empty(BuildConfig::default());
    let mut ids = Vec::new();
    for i in 0..n_nodes {
        let node = if i < n_docs {
            let id = format!("d{i:02}");
            parts.docs.push(DesignCaseDoc::new(&id, "x"));
            parts.tfidf_index.insert(id.clone(), TfidfVector::default());
            GraphNode::design_case(&id, &id)
        } else {
            let t = format!("t{i:02}");
            GraphNode::linking(LinkingKind::Term, &t, &t, vec![t.clone()])
        };
        ids.push((node.id.clone(), node.kind));
        parts.nodes.push(node);
    }
    let mut seen = BTreeSet::new();
    for _ in 0..max_edges * 3 {
        if seen.len() >= max_edges {
            break;
        }
        let a = rng.gen_range(0..n_nodes);
        let b = rng.gen_range(0..n_nodes);
        let (a, b) = (a.min(b), a.max(b));
        if a == b || !seen.insert((a, b)) {
            continue;
        }
        let level = match (ids[a].1, ids[b].1) {
            (NodeKind::DesignCase, NodeKind::DesignCase) => RelationLevel::L1,
            (NodeKind::Linking, NodeKind::Linking) => {
                seen.remove(&(a, b));
                continue;
            }
            _ => RelationLevel::L2,
        };
        let weight = if coarse {
            rng.gen_range(1..=10) as f64 / 10.0
        } else {
            rng.gen_range(0.01..=1.0)
        };
        parts.edges.push(GraphEdge::new(
            ids[a].0.clone(),
            ids[b].0.clone(),
            level,
            weight,
            vec![],
        ));
    }
    GraphSnapshot::from_parts(parts).unwrap()
}

/// Direct hits on 1–3 random documents with random scores.
pub fn random_hits(snap: &GraphSnapshot, seed: u64) -> Vec<Hit> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let docs: Vec<&str> = snap.docs().iter().map(|d| d.id.as_str()).collect();
    let k = rng.gen_range(1..=3.min(docs.len()));
    let mut chosen = BTreeSet::new();
    while chosen.len() < k {
        chosen.insert(docs[rng.gen_range(0..docs.len())]);
    }
    chosen
        .into_iter()
        .map(|d| Hit {
            doc_id: d.into(),
            kind: ResultKind::Direct,
            score: rng.gen_range(0.1..=1.0),
            origin: d.into(),
            nodes: vec![],
            cost: 0.0,
            matched_nodes: vec![],
        })
        .collect()
}

/// Best path to a document found by enumerating every loop-free path.
#[derive(Debug, Clone, PartialEq)]
pub struct ReferencePath {
    pub cost: f64,
    pub nodes: Vec<String>,
    pub score: f64,
}

fn prefer(a: &ReferencePath, b: &ReferencePath) -> bool {
    if a.cost < b.cost - COST_EPS {
        true
    } else if b.cost < a.cost - COST_EPS {
        false
    } else {
        a.nodes < b.nodes
    }
}

/// Exhaustive enumeration of loop-free paths from every hit, keeping per
/// reached non-hit document the cheapest path (ties: smaller id sequence).
pub fn reference_transitive(
    snap: &GraphSnapshot,
    hits: &[Hit],
    beta: f64,
    radius: f64,
    max_hops: usize,
) -> BTreeMap<String, ReferencePath> {
    let mut adj: BTreeMap<&str, Vec<(&str, f64)>> = BTreeMap::new();
    for e in snap.edges() {
        adj.entry(&e.src).or_default().push((&e.dst, e.weight));
        adj.entry(&e.dst).or_default().push((&e.src, e.weight));
    }
    let direct: BTreeSet<&str> = hits.iter().map(|h| h.doc_id.as_str()).collect();
    let mut best: BTreeMap<String, ReferencePath> = BTreeMap::new();

    #[allow(clippy::too_many_arguments)]
    fn walk<'a>(
        adj: &BTreeMap<&'a str, Vec<(&'a str, f64)>>,
        path: &mut Vec<&'a str>,
        cost: f64,
        product: f64,
        origin_score: f64,
        limits: (f64, f64, usize),
        direct: &BTreeSet<&str>,
        best: &mut BTreeMap<String, ReferencePath>,
    ) {
        let (beta, radius, max_hops) = limits;
        let here = *path.last().unwrap();
        if path.len() > 1 && here.starts_with("doc:") && !direct.contains(&here[4..]) {
            let cand = ReferencePath {
                cost,
                nodes: path.iter().map(|s| s.to_string()).collect(),
                score: origin_score * product,
            };
            let doc = here[4..].to_string();
            match best.get(&doc) {
                Some(cur) if !prefer(&cand, cur) => {}
                _ => {
                    best.insert(doc, cand);
                }
            }
        }
        if path.len() - 1 == max_hops {
            return;
        }
        for &(next, w) in adj.get(here).map(Vec::as_slice).unwrap_or(&[]) {
            if path.contains(&next) {
                continue;
            }
            let c = cost + (1.0 - w) + beta;
            if c > radius + COST_EPS {
                continue;
            }
            path.push(next);
            walk(
                adj,
                path,
                c,
                product * w,
                origin_score,
                limits,
                direct,
                best,
            );
            path.pop();
        }
    }

    for h in hits {
        let start = node_id::design_case(&h.doc_id);
        let Some(start) = adj.keys().find(|k| **k == start).copied() else {
            continue;
        };
        let mut path = vec![start];
        walk(
            &adj,
            &mut path,
            0.0,
            1.0,
            h.score,
            (beta, radius, max_hops),
            &direct,
            &mut best,
        );
    }
    best
}

/// Ids of an element chain, for building small forests in tests.
pub fn chain_forest(ids: &[(&str, ElementKind)]) -> ProjectForest {
    let mut raw = Vec::new();
    for (i, (id, kind)) in ids.iter().enumerate() {
        let parent = if i == 0 { None } else { Some(ids[i - 1].0) };
        raw.push(ProjectElement::new(*id, *id, *kind, parent));
    }
    ProjectForest::validate(raw).0
}

/// Small hand-made snapshot. Names starting with `d` become documents, `e`
/// entities, `p` project elements (all roots), anything else a term.
pub fn manual_snapshot(nodes: &[&str], edges: &[(&str, &str, f64)]) -> GraphSnapshot {
    let id = |n: &str| -> String {
        match n.chars().next() {
            Some('d') => node_id::design_case(n),
            Some('e') => node_id::linking(LinkingKind::Entity, n),
            Some('p') => node_id::project_element(n),
            _ => node_id::linking(LinkingKind::Term, n),
        }
    };
    let mut parts = SnapshotParts::empty(BuildConfig::default());
    let mut raw_forest = Vec::new();
    for &n in nodes {
        let node = match n.chars().next() {
            Some('d') => {
                parts.docs.push(DesignCaseDoc::new(n, n));
                parts.tfidf_index.insert(n.into(), TfidfVector::default());
                GraphNode::design_case(n, n)
            }
            Some('e') => GraphNode::linking(LinkingKind::Entity, n, n, vec![n.into()]),
            Some('p') => {
                raw_forest.push(ProjectElement::new(n, n, ElementKind::Module, None));
                GraphNode::project_element(n, n)
            }
            _ => GraphNode::linking(LinkingKind::Term, n, n, vec![n.into()]),
        };
        parts.nodes.push(node);
    }
    parts.forest = ProjectForest::validate(raw_forest).0;
    for &(a, b, w) in edges {
        let level = if a.starts_with('d') && b.starts_with('d') {
            RelationLevel::L1
        } else {
            RelationLevel::L2
        };
        parts
            .edges
            .push(GraphEdge::new(id(a), id(b), level, w, vec![]));
    }
    GraphSnapshot::from_parts(parts).unwrap()
}

pub fn direct_hit(doc: &str, score: f64) -> Hit {
    Hit {
        doc_id: doc.into(),
        kind: ResultKind::Direct,
        score,
        origin: doc.into(),
        nodes: vec![],
        cost: 0.0,
        matched_nodes: vec![],
    }
}

/// Compares `expand_transitive` with exhaustive enumeration on one random graph.
pub fn check_paths(seed: u64, params: &SearchParams) -> Result<(), String> {
    let snap = random_snapshot(seed);
    let hits = random_hits(&snap, seed);
    let got: BTreeMap<String, _> = expand_transitive(&hits, &snap, params)
        .into_iter()
        .map(|h| (h.doc_id.clone(), h))
        .collect();
    let want = reference_transitive(&snap, &hits, params.beta, params.radius, params.max_hops);
    let got_ids: BTreeSet<&String> = got.keys().collect();
    let want_ids: BTreeSet<&String> = want.keys().collect();
    if got_ids != want_ids {
        return Err(format!(
            "seed {seed}: reached {got_ids:?}, expected {want_ids:?}"
        ));
    }
    for (doc, w) in &want {
        let g = &got[doc];
        if (g.cost - w.cost).abs() > 1e-9 {
            return Err(format!("seed {seed} {doc}: cost {} vs {}", g.cost, w.cost));
        }
        if g.nodes != w.nodes {
            return Err(format!(
                "seed {seed} {doc}: path {:?} vs {:?}",
                g.nodes, w.nodes
            ));
        }
        if (g.score - w.score).abs() > 1e-9 {
            return Err(format!(
                "seed {seed} {doc}: score {} vs {}",
                g.score, w.score
            ));
        }
    }
    Ok(())
}

/// Compares `compute_tfidf` with the brute-force reference on one token corpus.
pub fn check_tfidf(docs: &[Vec<String>]) -> Result<(), String> {
    let terms: Vec<DocTerms> = docs
        .iter()
        .enumerate()
        .map(|(i, toks)| {
            let mut counts = BTreeMap::new();
            for t in toks {
                *counts.entry(t.clone()).or_insert(0u32) += 1;
            }
            DocTerms::new(format!("d{i}"), counts)
        })
        .collect();
    let (vectors, stats) = compute_tfidf(&terms).map_err(|e| e.to_string())?;
    let want = reference_tfidf(docs);
    for (v, w) in vectors.iter().zip(&want) {
        if v.weights.len() != w.len() {
            return Err(format!(
                "{}: {} terms vs {}",
                v.doc_id,
                v.weights.len(),
                w.len()
            ));
        }
        for (t, wt) in w {
            let got = v.weight(t);
            if (got - wt).abs() > 1e-9 {
                return Err(format!("{} {t}: {got} vs {wt}", v.doc_id));
            }
        }
    }
    for (t, s) in &stats {
        let df = docs.iter().filter(|d| d.contains(t)).count() as u32;
        let total = docs.iter().flatten().filter(|x| *x == t).count() as u64;
        if s.df != df || s.total_count != total {
            return Err(format!("{t}: df {} total {}", s.df, s.total_count));
        }
    }
    Ok(())
}

fn expected_vector(snap: &GraphSnapshot, doc: &DesignCaseDoc) -> BTreeMap<String, f64> {
    let mut counts: BTreeMap<String, u32> = BTreeMap::new();
    for section in doc.sections() {
        let ts = llg_core::textmine::normalize(section, &doc.language, snap.resources());
        for (g, c) in llg_core::textmine::extract_ngrams(&ts.tokens, snap.config().n_max).unwrap() {
            *counts.entry(g).or_default() += c;
        }
    }
    let n = snap.corpus_size() as f64;
    let raw: BTreeMap<String, f64> = counts
        .iter()
        .map(|(t, &c)| {
            let df = snap.term_stats().get(t).map_or(0.0, |s| f64::from(s.df));
            let idf = ((1.0 + n) / (1.0 + df)).ln() + 1.0;
            (t.clone(), (1.0 + f64::from(c).ln()) * idf)
        })
        .collect();
    let norm = raw.values().map(|w| w * w).sum::<f64>().sqrt();
    raw.into_iter().map(|(t, w)| (t, w / norm)).collect()
}

/// Every way `after = add_document(before, doc)` departs from the build
/// rules under frozen statistics. The vector is recomputed from the stated
/// formulas; entity matches are taken from `expected_entities`.
pub fn l3_violations(
    before: &GraphSnapshot,
    after: &GraphSnapshot,
    doc: &DesignCaseDoc,
    expected_entities: &[&str],
) -> Vec<String> {
    let mut v = Vec::new();
    let config = before.config();
    let me = format!("doc:{}", doc.id);
    let expected = expected_vector(before, doc);
    let Some(stored) = after.doc_vector(&doc.id) else {
        return vec![format!("{} has no vector", doc.id)];
    };
    if stored.weights.len() != expected.len() {
        v.push(format!(
            "vector has {} terms, expected {}",
            stored.weights.len(),
            expected.len()
        ));
    }
    for (t, w) in &expected {
        if (stored.weight(t) - w).abs() > 1e-9 {
            v.push(format!(
                "weight of '{t}' is {}, expected {w}",
                stored.weight(t)
            ));
        }
    }
    for e in before.edges() {
        if after.edge_between(&e.src, &e.dst) != Some(e) {
            v.push(format!("existing edge {}–{} changed", e.src, e.dst));
        }
    }
    for (id, vec) in before.tfidf_index() {
        if after.doc_vector(id) != Some(vec) {
            v.push(format!("vector of {id} changed"));
        }
    }
    for (t, s) in before.term_stats() {
        if after.term_stats().get(t).map(|x| x.idf) != Some(s.idf) {
            v.push(format!("idf of '{t}' changed"));
        }
    }
    let new_edges: Vec<&GraphEdge> = after
        .edges()
        .iter()
        .filter(|e| before.edge_between(&e.src, &e.dst).is_none())
        .collect();
    for e in &new_edges {
        if e.level != RelationLevel::L3 {
            v.push(format!(
                "new edge {}–{} has level {:?}",
                e.src, e.dst, e.level
            ));
        }
        if e.src != me && e.dst != me {
            v.push(format!("new edge {}–{} does not touch {me}", e.src, e.dst));
        }
    }
    let by_other: BTreeMap<&str, f64> =
        new_edges.iter().map(|e| (e.other(&me), e.weight)).collect();
    let mut explained: BTreeSet<&str> = BTreeSet::new();
    for other in before.docs() {
        let c: f64 = expected
            .iter()
            .filter_map(|(t, w)| {
                before
                    .doc_vector(&other.id)
                    .unwrap()
                    .weights
                    .get(t)
                    .map(|x| w * x)
            })
            .sum();
        let id = format!("doc:{}", other.id);
        match by_other.get(id.as_str()) {
            Some(w) if c < config.tau_sim || (w - c).abs() > 1e-9 => {
                v.push(format!("similarity edge to {id}: weight {w}, cosine {c}"));
            }
            None if c >= config.tau_sim => v.push(format!("missing similarity edge to {id} ({c})")),
            _ => {}
        }
        if let Some((k, _)) = by_other.get_key_value(id.as_str()) {
            explained.insert(k);
        }
    }
    for node in after.nodes().iter().filter(|n| n.kind == NodeKind::Linking) {
        let edge = by_other.get_key_value(node.id.as_str());
        match node.linking_kind.unwrap() {
            LinkingKind::Term | LinkingKind::Ngram => {
                let w = expected.get(&node.payload_ref).copied().unwrap_or(0.0);
                match edge {
                    Some((k, got)) => {
                        let want = (2.0 * w).min(config.term_node_weight_cap);
                        if w == 0.0 || (got - want).abs() > 1e-9 {
                            v.push(format!("term edge to {}: {got}, expected {want}", node.id));
                        }
                        explained.insert(k);
                    }
                    None if w > 0.0 && before.node(&node.id).is_some() => {
                        v.push(format!("missing term edge to {}", node.id));
                    }
                    None => {}
                }
            }
            LinkingKind::Entity => {
                let wanted = expected_entities
                    .iter()
                    .any(|e| format!("entity:{e}") == node.id);
                match edge {
                    Some((k, got)) => {
                        let entry = after
                            .gazetteer()
                            .entries
                            .iter()
                            .find(|e| format!("entity:{}", e.canonical) == node.id);
                        let want = entry.and_then(|e| e.weight).unwrap_or(config.entity_weight);
                        if !wanted || *got != want {
                            v.push(format!(
                                "entity edge to {}: {got}, expected {want}",
                                node.id
                            ));
                        }
                        explained.insert(k);
                    }
                    None if wanted => v.push(format!("missing entity edge to {}", node.id)),
                    None => {}
                }
            }
        }
    }
    for el in &doc.project_path {
        let id = format!("pe:{el}");
        match by_other.get_key_value(id.as_str()) {
            Some((k, w)) => {
                if *w != config.project_edge_weight {
                    v.push(format!("project edge to {id}: {w}"));
                }
                explained.insert(k);
            }
            None => v.push(format!("missing project edge to {id}")),
        }
    }
    for other in by_other.keys() {
        if !explained.contains(other) {
            v.push(format!("unexpected edge to {other}"));
        }
    }
    v
}

/// Misspellings (deletions, adjacent transpositions, one substitution) of
/// every fixture query token and dictionary term, plus the words themselves.
pub fn suggestion_inputs(dict: &llg_core::Dictionary) -> BTreeSet<String> {
    fn typos(word: &str) -> Vec<String> {
        let chars: Vec<char> = word.chars().collect();
        let mut out = Vec::new();
        for i in 0..chars.len() {
            let mut c = chars.clone();
            c.remove(i);
            out.push(c.into_iter().collect());
            if i + 1 < chars.len() {
                let mut c = chars.clone();
                c.swap(i, i + 1);
                out.push(c.into_iter().collect());
            }
            let mut c = chars.clone();
            c[i] = if c[i] == 'x' { 'y' } else { 'x' };
            out.push(c.into_iter().collect());
        }
        out
    }
    let mut words: BTreeSet<String> = fixture_queries()
        .iter()
        .flat_map(|q| {
            q.split_whitespace()
                .map(str::to_lowercase)
                .collect::<Vec<_>>()
        })
        .collect();
    words.extend(dict.entries().keys().cloned());
    words
        .iter()
        .flat_map(|w| typos(w))
        .chain(words.iter().cloned())
        .collect()
}

/// Suggestions emitted over [`suggestion_inputs`] that yield no direct hit,
/// and the number of suggestions checked.
pub fn suggestion_violations(
    snap: &GraphSnapshot,
    dict: &llg_core::Dictionary,
) -> (Vec<String>, usize) {
    let params = SearchParams::default();
    let mut violations = Vec::new();
    let mut emitted = 0;
    for input in suggestion_inputs(dict) {
        for s in dict.suggest(&input, llg_core::assist::DEFAULT_SUGGESTIONS, snap) {
            emitted += 1;
            if s == input {
                violations.push(format!("{input} suggested itself"));
            }
            let hits = llg_core::search::parse_query(&s, snap)
                .map(|q| llg_core::search::direct_hits(&q, snap, &params))
                .unwrap_or_default();
            if hits.is_empty() {
                violations.push(format!("{input} -> {s} has no direct hit"));
            }
        }
    }
    (violations, emitted)
}

/// The new document used by incremental-insertion checks, with the
/// gazetteer entities it mentions.
pub fn incremental_doc() -> (DesignCaseDoc, Vec<&'static str>) {
    let mut d = DesignCaseDoc::new(
        "LL-100",
        "Tin whisker growth shorted adjacent pins of the IO pad after humidity storage.",
    );
    d.title = "Whisker short on pad ring".into();
    d.cause = "Pure tin plating without nickel underlayer; ESD clamp stressed by the short.".into();
    d.solution = "Switched to matte tin over nickel and added whisker inspection.".into();
    d.project_path = vec!["P2".into(), "P2-IO".into(), "P2-IO-PAD".into()];
    (d, vec!["ESD", "pad ring"])
}
