mod support;

use std::collections::BTreeSet;

use llg_core::eval::{
    compare_kpi, generate_synthetic_corpus, keyword_search, EvalError, SynthParams,
};
use llg_core::search::{parse_query, retrieve};
use llg_core::{build_snapshot, BuildConfig, Corpus, ResultKind, SearchParams};

fn synthetic(p: &SynthParams) -> (llg_core::eval::SyntheticCorpus, llg_core::GraphSnapshot) {
    let syn = generate_synthetic_corpus(p).unwrap();
    let corpus = Corpus {
        docs: syn.docs.clone(),
        forest: syn.forest.clone(),
        resources: support::fixture_resources(),
        gazetteer: syn.gazetteer.clone(),
    };
    assert!(corpus.validate().is_accepted());
    let snap = build_snapshot(&corpus, &BuildConfig::default(), None).unwrap();
    (syn, snap)
}

#[test]
fn synthetic_uplift_reaches_fifty_percent() {
    let (syn, snap) = synthetic(&SynthParams::default());
    let queries: Vec<&str> = syn.queries.iter().map(|q| q.query.as_str()).collect();
    let report = compare_kpi(&queries, &syn.docs, &snap, &SearchParams::default()).unwrap();
    assert_eq!(report.rows.len(), 22);
    assert!(report.rows.iter().all(|r| !r.flagged));
    assert!(
        report.average_uplift_pct >= 50.0,
        "average uplift {:.1}%",
        report.average_uplift_pct
    );
}

#[test]
fn planted_chains_are_found_transitively() {
    let (syn, snap) = synthetic(&SynthParams::default());
    let params = SearchParams::default();
    for q in &syn.queries {
        let query = parse_query(&q.query, &snap).unwrap();
        let (direct, transitive) = retrieve(&query, &snap, &params).unwrap();
        let direct_ids: BTreeSet<&str> = direct.iter().map(|h| h.doc_id.as_str()).collect();
        let anchors: BTreeSet<&str> = q.anchors.iter().map(String::as_str).collect();
        assert_eq!(direct_ids, anchors, "{}", q.query);
        let trans: BTreeSet<&str> = transitive
            .iter()
            .inspect(|h| assert_eq!(h.kind, ResultKind::Transitive))
            .map(|h| h.doc_id.as_str())
            .collect();
        for d in &q.keyword_invisible {
            assert!(trans.contains(d.as_str()), "{}: {d} not reached", q.query);
        }
    }
}

#[test]
fn transitive_results_are_outside_the_keyword_set() {
    let (syn, snap) = synthetic(&SynthParams::default());
    for q in syn.queries.iter().take(5) {
        let keyword: BTreeSet<String> = keyword_search(&q.query, &syn.docs).into_iter().collect();
        let query = parse_query(&q.query, &snap).unwrap();
        let (_, transitive) = retrieve(&query, &snap, &SearchParams::default()).unwrap();
        assert!(transitive.iter().all(|h| !keyword.contains(&h.doc_id)));
    }
}

#[test]
fn strict_similarity_threshold_keeps_evaluating() {
    let corpus = support::fixture_corpus();
    let config = BuildConfig {
        tau_sim: 1.0,
        ..BuildConfig::default()
    };
    let snap = build_snapshot(&corpus, &config, None).unwrap();
    let queries = support::fixture_queries();
    let report = compare_kpi(&queries, &corpus.docs, &snap, &SearchParams::default()).unwrap();
    assert_eq!(report.rows.len(), queries.len());
    let eligible: Vec<f64> = report.rows.iter().filter_map(|r| r.uplift_pct).collect();
    if eligible.is_empty() {
        assert_eq!(report.average_uplift_pct, 0.0);
    } else {
        let mean = eligible.iter().sum::<f64>() / eligible.len() as f64;
        assert!((report.average_uplift_pct - mean).abs() < 1e-9);
    }
    for r in &report.rows {
        assert_eq!(r.flagged, r.keyword_count == 0);
    }
}

#[test]
fn empty_query_list_is_an_error() {
    let snap = support::fixture_snapshot();
    let none: [&str; 0] = [];
    assert_eq!(
        compare_kpi(&none, snap.docs(), &snap, &SearchParams::default()),
        Err(EvalError::NoQueries)
    );
}

#[test]
fn unknown_queries_count_as_zero_graph_results() {
    let snap = support::fixture_snapshot();
    let report = compare_kpi(
        &["the of and", "qqqzzz"],
        snap.docs(),
        &snap,
        &SearchParams::default(),
    )
    .unwrap();
    assert!(report
        .rows
        .iter()
        .all(|r| r.graph_total() == 0 && r.flagged));
    assert_eq!(report.average_uplift_pct, 0.0);
}

#[test]
fn other_seeds_also_clear_the_floor() {
    for seed in [1, 7, 1234] {
        let (syn, snap) = synthetic(&SynthParams {
            seed,
            ..SynthParams::default()
        });
        let queries: Vec<&str> = syn.queries.iter().map(|q| q.query.as_str()).collect();
        let report = compare_kpi(&queries, &syn.docs, &snap, &SearchParams::default()).unwrap();
        assert!(
            report.average_uplift_pct >= 50.0,
            "seed {seed}: {:.1}%",
            report.average_uplift_pct
        );
    }
}
