//! Operations shared by the CLI and the HTTP service.

use std::time::Instant;

use anyhow::{bail, Context, Result};
use llg_core::eval::{
    compare_kpi, generate_synthetic_corpus, KpiReport, SynthParams, SyntheticCorpus,
};
use llg_core::feedback::DEFAULT_ETA;
use llg_core::{
    apply_feedback, build_snapshot, ApplyReport, BuildConfig, Corpus, FeedbackLog, GraphSnapshot,
    SearchParams,
};
use serde::Serialize;

/// Current UTC time as RFC 3339.
pub fn now_rfc3339() -> String {
    chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true)
}

/// The corpus a snapshot was built from, including incrementally added docs.
pub fn corpus_of(snap: &GraphSnapshot) -> Corpus {
    Corpus {
        docs: snap.docs().to_vec(),
        forest: snap.forest().clone(),
        resources: snap.resources().clone(),
        gazetteer: snap.gazetteer().clone(),
    }
}

/// Builds and stamps a snapshot, refusing corpora with validation errors.
pub fn build(
    corpus: &Corpus,
    config: &BuildConfig,
    previous_version: Option<u64>,
) -> Result<GraphSnapshot> {
    let report = corpus.validate();
    if !report.is_accepted() {
        let first = &report.errors[0];
        bail!(
            "corpus has {} error(s), first at {}: {}",
            report.errors.len(),
            first.locator,
            first.message
        );
    }
    let snap = build_snapshot(corpus, config, previous_version).context("building graph")?;
    Ok(snap.with_built_at(now_rfc3339()))
}

#[derive(Debug, Clone, Serialize)]
pub struct RebuildReport {
    pub snapshot_version: u64,
    pub rebuild_seconds: f64,
    #[serde(flatten)]
    pub feedback: ApplyReport,
}

/// Full rebuild from the snapshot's documents, then a replay of the whole
/// feedback log against the fresh weights. The result is one version past
/// `snap`.
pub fn rebuild(snap: &GraphSnapshot, log: &FeedbackLog) -> Result<(GraphSnapshot, RebuildReport)> {
    let started = Instant::now();
    let fresh = build_snapshot(&corpus_of(snap), snap.config(), Some(snap.version()))
        .context("rebuilding graph")?;
    let (replayed, feedback) = apply_feedback(&fresh, log, DEFAULT_ETA)?;
    let mut parts = replayed.into_parts();
    parts.version = snap.version() + 1;
    let next = GraphSnapshot::from_parts(parts)?.with_built_at(now_rfc3339());
    let report = RebuildReport {
        snapshot_version: next.version(),
        rebuild_seconds: started.elapsed().as_secs_f64(),
        feedback,
    };
    Ok((next, report))
}

/// A generated corpus, its snapshot, and the KPI comparison over its queries.
pub struct SyntheticRun {
    pub corpus: SyntheticCorpus,
    pub snapshot: GraphSnapshot,
    pub report: KpiReport,
}

pub fn run_synthetic(
    p: &SynthParams,
    config: &BuildConfig,
    params: &SearchParams,
) -> Result<SyntheticRun> {
    let syn = generate_synthetic_corpus(p)?;
    let corpus = Corpus {
        docs: syn.docs.clone(),
        forest: syn.forest.clone(),
        resources: crate::resources::bundled_resources(),
        gazetteer: syn.gazetteer.clone(),
    };
    let started = Instant::now();
    let snapshot = build(&corpus, config, None)?;
    let build_seconds = started.elapsed().as_secs_f64();
    let queries: Vec<&str> = syn.queries.iter().map(|q| q.query.as_str()).collect();
    let mut report = compare_kpi(&queries, &syn.docs, &snapshot, params)?;
    report.rebuild_seconds = build_seconds;
    Ok(SyntheticRun {
        corpus: syn,
        snapshot,
        report,
    })
}

/// KPI report as CSV with a header row; flagged rows have an empty uplift.
pub fn kpi_csv(report: &KpiReport) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "query",
        "keyword_count",
        "direct",
        "transitive",
        "uplift_pct",
    ])
    .expect("writing to memory");
    for r in &report.rows {
        let uplift = r.uplift_pct.map(|u| format!("{u:.2}")).unwrap_or_default();
        w.write_record([
            r.query.clone(),
            r.keyword_count.to_string(),
            r.graph_direct_count.to_string(),
            r.graph_transitive_count.to_string(),
            uplift,
        ])
        .expect("writing to memory");
    }
    String::from_utf8(w.into_inner().expect("flushing to memory")).expect("csv output is UTF-8")
}
