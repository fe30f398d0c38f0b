use std::fs;
use std::path::{Path, PathBuf};

use clap::Parser;
use llg::cli::{parse_synth_params, run, Cli};
use llg::store;

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

fn llg(args: &[&str]) -> anyhow::Result<String> {
    let cli = Cli::try_parse_from(std::iter::once("llg").chain(args.iter().copied()))?;
    let mut out = Vec::new();
    run(cli, &mut out)?;
    Ok(String::from_utf8(out).unwrap())
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn built(dir: &Path) -> PathBuf {
    let f = fixtures();
    let corpus = dir.join("corpus.json");
    let snap = dir.join("snap.json");
    llg(&[
        "ingest",
        "--docs",
        p(&f.join("docs.jsonl")),
        "--project",
        p(&f.join("project.json")),
        "--gazetteer",
        p(&f.join("gazetteer.json")),
        "--abbreviations",
        p(&f.join("abbreviations.json")),
        "--out",
        p(&corpus),
    ])
    .unwrap();
    llg(&["build", "--corpus", p(&corpus), "--out", p(&snap)]).unwrap();
    snap
}

#[test]
fn ingest_build_search() {
    let dir = tempfile::tempdir().unwrap();
    let snap = built(dir.path());
    let graph = dir.path().join("g.json");
    let out = llg(&[
        "search",
        "--snap",
        p(&snap),
        "clock skew",
        "--emit-graph",
        p(&graph),
    ])
    .unwrap();
    assert!(out.contains("LL-001") && out.contains("[direct"));
    let g: serde_json::Value = serde_json::from_slice(&fs::read(&graph).unwrap()).unwrap();
    assert_eq!(g["nodes"][0]["id"], "query");
    let json = llg(&[
        "search",
        "--snap",
        p(&snap),
        "bandgap",
        "--json",
        "--limit",
        "3",
    ])
    .unwrap();
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v["results"].as_array().unwrap().len(), 3);
    assert!(llg(&["search", "--snap", p(&snap), "zzzz"]).is_err());
}

#[test]
fn ingest_rejects_a_bad_corpus() {
    let dir = tempfile::tempdir().unwrap();
    let docs = dir.path().join("d.jsonl");
    fs::write(
        &docs,
        "{\"id\":\"a\",\"failure_description\":\"x\",\"project_path\":[\"M9\"]}\n",
    )
    .unwrap();
    let err = llg(&[
        "ingest",
        "--docs",
        p(&docs),
        "--project",
        p(&fixtures().join("project.json")),
        "--out",
        p(&dir.path().join("c.json")),
    ]);
    assert!(err.is_err());
    assert!(!dir.path().join("c.json").exists());
}

#[test]
fn add_then_search_new_term() {
    let dir = tempfile::tempdir().unwrap();
    let snap = built(dir.path());
    let doc = dir.path().join("new.json");
    fs::write(
        &doc,
        r#"{"id": "LL-200", "title": "Whiskers", "failure_description": "Tin whisker growth shorted pins.", "project_path": ["P2", "P2-IO"]}"#,
    )
    .unwrap();
    llg(&["add", "--snap", p(&snap), "--doc", p(&doc)]).unwrap();
    assert_eq!(store::load_snapshot(&snap).unwrap().version(), 2);
    let json = llg(&["search", "--snap", p(&snap), "whisker", "--json"]).unwrap();
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v["results"][0]["doc_id"], "LL-200");
    assert_eq!(v["results"][0]["kind"], "direct");
}

#[test]
fn rebuild_replays_feedback() {
    let dir = tempfile::tempdir().unwrap();
    let snap = built(dir.path());
    let log = dir.path().join("f.jsonl");
    fs::write(
        &log,
        "{\"id\":1,\"query_raw\":\"clock\",\"doc_id\":\"LL-001\",\"relevant\":true,\"value_added\":5,\"result_kind\":\"direct\",\"path_edges\":[],\"created_at\":\"t\"}\n",
    )
    .unwrap();
    let out_snap = dir.path().join("rebuilt.json");
    let out = llg(&[
        "rebuild",
        "--snap",
        p(&snap),
        "--feedback",
        p(&log),
        "--out",
        p(&out_snap),
    ])
    .unwrap();
    assert!(out.contains("1 feedback records applied"), "{out}");
    let next = store::load_snapshot(&out_snap).unwrap();
    assert_eq!(next.version(), 2);
    assert_eq!(next.feedback_watermark(), 1);
}

#[test]
fn eval_writes_csv_and_json() {
    let dir = tempfile::tempdir().unwrap();
    let snap = built(dir.path());
    let csv = dir.path().join("k.csv");
    let json = dir.path().join("k.json");
    let out = llg(&[
        "eval",
        "--snap",
        p(&snap),
        "--queries",
        p(&fixtures().join("queries.txt")),
        "--csv",
        p(&csv),
        "--json",
        p(&json),
    ])
    .unwrap();
    assert!(out.contains("average uplift"));
    let text = fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with("query,keyword_count,direct,transitive,uplift_pct\n"));
    assert_eq!(text.lines().count(), 23);
    let report: llg_core::eval::KpiReport =
        serde_json::from_slice(&fs::read(&json).unwrap()).unwrap();
    assert_eq!(report.rows.len(), 22);
}

#[test]
fn synthetic_eval() {
    let out = llg(&["eval", "--synthetic", "seed=42"]).unwrap();
    assert!(out.contains("22 queries"), "{out}");
    assert!(llg(&["eval"]).is_err());
}

#[test]
fn synth_param_parsing() {
    let p = parse_synth_params("seed=7, doc_count=200,chain_fraction=0.4").unwrap();
    assert_eq!((p.seed, p.doc_count, p.chain_fraction), (7, 200, 0.4));
    assert_eq!(p.query_count, 22);
    assert!(parse_synth_params("seed").is_err());
    assert!(parse_synth_params("colour=3").is_err());
    assert!(parse_synth_params("seed=x").is_err());
}
