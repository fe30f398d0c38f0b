//! Command-line interface.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use llg_core::eval::{compare_kpi, KpiReport, SynthParams};
use llg_core::search::extract_subgraph;
use llg_core::{
    add_document, search, BuildConfig, Corpus, DesignCaseDoc, Dictionary, SearchError, SearchParams,
};

use crate::feedback_store::{read_log, FeedbackStore};
use crate::service::{router, AppState};
use crate::{ingest, ops, resources, store};

#[derive(Debug, Parser)]
#[command(
    name = "llg",
    version,
    about = "Explainable graph search over lessons-learned reports"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse and validate documents and project metadata into a corpus file.
    Ingest(IngestArgs),
    /// Build a graph snapshot from a corpus file.
    Build(BuildArgs),
    /// Run one query against a snapshot.
    Search(SearchArgs),
    /// Add documents to a snapshot without a full rebuild.
    Add(AddArgs),
    /// Full rebuild with the feedback log replayed.
    Rebuild(RebuildArgs),
    /// Compare graph search with the keyword baseline.
    Eval(EvalArgs),
    /// Serve the HTTP API.
    Serve(ServeArgs),
}

#[derive(Debug, Args)]
pub struct IngestArgs {
    #[arg(long)]
    pub docs: PathBuf,
    #[arg(long)]
    pub project: PathBuf,
    #[arg(long)]
    pub gazetteer: Option<PathBuf>,
    /// JSON map of abbreviation to expansion.
    #[arg(long)]
    pub abbreviations: Option<PathBuf>,
    /// Directory of `<lang>.txt` stopword lists, added to the bundled English list.
    #[arg(long)]
    pub stopwords: Option<PathBuf>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct BuildArgs {
    #[arg(long)]
    pub corpus: PathBuf,
    /// JSON build configuration; defaults apply to missing fields.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct ParamArgs {
    /// JSON search parameters; defaults apply to missing fields.
    #[arg(long)]
    pub params: Option<PathBuf>,
    #[arg(long)]
    pub limit: Option<usize>,
}

impl ParamArgs {
    fn load(&self) -> Result<SearchParams> {
        let mut p: SearchParams = match &self.params {
            Some(path) => read_json(path)?,
            None => SearchParams::default(),
        };
        if let Some(l) = self.limit {
            p.limit = l;
        }
        p.validate()?;
        Ok(p)
    }
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    #[arg(long)]
    pub snap: PathBuf,
    pub query: String,
    /// Write the result subgraph as JSON.
    #[arg(long)]
    pub emit_graph: Option<PathBuf>,
    /// Print results as JSON instead of a table.
    #[arg(long)]
    pub json: bool,
    #[command(flatten)]
    pub params: ParamArgs,
}

#[derive(Debug, Args)]
pub struct AddArgs {
    #[arg(long)]
    pub snap: PathBuf,
    /// One JSON document, or one per line.
    #[arg(long)]
    pub doc: PathBuf,
    /// Output snapshot; defaults to overwriting `--snap`.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RebuildArgs {
    #[arg(long)]
    pub snap: PathBuf,
    #[arg(long)]
    pub feedback: Option<PathBuf>,
    /// Output snapshot; defaults to overwriting `--snap`.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[arg(long, required_unless_present = "synthetic")]
    pub snap: Option<PathBuf>,
    /// One query per line.
    #[arg(long, required_unless_present = "synthetic")]
    pub queries: Option<PathBuf>,
    /// Evaluate a generated corpus instead, e.g. `seed=42` or
    /// `seed=7,doc_count=200,chain_fraction=0.4`.
    #[arg(long)]
    pub synthetic: Option<String>,
    #[arg(long)]
    pub csv: Option<PathBuf>,
    #[arg(long)]
    pub json: Option<PathBuf>,
    #[command(flatten)]
    pub params: ParamArgs,
}

#[derive(Debug, Args)]
pub struct ServeArgs {
    #[arg(long)]
    pub snap: PathBuf,
    #[arg(long, default_value_t = 8080)]
    pub port: u16,
    #[arg(long, default_value = "127.0.0.1")]
    pub host: String,
    /// Feedback log; defaults to `<snap>.feedback.jsonl`.
    #[arg(long)]
    pub feedback: Option<PathBuf>,
    /// Token required by POST /api/rebuild; rebuild is disabled without one.
    #[arg(long, env = "LLG_ADMIN_TOKEN", hide_env_values = true)]
    pub admin_token: Option<String>,
    #[command(flatten)]
    pub params: ParamArgs,
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

/// Parses `key=value` pairs separated by commas into generator parameters.
pub fn parse_synth_params(spec: &str) -> Result<SynthParams> {
    let mut p = SynthParams::default();
    for pair in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let Some((key, value)) = pair.split_once('=') else {
            bail!("expected key=value, got '{pair}'");
        };
        let value = value.trim();
        let bad = || format!("invalid value '{value}' for {key}");
        match key.trim() {
            "seed" => p.seed = value.parse().with_context(bad)?,
            "doc_count" => p.doc_count = value.parse().with_context(bad)?,
            "vocab_size" => p.vocab_size = value.parse().with_context(bad)?,
            "entity_count" => p.entity_count = value.parse().with_context(bad)?,
            "chain_fraction" => p.chain_fraction = value.parse().with_context(bad)?,
            "query_count" => p.query_count = value.parse().with_context(bad)?,
            other => bail!("unknown synthetic parameter '{other}'"),
        }
    }
    Ok(p)
}

/// Runs a command, writing human-readable output to `out`.
pub fn run(cli: Cli, out: &mut dyn Write) -> Result<()> {
    match cli.command {
        Command::Ingest(a) => ingest_cmd(a, out),
        Command::Build(a) => build_cmd(a, out),
        Command::Search(a) => search_cmd(a, out),
        Command::Add(a) => add_cmd(a, out),
        Command::Rebuild(a) => rebuild_cmd(a, out),
        Command::Eval(a) => eval_cmd(a, out),
        Command::Serve(a) => serve_cmd(a, out),
    }
}

fn ingest_cmd(a: IngestArgs, out: &mut dyn Write) -> Result<()> {
    let docs_file =
        fs::File::open(&a.docs).with_context(|| format!("opening {}", a.docs.display()))?;
    let (docs, mut report) = ingest::parse_documents(std::io::BufReader::new(docs_file));
    let project = fs::read_to_string(&a.project)
        .with_context(|| format!("reading {}", a.project.display()))?;
    let (forest, tree_report) = ingest::parse_project_tree(&project);
    report.merge(tree_report);
    let gazetteer = match &a.gazetteer {
        Some(p) => resources::load_gazetteer(p)?,
        None => Default::default(),
    };
    let corpus = Corpus {
        docs,
        forest,
        resources: resources::load_resources(a.stopwords.as_deref(), a.abbreviations.as_deref())?,
        gazetteer,
    };
    report.merge(corpus.validate());
    for w in &report.warnings {
        writeln!(out, "warning: {}: {}", w.locator, w.message)?;
    }
    for e in &report.errors {
        writeln!(out, "error: {}: {}", e.locator, e.message)?;
    }
    writeln!(
        out,
        "{} documents, {} project elements, {} errors, {} warnings",
        report.doc_count,
        report.element_count,
        report.errors.len(),
        report.warnings.len()
    )?;
    if !report.is_accepted() {
        bail!("corpus rejected");
    }
    store::save_corpus(&corpus, &a.out)?;
    writeln!(out, "wrote {}", a.out.display())?;
    Ok(())
}

fn build_cmd(a: BuildArgs, out: &mut dyn Write) -> Result<()> {
    let corpus = store::load_corpus(&a.corpus)?;
    let config: BuildConfig = match &a.config {
        Some(p) => read_json(p)?,
        None => BuildConfig::default(),
    };
    let started = std::time::Instant::now();
    let snap = ops::build(&corpus, &config, None)?;
    store::save_snapshot(&snap, &a.out)?;
    writeln!(
        out,
        "snapshot v{}: {} nodes, {} edges, built in {:.3}s -> {}",
        snap.version(),
        snap.node_count(),
        snap.edges().len(),
        started.elapsed().as_secs_f64(),
        a.out.display()
    )?;
    Ok(())
}

fn search_cmd(a: SearchArgs, out: &mut dyn Write) -> Result<()> {
    let params = a.params.load()?;
    let snap = store::load_snapshot(&a.snap)?;
    let outcome = match search(&a.query, &snap, &params) {
        Ok(o) => o,
        Err(SearchError::EmptyQuery { unknown_terms }) => {
            let dict = Dictionary::from_snapshot(&snap, params.tau_q);
            writeln!(out, "no searchable terms in '{}'", a.query)?;
            for t in &unknown_terms {
                let s = dict.suggest_normalized(t, llg_core::assist::DEFAULT_SUGGESTIONS);
                writeln!(
                    out,
                    "  {t}: did you mean {}",
                    if s.is_empty() {
                        "-".into()
                    } else {
                        s.join(", ")
                    }
                )?;
            }
            bail!("empty query");
        }
        Err(e) => return Err(e.into()),
    };
    let subgraph = extract_subgraph(&outcome.query, &outcome.results, &snap);
    if let Some(p) = &a.emit_graph {
        store::write_atomic(p, &serde_json::to_vec_pretty(&subgraph)?)?;
    }
    if a.json {
        let payload = serde_json::json!({
            "query_echo": a.query,
            "unknown_terms": outcome.query.unknown_terms,
            "snapshot_version": snap.version(),
            "direct_total": outcome.direct_total,
            "transitive_total": outcome.transitive_total,
            "results": outcome.results,
        });
        writeln!(out, "{}", serde_json::to_string_pretty(&payload)?)?;
        return Ok(());
    }
    if !outcome.query.unknown_terms.is_empty() {
        writeln!(
            out,
            "unknown terms: {}",
            outcome.query.unknown_terms.join(", ")
        )?;
    }
    writeln!(
        out,
        "{} direct, {} transitive (snapshot v{})",
        outcome.direct_total,
        outcome.transitive_total,
        snap.version()
    )?;
    for (i, r) in outcome.results.iter().enumerate() {
        let title = snap.doc(&r.doc_id).map_or("", |d| d.title.as_str());
        writeln!(
            out,
            "{:>3}. [{:<10}] {:.3}  {}  {}",
            i + 1,
            r.kind.as_str(),
            r.score,
            r.doc_id,
            title
        )?;
        writeln!(out, "      {}", r.explanation.text)?;
    }
    Ok(())
}

fn read_docs(path: &Path) -> Result<Vec<DesignCaseDoc>> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    if let Ok(doc) = serde_json::from_str::<DesignCaseDoc>(&text) {
        return Ok(vec![doc]);
    }
    let (docs, report) = ingest::parse_documents(text.as_bytes());
    if let Some(e) = report.errors.first() {
        bail!("{}: {}: {}", path.display(), e.locator, e.message);
    }
    if docs.is_empty() {
        bail!("{}: no documents", path.display());
    }
    Ok(docs)
}

fn add_cmd(a: AddArgs, out: &mut dyn Write) -> Result<()> {
    let mut snap = store::load_snapshot(&a.snap)?;
    for doc in read_docs(&a.doc)? {
        let id = doc.id.clone();
        snap = add_document(&snap, doc).with_context(|| format!("adding {id}"))?;
        writeln!(out, "added {id}")?;
    }
    let snap = snap.with_built_at(ops::now_rfc3339());
    let dest = a.out.as_ref().unwrap_or(&a.snap);
    store::save_snapshot(&snap, dest)?;
    writeln!(out, "snapshot v{} -> {}", snap.version(), dest.display())?;
    Ok(())
}

fn rebuild_cmd(a: RebuildArgs, out: &mut dyn Write) -> Result<()> {
    let snap = store::load_snapshot(&a.snap)?;
    let log = match &a.feedback {
        Some(p) => read_log(p)?,
        None => Default::default(),
    };
    let (next, report) = ops::rebuild(&snap, &log)?;
    for (id, reason) in &report.feedback.skipped {
        writeln!(out, "skipped feedback {id}: {reason}")?;
    }
    let dest = a.out.as_ref().unwrap_or(&a.snap);
    store::save_snapshot(&next, dest)?;
    writeln!(
        out,
        "snapshot v{} in {:.3}s: {} feedback records applied, {} edge updates -> {}",
        report.snapshot_version,
        report.rebuild_seconds,
        report.feedback.applied.len(),
        report.feedback.edge_updates,
        dest.display()
    )?;
    Ok(())
}

fn print_kpi(report: &KpiReport, out: &mut dyn Write) -> Result<()> {
    writeln!(
        out,
        "{:<32} {:>7} {:>6} {:>10} {:>9}",
        "query", "keyword", "direct", "transitive", "uplift"
    )?;
    for r in &report.rows {
        let uplift = r
            .uplift_pct
            .map_or_else(|| "n/a".to_string(), |u| format!("{u:.1}%"));
        writeln!(
            out,
            "{:<32} {:>7} {:>6} {:>10} {:>9}",
            r.query, r.keyword_count, r.graph_direct_count, r.graph_transitive_count, uplift
        )?;
    }
    let eligible = report.eligible_rows().count();
    writeln!(
        out,
        "average uplift {:.1}% over {eligible} of {} queries; rebuild {:.3}s",
        report.average_uplift_pct,
        report.rows.len(),
        report.rebuild_seconds
    )?;
    Ok(())
}

fn eval_cmd(a: EvalArgs, out: &mut dyn Write) -> Result<()> {
    let params = a.params.load()?;
    let report = if let Some(spec) = &a.synthetic {
        let p = parse_synth_params(spec)?;
        let run = ops::run_synthetic(&p, &BuildConfig::default(), &params)?;
        let truth: usize = run
            .corpus
            .queries
            .iter()
            .map(|q| q.keyword_invisible.len())
            .sum();
        writeln!(
            out,
            "synthetic corpus: seed {}, {} documents, {} queries, {} planted keyword-invisible matches",
            p.seed,
            run.corpus.docs.len(),
            run.corpus.queries.len(),
            truth
        )?;
        run.report
    } else {
        let (Some(snap_path), Some(queries_path)) = (&a.snap, &a.queries) else {
            bail!("--snap and --queries are required without --synthetic");
        };
        let snap = store::load_snapshot(snap_path)?;
        let text = fs::read_to_string(queries_path)
            .with_context(|| format!("reading {}", queries_path.display()))?;
        let queries: Vec<&str> = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty())
            .collect();
        let mut report = compare_kpi(&queries, snap.docs(), &snap, &params)?;
        // Rebuild latency: the time to produce the same graph again.
        let started = std::time::Instant::now();
        ops::rebuild(&snap, &Default::default())?;
        report.rebuild_seconds = started.elapsed().as_secs_f64();
        report
    };
    print_kpi(&report, out)?;
    if let Some(p) = &a.csv {
        store::write_atomic(p, ops::kpi_csv(&report).as_bytes())?;
    }
    if let Some(p) = &a.json {
        store::write_atomic(p, &serde_json::to_vec_pretty(&report)?)?;
    }
    Ok(())
}

fn serve_cmd(a: ServeArgs, out: &mut dyn Write) -> Result<()> {
    let params = a.params.load()?;
    let snap = store::load_snapshot(&a.snap)?;
    let feedback_path = a.feedback.clone().unwrap_or_else(|| {
        let mut p = a.snap.clone().into_os_string();
        p.push(".feedback.jsonl");
        PathBuf::from(p)
    });
    let feedback = FeedbackStore::open(&feedback_path)?;
    let mut state = AppState::new(Some(snap), params)
        .with_feedback(feedback)
        .with_snapshot_path(a.snap.clone());
    if let Some(t) = a.admin_token {
        state = state.with_admin_token(t);
    } else {
        log::warn!("no admin token set; POST /api/rebuild is disabled");
    }
    let addr = format!("{}:{}", a.host, a.port);
    writeln!(
        out,
        "serving {} on http://{addr} (feedback log {})",
        a.snap.display(),
        feedback_path.display()
    )?;
    out.flush()?;
    let runtime = tokio::runtime::Runtime::new()?;
    runtime.block_on(async move {
        let listener = tokio::net::TcpListener::bind(&addr)
            .await
            .with_context(|| format!("binding {addr}"))?;
        axum::serve(listener, router(Arc::new(state))).await?;
        Ok(())
    })
}
