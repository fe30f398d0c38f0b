//! HTTP API over an atomically swapped snapshot.
//!
//! Each request clones the current `Arc` once and answers from it, so a
//! response never mixes two versions. Rebuilds run beside live traffic and
//! publish with a single pointer swap.

use std::path::PathBuf;
use std::sync::{Arc, Mutex, RwLock};

use axum::extract::rejection::JsonRejection;
use axum::extract::{Path, Query, State};
use axum::http::{HeaderMap, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use llg_core::assist::DEFAULT_SUGGESTIONS;
use llg_core::search::{extract_subgraph, Subgraph};
use llg_core::{
    search, DesignCaseDoc, Dictionary, FeedbackDraft, FeedbackError, GraphSnapshot, SearchError,
    SearchParams, SearchResult,
};
use serde::{Deserialize, Serialize};

use crate::feedback_store::{FeedbackStore, RecordError};
use crate::ops;
use crate::store;

/// A published snapshot with its derived dictionary.
#[derive(Debug)]
pub struct Loaded {
    pub snapshot: GraphSnapshot,
    pub dictionary: Dictionary,
}

impl Loaded {
    pub fn new(snapshot: GraphSnapshot, params: &SearchParams) -> Self {
        let dictionary = Dictionary::from_snapshot(&snapshot, params.tau_q);
        Loaded {
            snapshot,
            dictionary,
        }
    }
}

pub struct AppState {
    current: RwLock<Option<Arc<Loaded>>>,
    feedback: Option<Mutex<FeedbackStore>>,
    /// Held for the whole rebuild so rebuilds never overlap.
    rebuilding: tokio::sync::Mutex<()>,
    /// Where rebuilt snapshots are persisted.
    snapshot_path: Option<PathBuf>,
    admin_token: Option<String>,
    params: SearchParams,
}

impl AppState {
    pub fn new(snapshot: Option<GraphSnapshot>, params: SearchParams) -> Self {
        let current = snapshot.map(|s| Arc::new(Loaded::new(s, &params)));
        AppState {
            current: RwLock::new(current),
            feedback: None,
            rebuilding: tokio::sync::Mutex::new(()),
            snapshot_path: None,
            admin_token: None,
            params,
        }
    }

    pub fn with_feedback(mut self, store: FeedbackStore) -> Self {
        self.feedback = Some(Mutex::new(store));
        self
    }

    pub fn with_snapshot_path(mut self, path: PathBuf) -> Self {
        self.snapshot_path = Some(path);
        self
    }

    pub fn with_admin_token(mut self, token: impl Into<String>) -> Self {
        self.admin_token = Some(token.into());
        self
    }

    pub fn current(&self) -> Option<Arc<Loaded>> {
        self.current.read().expect("snapshot lock poisoned").clone()
    }

    pub fn publish(&self, snapshot: GraphSnapshot) {
        let loaded = Arc::new(Loaded::new(snapshot, &self.params));
        *self.current.write().expect("snapshot lock poisoned") = Some(loaded);
    }

    fn loaded(&self) -> Result<Arc<Loaded>, ApiError> {
        self.current().ok_or_else(|| {
            ApiError::new(
                StatusCode::SERVICE_UNAVAILABLE,
                "no_snapshot",
                "no snapshot is loaded",
            )
        })
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TermSuggestions {
    pub term: String,
    pub suggestions: Vec<String>,
}

/// JSON error body shared by every endpoint.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ErrorBody {
    pub error: String,
    pub message: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub snapshot_version: Option<u64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub unknown_terms: Vec<String>,
    /// Present on 422 search errors, possibly empty.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub suggestions: Option<Vec<TermSuggestions>>,
}

#[derive(Debug)]
pub struct ApiError {
    status: StatusCode,
    body: Box<ErrorBody>,
}

impl ApiError {
    fn new(status: StatusCode, code: &str, message: impl Into<String>) -> Self {
        ApiError {
            status,
            body: Box::new(ErrorBody {
                error: code.into(),
                message: message.into(),
                field: None,
                snapshot_version: None,
                unknown_terms: Vec::new(),
                suggestions: None,
            }),
        }
    }

    fn field(mut self, field: &str) -> Self {
        self.body.field = Some(field.into());
        self
    }

    fn version(mut self, v: u64) -> Self {
        self.body.snapshot_version = Some(v);
        self
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(self.body)).into_response()
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ResultPayload {
    pub title: String,
    #[serde(flatten)]
    pub result: SearchResult,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SearchResponse {
    pub query_echo: String,
    pub unknown_terms: Vec<String>,
    /// Suggestions for each unknown term.
    pub suggestions: Vec<TermSuggestions>,
    pub results: Vec<ResultPayload>,
    pub subgraph: Subgraph,
    pub snapshot_version: u64,
    /// Result counts before the limit.
    pub direct_total: usize,
    pub transitive_total: usize,
}

#[derive(Debug, Deserialize)]
struct SearchQs {
    #[serde(default)]
    q: String,
    limit: Option<String>,
}

fn suggestions_for(loaded: &Loaded, terms: &[String]) -> Vec<TermSuggestions> {
    terms
        .iter()
        .map(|t| TermSuggestions {
            term: t.clone(),
            suggestions: loaded.dictionary.suggest_normalized(t, DEFAULT_SUGGESTIONS),
        })
        .collect()
}

async fn handle_search(
    State(state): State<Arc<AppState>>,
    Query(qs): Query<SearchQs>,
) -> Result<Json<SearchResponse>, ApiError> {
    let loaded = state.loaded()?;
    let snap = &loaded.snapshot;
    let version = snap.version();
    let mut params = state.params.clone();
    if let Some(raw) = &qs.limit {
        params.limit = raw.trim().parse().map_err(|_| {
            ApiError::new(
                StatusCode::BAD_REQUEST,
                "invalid_params",
                format!("limit '{raw}' is not a number"),
            )
            .field("limit")
            .version(version)
        })?;
    }
    let outcome = search(&qs.q, snap, &params).map_err(|e| match e {
        SearchError::EmptyQuery { unknown_terms } => {
            let mut err = ApiError::new(
                StatusCode::UNPROCESSABLE_ENTITY,
                "empty_query",
                "query has no searchable terms",
            )
            .version(version);
            err.body.suggestions = Some(suggestions_for(&loaded, &unknown_terms));
            err.body.unknown_terms = unknown_terms;
            err
        }
        SearchError::InvalidParams(m) => {
            ApiError::new(StatusCode::BAD_REQUEST, "invalid_params", m)
                .field("limit")
                .version(version)
        }
        SearchError::Integrity(m) => {
            ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, "integrity", m).version(version)
        }
    })?;
    let subgraph = extract_subgraph(&outcome.query, &outcome.results, snap);
    let results = outcome
        .results
        .into_iter()
        .map(|result| ResultPayload {
            title: snap
                .doc(&result.doc_id)
                .map(|d| d.title.clone())
                .unwrap_or_default(),
            result,
        })
        .collect();
    Ok(Json(SearchResponse {
        query_echo: qs.q,
        suggestions: suggestions_for(&loaded, &outcome.query.unknown_terms),
        unknown_terms: outcome.query.unknown_terms,
        results,
        subgraph,
        snapshot_version: version,
        direct_total: outcome.direct_total,
        transitive_total: outcome.transitive_total,
    }))
}

#[derive(Debug, Deserialize)]
struct SuggestQs {
    #[serde(default)]
    q: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SuggestResponse {
    pub known: bool,
    pub df: u32,
    pub suggestions: Vec<String>,
    pub snapshot_version: u64,
}

async fn handle_suggest(
    State(state): State<Arc<AppState>>,
    Query(qs): Query<SuggestQs>,
) -> Result<Json<SuggestResponse>, ApiError> {
    let loaded = state.loaded()?;
    let snap = &loaded.snapshot;
    let check = loaded.dictionary.check_term(&qs.q, snap);
    Ok(Json(SuggestResponse {
        known: check.known,
        df: check.df,
        suggestions: loaded.dictionary.suggest(&qs.q, DEFAULT_SUGGESTIONS, snap),
        snapshot_version: snap.version(),
    }))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FeedbackAck {
    pub id: u64,
    pub snapshot_version: u64,
}

fn feedback_error(e: FeedbackError, version: u64) -> ApiError {
    let field = match &e {
        FeedbackError::ValueOutOfRange(_) => "value_added",
        FeedbackError::UnknownDocument(_) => "doc_id",
        FeedbackError::PathKindMismatch | FeedbackError::UnknownEdge(..) => "path_edges",
        FeedbackError::NonMonotoneId { .. } => "id",
        FeedbackError::InvalidEta(_) => "eta",
    };
    ApiError::new(
        StatusCode::UNPROCESSABLE_ENTITY,
        "invalid_feedback",
        e.to_string(),
    )
    .field(field)
    .version(version)
}

async fn handle_feedback(
    State(state): State<Arc<AppState>>,
    body: Result<Json<FeedbackDraft>, JsonRejection>,
) -> Result<Json<FeedbackAck>, ApiError> {
    let loaded = state.loaded()?;
    let version = loaded.snapshot.version();
    let Json(draft) = body.map_err(|e| {
        ApiError::new(e.status(), "invalid_feedback", e.body_text()).version(version)
    })?;
    let Some(store) = &state.feedback else {
        return Err(ApiError::new(
            StatusCode::SERVICE_UNAVAILABLE,
            "no_feedback_log",
            "no feedback log is configured",
        ));
    };
    let rec = {
        let mut store = store.lock().expect("feedback lock poisoned");
        store.record(draft, &loaded.snapshot, ops::now_rfc3339())
    };
    match rec {
        Ok(rec) => Ok(Json(FeedbackAck {
            id: rec.id,
            snapshot_version: version,
        })),
        Err(RecordError::Invalid(e)) => Err(feedback_error(e, version)),
        Err(RecordError::Io(e)) => Err(ApiError::new(
            StatusCode::INTERNAL_SERVER_ERROR,
            "storage",
            e.to_string(),
        )),
    }
}

fn presented_token(headers: &HeaderMap) -> Option<&str> {
    if let Some(t) = headers.get("x-admin-token").and_then(|v| v.to_str().ok()) {
        return Some(t);
    }
    headers
        .get("authorization")
        .and_then(|v| v.to_str().ok())
        .and_then(|v| v.strip_prefix("Bearer "))
}

async fn handle_rebuild(
    State(state): State<Arc<AppState>>,
    headers: HeaderMap,
) -> Result<Json<ops::RebuildReport>, ApiError> {
    let Some(expected) = &state.admin_token else {
        return Err(ApiError::new(
            StatusCode::FORBIDDEN,
            "rebuild_disabled",
            "no admin token is configured",
        ));
    };
    if presented_token(&headers) != Some(expected.as_str()) {
        return Err(ApiError::new(
            StatusCode::UNAUTHORIZED,
            "unauthorized",
            "missing or wrong admin token",
        ));
    }
    let _guard = state.rebuilding.lock().await;
    let loaded = state.loaded()?;
    let log = match &state.feedback {
        Some(store) => store.lock().expect("feedback lock poisoned").log().clone(),
        None => Default::default(),
    };
    let path = state.snapshot_path.clone();
    let params = state.params.clone();
    let built = tokio::task::spawn_blocking(move || -> anyhow::Result<_> {
        let (next, report) = ops::rebuild(&loaded.snapshot, &log)?;
        if let Some(p) = &path {
            store::save_snapshot(&next, p)?;
        }
        Ok((Loaded::new(next, &params), report))
    })
    .await
    .map_err(|e| {
        ApiError::new(
            StatusCode::INTERNAL_SERVER_ERROR,
            "rebuild_failed",
            e.to_string(),
        )
    })?
    .map_err(|e| {
        ApiError::new(
            StatusCode::INTERNAL_SERVER_ERROR,
            "rebuild_failed",
            format!("{e:#}"),
        )
    })?;
    let (next, report) = built;
    *state.current.write().expect("snapshot lock poisoned") = Some(Arc::new(next));
    log::info!(
        "published snapshot v{} in {:.3}s ({} feedback records applied)",
        report.snapshot_version,
        report.rebuild_seconds,
        report.feedback.applied.len()
    );
    Ok(Json(report))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DocResponse {
    pub snapshot_version: u64,
    pub document: DesignCaseDoc,
}

async fn handle_doc(
    State(state): State<Arc<AppState>>,
    Path(id): Path<String>,
) -> Result<Json<DocResponse>, ApiError> {
    let loaded = state.loaded()?;
    let version = loaded.snapshot.version();
    let doc = loaded.snapshot.doc(&id).ok_or_else(|| {
        ApiError::new(
            StatusCode::NOT_FOUND,
            "unknown_document",
            format!("no document '{id}'"),
        )
        .version(version)
    })?;
    Ok(Json(DocResponse {
        snapshot_version: version,
        document: doc.clone(),
    }))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Health {
    pub status: String,
    pub snapshot_version: Option<u64>,
    pub documents: usize,
    pub feedback_records: usize,
}

async fn handle_health(State(state): State<Arc<AppState>>) -> Json<Health> {
    let loaded = state.current();
    let feedback_records = state
        .feedback
        .as_ref()
        .map_or(0, |s| s.lock().expect("feedback lock poisoned").log().len());
    Json(Health {
        status: if loaded.is_some() {
            "ok"
        } else {
            "no_snapshot"
        }
        .into(),
        snapshot_version: loaded.as_ref().map(|l| l.snapshot.version()),
        documents: loaded.as_ref().map_or(0, |l| l.snapshot.docs().len()),
        feedback_records,
    })
}

pub fn router(state: Arc<AppState>) -> Router {
    Router::new()
        .route("/api/search", get(handle_search))
        .route("/api/suggest", get(handle_suggest))
        .route("/api/feedback", post(handle_feedback))
        .route("/api/rebuild", post(handle_rebuild))
        .route("/api/docs/{id}", get(handle_doc))
        .route("/api/health", get(handle_health))
        .with_state(state)
}
