//! JSON-over-HTTP access to a store and to pattern-learning sessions.
//!
//! The store is read-only while serving; sessions are the only mutable
//! state and are persisted to the sidecar after every change.

use std::collections::BTreeMap;
use std::sync::{Arc, Mutex};

use axum::extract::{Path, Query as QueryParams, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::Deserialize;
use serde_json::{json, Value};
use shg::learning::{mine_patterns, store_matches, Criterion, LearnError, Session};
use shg::patterns::Query;
use shg::{Hyperedge, Store};

use crate::commands::{binding_map, coref_reports, edge_id, metrics_json};
use crate::config::Config;
use crate::sessions::SessionBook;

pub struct AppState {
    pub store: Store,
    pub config: Config,
    pub sessions: Mutex<SessionBook>,
}

impl AppState {
    pub fn new(store: Store, config: Config, sessions: SessionBook) -> Arc<AppState> {
        Arc::new(AppState { store, config, sessions: Mutex::new(sessions) })
    }
}

#[derive(Debug)]
pub enum ApiError {
    BadRequest(String),
    NotFound(String),
    Conflict(String),
    Internal(String),
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let (code, msg) = match self {
            ApiError::BadRequest(m) => (StatusCode::BAD_REQUEST, m),
            ApiError::NotFound(m) => (StatusCode::NOT_FOUND, m),
            ApiError::Conflict(m) => (StatusCode::CONFLICT, m),
            ApiError::Internal(m) => (StatusCode::INTERNAL_SERVER_ERROR, m),
        };
        (code, Json(json!({ "error": msg }))).into_response()
    }
}

impl From<LearnError> for ApiError {
    fn from(e: LearnError) -> Self {
        match e {
            LearnError::EmptyStore => ApiError::NotFound(e.to_string()),
            _ => ApiError::Conflict(e.to_string()),
        }
    }
}

type ApiResult = Result<Json<Value>, ApiError>;

fn edge_param(s: &str) -> Result<Hyperedge, ApiError> {
    s.parse().map_err(|e| ApiError::BadRequest(format!("malformed edge {s:?}: {e}")))
}

fn edge_view(store: &Store, e: &Hyperedge) -> Value {
    let a = store.attributes(e);
    json!({
        "id": edge_id(e),
        "edge": e.to_string(),
        "count": a.map(|a| a.count).unwrap_or(0),
        "text": a.and_then(|a| a.text.clone()).or_else(|| store.label(e).map(str::to_string)),
    })
}

#[derive(Deserialize)]
struct EdgesParams {
    query: Option<String>,
}

async fn list_edges(State(st): State<Arc<AppState>>, QueryParams(p): QueryParams<EdgesParams>) -> ApiResult {
    let store = &st.store;
    let mut out = Vec::new();
    match p.query {
        None => out.extend(store.edges().map(|e| edge_view(store, e))),
        Some(q) => {
            let q: Query = q.parse().map_err(|e| ApiError::BadRequest(format!("malformed pattern: {e}")))?;
            for e in store.edges() {
                let bindings: Vec<_> = q.matches(e, store).iter().map(binding_map).collect();
                if !bindings.is_empty() {
                    let mut v = edge_view(store, e);
                    v["bindings"] = json!(bindings);
                    out.push(v);
                }
            }
        }
    }
    Ok(Json(json!({ "edges": out })))
}

async fn get_edge(State(st): State<Arc<AppState>>, Path(id): Path<String>) -> ApiResult {
    let store = &st.store;
    let e = store
        .edges()
        .find(|e| edge_id(e) == id)
        .ok_or_else(|| ApiError::NotFound(format!("no edge with id {id}")))?;
    let mut v = edge_view(store, e);
    v["tags"] = json!(store.attributes(e).map(|a| a.tags.clone()).unwrap_or_default());
    Ok(Json(v))
}

#[derive(Deserialize)]
struct MetricsParams {
    edge: String,
}

async fn metrics(State(st): State<Arc<AppState>>, QueryParams(p): QueryParams<MetricsParams>) -> ApiResult {
    let e = edge_param(&p.edge)?;
    Ok(Json(metrics_json(&st.store, &e)))
}

async fn coref(State(st): State<Arc<AppState>>, Path(seed): Path<String>) -> ApiResult {
    let seed = edge_param(&seed)?;
    if !st.store.contains_deep(&seed) {
        return Err(ApiError::NotFound(format!("{seed} is not in the store")));
    }
    let mut reports = coref_reports(&st.store, Some(&seed), &st.config.coref)
        .map_err(|e| ApiError::Conflict(e.to_string()))?;
    Ok(Json(json!(reports.remove(0))))
}

fn session_view(s: &Session, store: &Store) -> Value {
    let mut v = json!(s);
    v["pending"] = json!(s.pending(store));
    v["consistent"] = json!(s.is_consistent(store));
    v
}

#[derive(Deserialize)]
struct NewSession {
    #[serde(default)]
    criterion: Option<String>,
}

async fn create_session(State(st): State<Arc<AppState>>, Json(body): Json<NewSession>) -> ApiResult {
    let criterion: Criterion = body
        .criterion
        .as_deref()
        .unwrap_or("predicate-frequency")
        .parse()
        .map_err(ApiError::BadRequest)?;
    let mut book = st.sessions.lock().unwrap();
    let v = session_view(book.create(&st.store, criterion)?, &st.store);
    book.save().map_err(|e| ApiError::Internal(e.to_string()))?;
    Ok(Json(v))
}

fn missing(id: &str) -> ApiError {
    ApiError::NotFound(format!("no session {id}"))
}

async fn get_session(State(st): State<Arc<AppState>>, Path(id): Path<String>) -> ApiResult {
    let book = st.sessions.lock().unwrap();
    let s = book.get(&id).ok_or_else(|| missing(&id))?;
    Ok(Json(session_view(s, &st.store)))
}

#[derive(Deserialize)]
struct Assign {
    assignments: BTreeMap<String, String>,
}

async fn assign(State(st): State<Arc<AppState>>, Path(id): Path<String>, Json(body): Json<Assign>) -> ApiResult {
    let mut parsed = BTreeMap::new();
    for (k, v) in body.assignments {
        if !shg::patterns::is_var_name(&k) {
            return Err(ApiError::BadRequest(format!("{k:?} is not a variable name")));
        }
        parsed.insert(k, edge_param(&v)?);
    }
    let mut book = st.sessions.lock().unwrap();
    let s = book.get_mut(&id).ok_or_else(|| missing(&id))?;
    s.assign(parsed)?;
    let v = session_view(s, &st.store);
    book.save().map_err(|e| ApiError::Internal(e.to_string()))?;
    Ok(Json(v))
}

#[derive(Deserialize)]
#[serde(rename_all = "lowercase")]
enum Verdict {
    Accept,
    Reject,
}

#[derive(Deserialize)]
struct Feedback {
    edge: String,
    verdict: Verdict,
}

async fn feedback(State(st): State<Arc<AppState>>, Path(id): Path<String>, Json(body): Json<Feedback>) -> ApiResult {
    let edge = edge_param(&body.edge)?;
    let mut book = st.sessions.lock().unwrap();
    let s = book.get_mut(&id).ok_or_else(|| missing(&id))?;
    s.feedback(edge, matches!(body.verdict, Verdict::Accept), &st.store, &st.config.refine)?;
    let v = session_view(s, &st.store);
    book.save().map_err(|e| ApiError::Internal(e.to_string()))?;
    Ok(Json(v))
}

async fn session_pattern(State(st): State<Arc<AppState>>, Path(id): Path<String>) -> ApiResult {
    let book = st.sessions.lock().unwrap();
    let s = book.get(&id).ok_or_else(|| missing(&id))?;
    let matches: Vec<String> = match &s.pattern {
        Some(q) => store_matches(q, &st.store).iter().map(|e| e.to_string()).collect(),
        None => Vec::new(),
    };
    Ok(Json(json!({
        "pattern": s.pattern.as_ref().map(|q| q.to_string()),
        "consistent": s.is_consistent(&st.store),
        "matches": matches,
    })))
}

#[derive(Deserialize)]
struct MinedParams {
    top: Option<usize>,
}

async fn mined(State(st): State<Arc<AppState>>, QueryParams(p): QueryParams<MinedParams>) -> ApiResult {
    let all = mine_patterns(&st.store, &st.config.mining);
    let n = p.top.unwrap_or(all.len());
    let v: Vec<Value> = all
        .iter()
        .take(n)
        .map(|m| json!({ "pattern": m.pattern.to_string(), "count": m.count }))
        .collect();
    Ok(Json(json!({ "patterns": v })))
}

pub fn router(state: Arc<AppState>) -> Router {
    Router::new()
        .route("/edges", get(list_edges))
        .route("/edges/{id}", get(get_edge))
        .route("/metrics", get(metrics))
        .route("/coref/{seed}", get(coref))
        .route("/sessions", post(create_session))
        .route("/sessions/{id}", get(get_session))
        .route("/sessions/{id}/assign", post(assign))
        .route("/sessions/{id}/feedback", post(feedback))
        .route("/sessions/{id}/pattern", get(session_pattern))
        .route("/patterns/mined", get(mined))
        .with_state(state)
}

/// Binds `config.bind:config.port` and serves until the process ends.
pub async fn serve(state: Arc<AppState>) -> std::io::Result<()> {
    let addr = format!("{}:{}", state.config.bind, state.config.port);
    let listener = tokio::net::TcpListener::bind(&addr).await?;
    eprintln!("listening on http://{}", listener.local_addr()?);
    axum::serve(listener, router(state)).await
}
