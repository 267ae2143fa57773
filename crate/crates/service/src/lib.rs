//! HTTP JSON API for numbers-game sessions and graph analysis.
//!
//! All routes live under `/api`. Positions travel as arrays of strings
//! (`"-1/5"`, `"2"`, `"0.25"`) and node indices are 1-based.

pub mod session;

use std::sync::Arc;
use std::time::Duration;

use axum::body::Bytes;
use axum::extract::{Path, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use coxroot_core::document::GraphDocument;
use coxroot_core::game::{Outcome, Strategy, DEFAULT_MAX_STEPS};
use coxroot_core::report::Analysis;
use coxroot_core::EgcmGraph;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

pub use session::{Session, SessionError, SessionState, SessionStore, StoreConfig};

pub const DEFAULT_PORT: u16 = 8733;

/// Step bound used by `auto` when the request gives none.
pub const DEFAULT_AUTO_STEPS: usize = 10_000;

#[derive(Debug, Serialize)]
pub struct ApiError {
    #[serde(skip)]
    pub status: StatusCode,
    pub code: String,
    pub detail: String,
}

impl ApiError {
    fn new(status: StatusCode, code: &str, detail: impl Into<String>) -> Self {
        ApiError {
            status,
            code: code.to_string(),
            detail: detail.into(),
        }
    }

    fn unprocessable(code: &str, detail: impl ToString) -> Self {
        ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, code, detail.to_string())
    }

    fn not_found(id: &str) -> Self {
        ApiError::new(StatusCode::NOT_FOUND, "SessionNotFound", format!("no session {id:?}"))
    }
}

impl From<SessionError> for ApiError {
    fn from(e: SessionError) -> Self {
        match e {
            SessionError::IllegalMove(node) => ApiError::new(
                StatusCode::CONFLICT,
                "IllegalMove",
                format!("node {} is not a legal move", node + 1),
            ),
            SessionError::UndoAtRoot => {
                ApiError::new(StatusCode::CONFLICT, "UndoAtRoot", "already at the initial position")
            }
            SessionError::UnknownHistoryNode(k) => {
                ApiError::new(StatusCode::NOT_FOUND, "HistoryNodeNotFound", format!("no history node {k}"))
            }
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(self)).into_response()
    }
}

type ApiResult<T> = Result<T, ApiError>;

pub struct AppState {
    pub store: SessionStore,
}

pub fn router(config: StoreConfig) -> Router {
    router_with_state(Arc::new(AppState {
        store: SessionStore::new(config),
    }))
}

pub fn router_with_state(state: Arc<AppState>) -> Router {
    let api = Router::new()
        .route("/health", get(health))
        .route("/analyze", post(analyze))
        .route("/sessions", post(create_session))
        .route("/sessions/{id}", get(get_session))
        .route("/sessions/{id}/history", get(get_history))
        .route("/sessions/{id}/fire", post(fire))
        .route("/sessions/{id}/undo", post(undo))
        .route("/sessions/{id}/jump", post(jump))
        .route("/sessions/{id}/auto", post(auto))
        .route("/sessions/{id}/analyze", post(analyze_session))
        .with_state(state);
    Router::new().nest("/api", api)
}

/// Serves the API on `listener` until the process is stopped.
pub async fn serve(listener: tokio::net::TcpListener, config: StoreConfig) -> std::io::Result<()> {
    let state = Arc::new(AppState {
        store: SessionStore::new(config),
    });
    let sweeper = state.clone();
    tokio::spawn(async move {
        let mut tick = tokio::time::interval(Duration::from_secs(60));
        loop {
            tick.tick().await;
            sweeper.store.sweep();
        }
    });
    axum::serve(listener, router_with_state(state)).await
}

fn parse_body<T: DeserializeOwned>(body: &Bytes) -> ApiResult<T> {
    serde_json::from_slice(body).map_err(|e| ApiError::new(StatusCode::BAD_REQUEST, "JsonError", e.to_string()))
}

fn build_graph(doc: Value) -> ApiResult<EgcmGraph> {
    let doc = GraphDocument::from_value(doc).map_err(|e| ApiError::unprocessable(e.code(), e))?;
    doc.build().map_err(|e| ApiError::unprocessable(e.code(), e))
}

fn value_text(v: &Value) -> ApiResult<String> {
    match v {
        Value::String(s) => Ok(s.clone()),
        Value::Number(n) => Ok(n.to_string()),
        other => Err(ApiError::unprocessable(
            "ValueSyntaxError",
            format!("position entries must be strings or numbers, got {other}"),
        )),
    }
}

async fn session(state: &AppState, id: &str) -> ApiResult<session::SharedSession> {
    state.store.get(id).ok_or_else(|| ApiError::not_found(id))
}

async fn health() -> Json<Value> {
    Json(serde_json::json!({ "status": "ok" }))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphRequest {
    graph: Value,
}

async fn analyze(body: Bytes) -> ApiResult<Json<Analysis>> {
    let req: GraphRequest = parse_body(&body)?;
    let g = build_graph(req.graph)?;
    let report = tokio::task::spawn_blocking(move || Analysis::of(&g))
        .await
        .map_err(|e| ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, "InternalError", e.to_string()))?;
    Ok(Json(report))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CreateRequest {
    graph: Value,
    position: Vec<Value>,
}

#[derive(Serialize)]
struct Created {
    id: String,
    state: SessionState,
}

async fn create_session(State(app): State<Arc<AppState>>, body: Bytes) -> ApiResult<(StatusCode, Json<Created>)> {
    let req: CreateRequest = parse_body(&body)?;
    let g = build_graph(req.graph)?;
    let text = req.position.iter().map(value_text).collect::<ApiResult<Vec<_>>>()?;
    let position = g.parse_position(&text).map_err(|e| ApiError::unprocessable(e.code(), e))?;
    let id = format!("{:016x}", rand::random::<u64>());
    let session = Session::new(id.clone(), Arc::new(g), position);
    let state = session.state();
    app.store.insert(session);
    Ok((StatusCode::CREATED, Json(Created { id, state })))
}

async fn get_session(State(app): State<Arc<AppState>>, Path(id): Path<String>) -> ApiResult<Json<SessionState>> {
    let s = session(&app, &id).await?;
    let s = s.lock().await;
    Ok(Json(s.state()))
}

async fn get_history(
    State(app): State<Arc<AppState>>,
    Path(id): Path<String>,
) -> ApiResult<Json<session::HistoryView>> {
    let s = session(&app, &id).await?;
    let s = s.lock().await;
    Ok(Json(s.history()))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FireRequest {
    node: usize,
}

async fn fire(State(app): State<Arc<AppState>>, Path(id): Path<String>, body: Bytes) -> ApiResult<Json<SessionState>> {
    let req: FireRequest = parse_body(&body)?;
    let s = session(&app, &id).await?;
    let mut s = s.lock().await;
    let node = req.node.checked_sub(1).unwrap_or(usize::MAX);
    s.fire(node).map_err(|e| match e {
        SessionError::IllegalMove(_) => ApiError::new(
            StatusCode::CONFLICT,
            "IllegalMove",
            format!("node {} is not a legal move", req.node),
        ),
        other => other.into(),
    })?;
    Ok(Json(s.state()))
}

async fn undo(State(app): State<Arc<AppState>>, Path(id): Path<String>) -> ApiResult<Json<SessionState>> {
    let s = session(&app, &id).await?;
    let mut s = s.lock().await;
    s.undo()?;
    Ok(Json(s.state()))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct JumpRequest {
    node_id: usize,
}

async fn jump(State(app): State<Arc<AppState>>, Path(id): Path<String>, body: Bytes) -> ApiResult<Json<SessionState>> {
    let req: JumpRequest = parse_body(&body)?;
    let s = session(&app, &id).await?;
    let mut s = s.lock().await;
    s.jump(req.node_id)?;
    Ok(Json(s.state()))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct AutoRequest {
    #[serde(default = "first_legal")]
    strategy: String,
    max_steps: Option<usize>,
    seed: Option<u64>,
}

fn first_legal() -> String {
    "first_legal".into()
}

#[derive(Serialize)]
struct AutoResponse {
    #[serde(flatten)]
    state: SessionState,
    outcome: Outcome,
    steps: usize,
}

async fn auto(State(app): State<Arc<AppState>>, Path(id): Path<String>, body: Bytes) -> ApiResult<Json<AutoResponse>> {
    let req: AutoRequest = if body.is_empty() {
        parse_body(&Bytes::from_static(b"{}"))?
    } else {
        parse_body(&body)?
    };
    let strategy = match req.strategy.as_str() {
        "first_legal" => Strategy::FirstLegal,
        "random" => Strategy::Random {
            seed: req.seed.unwrap_or(0),
        },
        other => {
            return Err(ApiError::unprocessable(
                "UnknownStrategy",
                format!("unknown strategy {other:?}; expected first_legal or random"),
            ))
        }
    };
    let max_steps = req.max_steps.unwrap_or(DEFAULT_AUTO_STEPS);
    if max_steps > DEFAULT_MAX_STEPS {
        return Err(ApiError::unprocessable(
            "StepBoundTooLarge",
            format!("max_steps may be at most {DEFAULT_MAX_STEPS}"),
        ));
    }
    let s = session(&app, &id).await?;
    let mut guard = s.lock_owned().await;
    let response = tokio::task::spawn_blocking(move || {
        let (outcome, steps) = guard.auto(&strategy, max_steps);
        AutoResponse {
            state: guard.state(),
            outcome,
            steps,
        }
    })
    .await
    .map_err(|e| ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, "InternalError", e.to_string()))?;
    Ok(Json(response))
}

async fn analyze_session(State(app): State<Arc<AppState>>, Path(id): Path<String>) -> ApiResult<Json<Analysis>> {
    let g = {
        let s = session(&app, &id).await?;
        let s = s.lock().await;
        s.graph.clone()
    };
    let report = tokio::task::spawn_blocking(move || Analysis::of(&g))
        .await
        .map_err(|e| ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, "InternalError", e.to_string()))?;
    Ok(Json(report))
}
