//! Read-only HTTP API over one loaded knowledge graph.
//!
//! Every `/api/*` response body is the canonical JSON of the matching
//! library call. The graph is shared immutably between handlers.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::Arc;

use axum::extract::rejection::JsonRejection;
use axum::extract::{Path, Query, State};
use axum::http::{header, Method, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use qpz_core::export::export_viz;
use qpz_core::json::canonical_json;
use qpz_core::queries::{self, AvailabilityMode, AvailabilityResult, Provenance};
use qpz_core::{KnowledgeGraph, NodeKind, QueryError};
use serde::{Deserialize, Serialize};
use tower_http::cors::{Any, CorsLayer};
use tower_http::services::ServeDir;

type Shared = Arc<KnowledgeGraph>;

/// Error body: `{"error": code, "message": text}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ApiError {
    #[serde(skip)]
    pub status: StatusCode,
    pub error: String,
    pub message: String,
}

impl ApiError {
    pub fn new(status: StatusCode, error: &str, message: impl Into<String>) -> Self {
        ApiError {
            status,
            error: error.to_string(),
            message: message.into(),
        }
    }

    pub fn bad_request(message: impl Into<String>) -> Self {
        ApiError::new(StatusCode::BAD_REQUEST, "bad-request", message)
    }
}

impl From<QueryError> for ApiError {
    fn from(err: QueryError) -> Self {
        match err {
            QueryError::UnknownNode(_) => {
                ApiError::new(StatusCode::NOT_FOUND, "unknown-node", err.to_string())
            }
            QueryError::NotAProtocol(_) | QueryError::UnknownMode(_) => {
                ApiError::bad_request(err.to_string())
            }
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        canonical(self.status, &self)
    }
}

fn canonical<T: Serialize>(status: StatusCode, value: &T) -> Response {
    (
        status,
        [(header::CONTENT_TYPE, "application/json")],
        canonical_json(value),
    )
        .into_response()
}

fn ok<T: Serialize>(value: &T) -> Response {
    canonical(StatusCode::OK, value)
}

/// Body of `POST /api/available`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AvailableRequest {
    pub selected: Vec<String>,
    #[serde(default)]
    pub mode: Option<String>,
}

/// Response of `POST /api/available`: the library result without its mode.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AvailableResponse {
    pub available: BTreeSet<String>,
    pub provenance: BTreeMap<String, Provenance>,
}

impl From<AvailabilityResult> for AvailableResponse {
    fn from(r: AvailabilityResult) -> Self {
        AvailableResponse {
            available: r.available,
            provenance: r.provenance,
        }
    }
}

async fn graph_doc(State(graph): State<Shared>) -> Result<Response, ApiError> {
    Ok(ok(&export_viz(&graph, None)?))
}

async fn node(State(graph): State<Shared>, Path(id): Path<String>) -> Result<Response, ApiError> {
    let node = graph.node(&id).ok_or(QueryError::UnknownNode(id))?;
    Ok(ok(node))
}

async fn lineage(
    State(graph): State<Shared>,
    Path(id): Path<String>,
) -> Result<Response, ApiError> {
    Ok(ok(&queries::lineage(&graph, &id)?))
}

async fn available(
    State(graph): State<Shared>,
    body: Result<Json<AvailableRequest>, JsonRejection>,
) -> Result<Response, ApiError> {
    let Json(req) = body.map_err(|e| ApiError::bad_request(e.body_text()))?;
    let mode = match req.mode.as_deref() {
        None => AvailabilityMode::Paper,
        Some(m) => m.parse()?,
    };
    let result = queries::available(&graph, &req.selected, mode)?;
    Ok(ok(&AvailableResponse::from(result)))
}

async fn centrality(
    State(graph): State<Shared>,
    Query(params): Query<HashMap<String, String>>,
) -> Result<Response, ApiError> {
    let kind = match params.get("kind").map(String::as_str) {
        None | Some("") => None,
        Some(k) => Some(
            k.parse::<NodeKind>()
                .map_err(|e| ApiError::bad_request(e.to_string()))?,
        ),
    };
    let top = match params.get("top").map(String::as_str) {
        None | Some("") => None,
        Some(t) => Some(t.parse::<usize>().map_err(|_| {
            ApiError::bad_request(format!("top must be a non-negative integer, got {t:?}"))
        })?),
    };
    Ok(ok(&queries::centrality(&graph, kind, top)))
}

async fn stats(State(graph): State<Shared>) -> Response {
    ok(&queries::stats(&graph))
}

async fn method_not_allowed() -> ApiError {
    ApiError::new(
        StatusCode::METHOD_NOT_ALLOWED,
        "method-not-allowed",
        "method not allowed",
    )
}

async fn not_found() -> ApiError {
    ApiError::new(StatusCode::NOT_FOUND, "not-found", "no such endpoint")
}

/// The service routes. Static files are served from `static_dir` for any
/// path outside `/api` when one is given.
pub fn router(graph: Shared, static_dir: Option<PathBuf>) -> Router {
    let cors = CorsLayer::new()
        .allow_origin(Any)
        .allow_methods([Method::GET, Method::POST, Method::OPTIONS])
        .allow_headers(Any);

    let api = Router::new()
        .route("/graph", get(graph_doc))
        .route("/nodes/{id}", get(node))
        .route("/lineage/{id}", get(lineage))
        .route("/available", post(available))
        .route("/centrality", get(centrality))
        .route("/stats", get(stats))
        .fallback(not_found)
        .method_not_allowed_fallback(method_not_allowed)
        .layer(cors)
        .with_state(graph);

    let app = Router::new().nest("/api", api);
    match static_dir {
        Some(dir) => app.fallback_service(ServeDir::new(dir)),
        None => app.fallback(not_found),
    }
}

/// Binds `addr` and serves until the process is stopped.
pub async fn serve(
    graph: KnowledgeGraph,
    addr: SocketAddr,
    static_dir: Option<PathBuf>,
) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    axum::serve(listener, router(Arc::new(graph), static_dir)).await
}

/// Blocking wrapper around [`serve`] with its own runtime.
pub fn serve_blocking(
    graph: KnowledgeGraph,
    addr: SocketAddr,
    static_dir: Option<PathBuf>,
) -> std::io::Result<()> {
    tokio::runtime::Builder::new_multi_thread()
        .enable_all()
        .build()?
        .block_on(serve(graph, addr, static_dir))
}
