//! JSON API over one board: board data, solves and partial-game what-if
//! plans, plus the web UI's static files under `/`.
//!
//! The server holds no state besides the board. Each solve runs on the
//! blocking pool with a per-request time budget; a solve that runs out of
//! time answers with its incumbent and `proven_optimal: false`.

use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::Arc;
use std::time::Duration;

use axum::extract::rejection::JsonRejection;
use axum::extract::State;
use axum::http::{header, StatusCode};
use axum::response::{Html, IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use railmax_core::board::{City, Edge, Ticket};
use railmax_core::solver::{DEFAULT_NODE_LIMIT, PartialResult};
use railmax_core::{solve, solve_partial, Board, GameState, ScoreBreakdown, SolveError, SolveOptions, SolveResult};
use serde::{Deserialize, Serialize};
use tower_http::services::ServeDir;

pub const DEFAULT_PORT: u16 = 8080;
pub const REQUEST_TIME_LIMIT: Duration = Duration::from_secs(10);
const DEFAULT_UI_DIR: &str = "webui/dist";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ServiceConfig {
    pub port: u16,
    /// Built UI assets; `None` serves a placeholder page at `/`.
    pub ui_dir: Option<PathBuf>,
    pub time_limit: Duration,
    pub node_limit: u64,
}

impl Default for ServiceConfig {
    fn default() -> Self {
        ServiceConfig { port: DEFAULT_PORT, ui_dir: None, time_limit: REQUEST_TIME_LIMIT, node_limit: DEFAULT_NODE_LIMIT }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("RAILMAX_PORT must be a port number, got {0:?}")]
    Port(String),
}

impl ServiceConfig {
    /// Reads `RAILMAX_PORT` and `RAILMAX_UI_DIR`; the UI directory defaults
    /// to `webui/dist` when that exists.
    pub fn from_env() -> Result<Self, ConfigError> {
        Self::from_vars(|name| std::env::var(name).ok())
    }

    pub fn from_vars(var: impl Fn(&str) -> Option<String>) -> Result<Self, ConfigError> {
        let port = match var("RAILMAX_PORT") {
            Some(text) => text.trim().parse().map_err(|_| ConfigError::Port(text))?,
            None => DEFAULT_PORT,
        };
        let ui_dir = var("RAILMAX_UI_DIR")
            .map(PathBuf::from)
            .or_else(|| Some(PathBuf::from(DEFAULT_UI_DIR)).filter(|p| p.is_dir()));
        Ok(ServiceConfig { port, ui_dir, ..ServiceConfig::default() })
    }
}

struct AppState {
    board: Arc<Board>,
    board_json: String,
    time_limit: Duration,
    node_limit: u64,
}

#[derive(Serialize)]
struct BoardView<'a> {
    name: &'a str,
    cities: &'a [City],
    edges: &'a [Edge],
    tickets: &'a [Ticket],
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct SolveRequest {
    pub budget: i64,
    #[serde(default)]
    pub removed_tickets: Vec<usize>,
    #[serde(default)]
    pub forced_edges: Vec<usize>,
    #[serde(default)]
    pub banned_edges: Vec<usize>,
}

/// Wire form of a solve, shared with the CLI's `--json` output.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveReport {
    pub budget: i64,
    pub total: i64,
    pub edge_points: i64,
    pub ticket_points: i64,
    pub edges: Vec<usize>,
    pub tickets: Vec<usize>,
    pub length: i64,
    pub proven_optimal: bool,
    pub canonical: bool,
    pub nodes: u64,
    pub millis: u64,
}

impl SolveReport {
    pub fn new(board: &Board, budget: i64, r: &SolveResult) -> Self {
        let ScoreBreakdown { edge_points, ticket_points, total } = r.breakdown;
        SolveReport {
            budget,
            total,
            edge_points,
            ticket_points,
            edges: r.edges.clone(),
            tickets: r.tickets.clone(),
            length: r.edges.iter().map(|&e| board.edges()[e].length).sum(),
            proven_optimal: r.stats.proven_optimal,
            canonical: r.stats.canonical,
            nodes: r.stats.nodes,
            millis: r.stats.millis,
        }
    }
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct WhatIfRequest {
    pub budget_remaining: i64,
    #[serde(default)]
    pub mine: Vec<usize>,
    #[serde(default)]
    pub blocked: Vec<usize>,
    #[serde(default)]
    pub held_tickets: Vec<usize>,
    #[serde(default)]
    pub count_unheld_tickets: bool,
    /// Deduct held tickets left incomplete; on unless turned off.
    #[serde(default = "yes")]
    pub penalize_incomplete: bool,
}

fn yes() -> bool {
    true
}

impl WhatIfRequest {
    pub fn state<'b>(&self, board: &'b Board) -> GameState<'b> {
        GameState {
            board,
            budget_remaining: self.budget_remaining,
            mine: self.mine.clone(),
            blocked: self.blocked.clone(),
            held_tickets: self.held_tickets.clone(),
            count_unheld_tickets: self.count_unheld_tickets,
            penalize_incomplete: self.penalize_incomplete,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WhatIfBreakdown {
    pub new_edge_points: i64,
    pub ticket_gains: i64,
    pub ticket_penalties: i64,
    pub total: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WhatIfResponse {
    pub plan: Vec<usize>,
    pub breakdown: WhatIfBreakdown,
    pub completed_held: Vec<usize>,
    pub incomplete_held: Vec<usize>,
    pub completed_unheld: Vec<usize>,
    pub proven_optimal: bool,
    pub millis: u64,
}

impl From<PartialResult> for WhatIfResponse {
    fn from(r: PartialResult) -> Self {
        WhatIfResponse {
            plan: r.plan,
            breakdown: WhatIfBreakdown {
                new_edge_points: r.new_edge_points,
                ticket_gains: r.ticket_gains,
                ticket_penalties: r.ticket_penalties,
                total: r.total,
            },
            completed_held: r.completed_held,
            incomplete_held: r.incomplete_held,
            completed_unheld: r.completed_unheld,
            proven_optimal: r.stats.proven_optimal,
            millis: r.stats.millis,
        }
    }
}

#[derive(Debug)]
pub struct ApiError {
    status: StatusCode,
    message: String,
}

impl ApiError {
    fn new(status: StatusCode, message: impl Into<String>) -> Self {
        ApiError { status, message: message.into() }
    }
}

impl From<SolveError> for ApiError {
    fn from(e: SolveError) -> Self {
        let status = match e {
            SolveError::NegativeBudget(_) | SolveError::UnknownEdge(_) | SolveError::UnknownTicket(_) => {
                StatusCode::BAD_REQUEST
            }
            SolveError::ConflictingEdge(_) | SolveError::BudgetInfeasibleForcedSet { .. } => {
                StatusCode::UNPROCESSABLE_ENTITY
            }
            SolveError::InstanceTooLarge { .. } => StatusCode::INTERNAL_SERVER_ERROR,
        };
        ApiError::new(status, e.to_string())
    }
}

impl From<JsonRejection> for ApiError {
    fn from(e: JsonRejection) -> Self {
        ApiError::new(StatusCode::BAD_REQUEST, e.body_text())
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(serde_json::json!({ "error": self.message }))).into_response()
    }
}

/// Builds the router for `board`.
pub fn router(board: Board, config: &ServiceConfig) -> Router {
    let board_json = serde_json::to_string(&BoardView {
        name: board.name(),
        cities: board.cities(),
        edges: board.edges(),
        tickets: board.tickets(),
    })
    .expect("board serializes");
    let state = Arc::new(AppState {
        board: Arc::new(board),
        board_json,
        time_limit: config.time_limit,
        node_limit: config.node_limit,
    });
    let api = Router::new()
        .route("/api/health", get(health))
        .route("/api/board", get(board_handler))
        .route("/api/solve", post(solve_handler))
        .route("/api/whatif", post(whatif_handler))
        .with_state(state);
    match &config.ui_dir {
        Some(dir) if dir.is_dir() => api.fallback_service(ServeDir::new(dir)),
        _ => api.route("/", get(placeholder)),
    }
}

/// Binds `0.0.0.0:port` and serves until the process ends.
pub async fn serve(board: Board, config: ServiceConfig) -> std::io::Result<()> {
    let addr = SocketAddr::from(([0, 0, 0, 0], config.port));
    let listener = tokio::net::TcpListener::bind(addr).await?;
    tracing::info!(%addr, board = board.name(), "serving");
    axum::serve(listener, router(board, &config)).await
}

async fn health() -> Json<serde_json::Value> {
    Json(serde_json::json!({ "status": "ok" }))
}

async fn board_handler(State(state): State<Arc<AppState>>) -> Response {
    ([(header::CONTENT_TYPE, "application/json")], state.board_json.clone()).into_response()
}

async fn placeholder() -> Html<&'static str> {
    Html("<!doctype html><title>railmax</title><p>The web UI is not installed. The JSON API is under /api.</p>")
}

impl AppState {
    fn options(&self) -> SolveOptions {
        SolveOptions::default().with_limits(self.node_limit, self.time_limit)
    }
}

async fn blocking<T: Send + 'static>(f: impl FnOnce() -> Result<T, ApiError> + Send + 'static) -> Result<T, ApiError> {
    tokio::task::spawn_blocking(f)
        .await
        .map_err(|e| ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, format!("solver task failed: {e}")))?
}

async fn solve_handler(
    State(state): State<Arc<AppState>>,
    body: Result<Json<SolveRequest>, JsonRejection>,
) -> Result<Json<SolveReport>, ApiError> {
    let Json(req) = body?;
    tracing::debug!(?req, "solve");
    let options = SolveOptions {
        forced_in: req.forced_edges,
        forced_out: req.banned_edges,
        removed_tickets: req.removed_tickets,
        ..state.options()
    };
    let board = state.board.clone();
    let budget = req.budget;
    blocking(move || {
        let r = solve(&board, budget, &options)?;
        Ok(Json(SolveReport::new(&board, budget, &r)))
    })
    .await
}

async fn whatif_handler(
    State(state): State<Arc<AppState>>,
    body: Result<Json<WhatIfRequest>, JsonRejection>,
) -> Result<Json<WhatIfResponse>, ApiError> {
    let Json(req) = body?;
    tracing::debug!(?req, "whatif");
    let options = state.options();
    let board = state.board.clone();
    blocking(move || Ok(Json(solve_partial(&req.state(&board), &options)?.into()))).await
}
