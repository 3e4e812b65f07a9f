use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::State;
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::Router;
use serde::de::DeserializeOwned;
use serde::Serialize;
use tower_http::cors::CorsLayer;

use crate::error::{ApiError, Envelope};
use crate::handlers;
use crate::state::AppState;

type Shared = State<Arc<AppState>>;

fn respond<T: Serialize>(r: Result<T, ApiError>) -> Response {
    let status = match &r {
        Ok(_) => StatusCode::OK,
        Err(e) => StatusCode::from_u16(e.status()).unwrap_or(StatusCode::BAD_REQUEST),
    };
    let body = Envelope::from_result(r).to_json();
    (status, [(header::CONTENT_TYPE, "application/json")], body).into_response()
}

fn parse<T: DeserializeOwned>(body: &Bytes) -> Result<T, ApiError> {
    serde_json::from_slice(body).map_err(|e| ApiError::invalid(format!("request body: {e}")))
}

async fn health(State(s): Shared) -> Response {
    respond(Ok(handlers::health(&s)))
}

async fn models(State(s): Shared) -> Response {
    respond(Ok(handlers::models(&s)))
}

async fn memory(State(s): Shared, body: Bytes) -> Response {
    respond(parse(&body).and_then(|r| handlers::memory(&s, &r)))
}

async fn frontier(State(s): Shared, body: Bytes) -> Response {
    // An empty body means default axis and no filters.
    let req = if body.iter().all(u8::is_ascii_whitespace) {
        Ok(Default::default())
    } else {
        parse(&body)
    };
    respond(req.and_then(|r| handlers::frontier(&s, &r)))
}

async fn plan(State(s): Shared, body: Bytes) -> Response {
    let req = if body.iter().all(u8::is_ascii_whitespace) {
        Ok(Default::default())
    } else {
        parse(&body)
    };
    respond(req.and_then(|r| handlers::plan(&s, &r)))
}

async fn estimate(State(s): Shared, body: Bytes) -> Response {
    respond(parse(&body).and_then(|r| handlers::estimate(&s, &r)))
}

async fn not_found() -> Response {
    respond::<()>(Err(ApiError::new("NOT_FOUND", "no such endpoint")))
}

/// All routes over `state`. `permissive_cors` allows any origin, for a UI
/// served from another port during development.
pub fn router(state: Arc<AppState>, permissive_cors: bool) -> Router {
    let app = Router::new()
        .route("/health", get(health))
        .route("/models", get(models))
        .route("/memory", post(memory))
        .route("/frontier", post(frontier))
        .route("/plan", post(plan))
        .route("/estimate", post(estimate))
        .fallback(not_found)
        .with_state(state);
    if permissive_cors {
        app.layer(CorsLayer::permissive())
    } else {
        app
    }
}

/// Serves until ctrl-c.
pub async fn serve(listener: tokio::net::TcpListener, app: Router) -> std::io::Result<()> {
    axum::serve(listener, app)
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
}
