//! HTTP API for maps, assessment registries and live elicitation sessions.
//!
//! All state changes go through the same `hymap_core` operations the CLI
//! uses. Each map and each session sits behind its own lock, so requests
//! for different maps or sessions run concurrently while operations on one
//! of them are serialized.

mod error;
mod maps;
mod sessions;
mod state;

use std::net::SocketAddr;
use std::path::PathBuf;

use axum::http::{HeaderValue, Method};
use axum::routing::{get, post};
use axum::Router;
use tower_http::cors::{AllowOrigin, CorsLayer};

pub use error::ApiError;
pub use state::{AppState, StoreError};

pub const DEFAULT_PORT: u16 = 7878;
pub const DEFAULT_SESSION_TTL_HOURS: i64 = 24;

#[derive(Debug, Clone)]
pub struct Config {
    pub port: u16,
    pub storage: PathBuf,
    /// Origins allowed to call the API from a browser. Empty disables CORS.
    pub cors_origins: Vec<String>,
    pub session_ttl: chrono::Duration,
}

impl Config {
    pub fn new(storage: impl Into<PathBuf>) -> Self {
        Config {
            port: DEFAULT_PORT,
            storage: storage.into(),
            cors_origins: Vec::new(),
            session_ttl: chrono::Duration::hours(DEFAULT_SESSION_TTL_HOURS),
        }
    }

    /// `HYMAP_PORT`, `HYMAP_STORAGE`, `HYMAP_CORS_ORIGIN` (comma separated).
    pub fn from_env() -> Result<Self, String> {
        let storage = std::env::var("HYMAP_STORAGE").unwrap_or_else(|_| "hymap-data".into());
        let mut config = Config::new(storage);
        if let Ok(p) = std::env::var("HYMAP_PORT") {
            config.port = p.parse().map_err(|_| format!("HYMAP_PORT: not a port number: {p}"))?;
        }
        if let Ok(o) = std::env::var("HYMAP_CORS_ORIGIN") {
            config.cors_origins = o.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect();
        }
        Ok(config)
    }
}

pub fn router(state: AppState) -> Router {
    let cors = cors_layer(&state.config().cors_origins);
    let app = Router::new()
        .route("/maps", post(maps::create))
        .route("/maps/{id}", get(maps::fetch).put(maps::replace))
        .route("/maps/{id}/diagnostics", get(maps::diagnostics))
        .route("/maps/{id}/layout", get(maps::layout))
        .route("/maps/{id}/hypotheses", get(maps::hypotheses))
        .route("/maps/{id}/summary", get(maps::summary))
        .route("/hypotheses/{id}/assessment", post(maps::assess))
        .route("/sessions", post(sessions::create))
        .route("/sessions/{id}/prompt", get(sessions::prompt))
        .route("/sessions/{id}/answer", post(sessions::answer))
        .route("/sessions/{id}/finish", post(sessions::finish))
        .with_state(state);
    match cors {
        Some(layer) => app.layer(layer),
        None => app,
    }
}

fn cors_layer(origins: &[String]) -> Option<CorsLayer> {
    if origins.is_empty() {
        return None;
    }
    let allowed: Vec<HeaderValue> = origins.iter().filter_map(|o| HeaderValue::from_str(o).ok()).collect();
    Some(
        CorsLayer::new()
            .allow_origin(AllowOrigin::list(allowed))
            .allow_methods([Method::GET, Method::POST, Method::PUT])
            .allow_headers([axum::http::header::CONTENT_TYPE, axum::http::header::AUTHORIZATION]),
    )
}

/// Bind and serve until the process is stopped.
pub async fn serve(config: Config) -> std::io::Result<()> {
    let addr = SocketAddr::from(([127, 0, 0, 1], config.port));
    let state = AppState::open(config).map_err(std::io::Error::other)?;
    let listener = tokio::net::TcpListener::bind(addr).await?;
    tracing::info!("listening on http://{}", listener.local_addr()?);
    axum::serve(listener, router(state)).await
}
