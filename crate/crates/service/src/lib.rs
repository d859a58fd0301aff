//! HTTP service for registering annotation packages and retrieving
//! timeline layouts and SVG renderings.
//!
//! Packages are content-addressed: the id is the SHA-256 of the uploaded
//! bytes, so a shared URL always names one exact dataset. Query strings on
//! the timeline endpoints are the configuration DSL, plus an optional
//! `width` parameter that is stripped before parsing.

use std::future::Future;
use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::rejection::BytesRejection;
use axum::extract::{DefaultBodyLimit, Path, RawQuery, State};
use axum::http::{header, HeaderValue, StatusCode, Uri};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use tlviz_core::config::{parse_config, serialize_config};
use tlviz_core::pipeline::{layout_for, parse_width, render_for, DEFAULT_WIDTH_PX};
use tokio::net::TcpListener;

mod error;
mod registry;
mod summary;

pub use error::{ApiError, ErrorBody};
pub use registry::{package_id, Registry, RegistryError, StoredPackage};
pub use summary::{AnnotationDetail, PackageSummary, TypeSummary};

pub const DEFAULT_PORT: u16 = 8710;
pub const DEFAULT_MAX_PACKAGE_BYTES: usize = 64 * 1024 * 1024;

pub const SVG_CONTENT_TYPE: &str = "image/svg+xml";
pub const JSON_CONTENT_TYPE: &str = "application/json";
pub const TEXT_CONTENT_TYPE: &str = "text/plain; charset=utf-8";

#[derive(Debug, Clone)]
pub struct AppState {
    pub registry: Arc<Registry>,
    pub max_package_bytes: usize,
}

impl AppState {
    pub fn new(registry: Registry) -> Self {
        AppState {
            registry: Arc::new(registry),
            max_package_bytes: DEFAULT_MAX_PACKAGE_BYTES,
        }
    }

    pub fn with_max_package_bytes(mut self, limit: usize) -> Self {
        self.max_package_bytes = limit;
        self
    }
}

pub fn router(state: AppState) -> Router {
    let limit = state.max_package_bytes;
    Router::new()
        .route("/packages", post(upload_package))
        .route("/packages/{id}", get(get_summary))
        .route("/packages/{id}/timeline.svg", get(get_timeline_svg))
        .route("/packages/{id}/timeline.json", get(get_timeline_json))
        .route("/packages/{id}/annotations/{ann_id}", get(get_annotation))
        .route("/canonical", get(canonicalize))
        .fallback(not_found)
        .layer(DefaultBodyLimit::max(limit))
        .with_state(state)
}

#[derive(Debug, Clone)]
pub struct ServeOptions {
    pub addr: SocketAddr,
    pub data_dir: Option<PathBuf>,
    pub max_package_bytes: usize,
}

/// Serves `state` on an already-bound listener until `shutdown` resolves.
pub async fn serve(
    listener: TcpListener,
    state: AppState,
    shutdown: impl Future<Output = ()> + Send + 'static,
) -> std::io::Result<()> {
    if let Ok(addr) = listener.local_addr() {
        tracing::info!(%addr, packages = state.registry.len(), "timeline service listening");
    }
    axum::serve(listener, router(state))
        .with_graceful_shutdown(shutdown)
        .await
}

/// Opens the store, binds the address and serves until Ctrl-C.
pub async fn run(opts: ServeOptions) -> Result<(), RunError> {
    let registry = match &opts.data_dir {
        Some(dir) => Registry::open(dir)?,
        None => Registry::in_memory(),
    };
    let state = AppState::new(registry).with_max_package_bytes(opts.max_package_bytes);
    let listener = TcpListener::bind(opts.addr)
        .await
        .map_err(|source| RunError::Bind {
            addr: opts.addr,
            source,
        })?;
    let shutdown = async {
        let _ = tokio::signal::ctrl_c().await;
    };
    serve(listener, state, shutdown).await.map_err(RunError::Serve)
}

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error("cannot open data directory: {0}")]
    Store(#[from] RegistryError),
    #[error("cannot listen on {addr}: {source}")]
    Bind {
        addr: SocketAddr,
        source: std::io::Error,
    },
    #[error("server error: {0}")]
    Serve(std::io::Error),
}

/// Splits `width` out of a timeline query, returning the remaining DSL text
/// and the requested width.
pub fn split_width(query: &str) -> Result<(String, u32), ApiError> {
    let mut width = None;
    let mut rest = Vec::new();
    if !query.is_empty() {
        for param in query.split('&') {
            let (key, value) = param.split_once('=').unwrap_or((param, ""));
            if key == "width" {
                if width.is_some() {
                    return Err(ApiError::DuplicateWidth);
                }
                width = Some(parse_width(value)?);
            } else {
                rest.push(param);
            }
        }
    }
    Ok((rest.join("&"), width.unwrap_or(DEFAULT_WIDTH_PX)))
}

fn with_content_type(content_type: &'static str, body: impl Into<axum::body::Body>) -> Response {
    let mut response = Response::new(body.into());
    response
        .headers_mut()
        .insert(header::CONTENT_TYPE, HeaderValue::from_static(content_type));
    response
}

fn lookup(state: &AppState, id: &str) -> Result<Arc<StoredPackage>, ApiError> {
    state
        .registry
        .get(id)
        .ok_or_else(|| ApiError::PackageNotFound(id.to_owned()))
}

/// Runs CPU-bound work off the async executor.
async fn blocking<T: Send + 'static>(
    f: impl FnOnce() -> Result<T, ApiError> + Send + 'static,
) -> Result<T, ApiError> {
    tokio::task::spawn_blocking(f)
        .await
        .map_err(|e| ApiError::Internal(e.to_string()))?
}

async fn upload_package(
    State(state): State<AppState>,
    body: Result<Bytes, BytesRejection>,
) -> Result<Json<PackageSummary>, ApiError> {
    let bytes = body.map_err(|rejection| {
        if rejection.status() == StatusCode::PAYLOAD_TOO_LARGE {
            ApiError::TooLarge {
                limit: state.max_package_bytes,
            }
        } else {
            ApiError::Body(rejection.body_text())
        }
    })?;
    let registry = state.registry.clone();
    let stored = blocking(move || Ok(registry.insert(&bytes)?)).await?;
    tracing::info!(id = %stored.id, bytes = stored.byte_len, "package registered");
    Ok(Json(PackageSummary::new(&stored)))
}

async fn get_summary(
    State(state): State<AppState>,
    Path(id): Path<String>,
) -> Result<Json<PackageSummary>, ApiError> {
    let stored = lookup(&state, &id)?;
    Ok(Json(PackageSummary::new(&stored)))
}

async fn get_timeline_svg(
    State(state): State<AppState>,
    Path(id): Path<String>,
    RawQuery(query): RawQuery,
) -> Result<Response, ApiError> {
    let stored = lookup(&state, &id)?;
    let (dsl, width) = split_width(query.as_deref().unwrap_or(""))?;
    let svg = blocking(move || Ok(render_for(&stored.package, &dsl, width)?)).await?;
    Ok(with_content_type(SVG_CONTENT_TYPE, svg.into_string()))
}

async fn get_timeline_json(
    State(state): State<AppState>,
    Path(id): Path<String>,
    RawQuery(query): RawQuery,
) -> Result<Response, ApiError> {
    let stored = lookup(&state, &id)?;
    let (dsl, width) = split_width(query.as_deref().unwrap_or(""))?;
    let json = blocking(move || Ok(layout_for(&stored.package, &dsl, width)?.to_json())).await?;
    Ok(with_content_type(JSON_CONTENT_TYPE, json))
}

async fn get_annotation(
    State(state): State<AppState>,
    Path((id, ann_id)): Path<(String, String)>,
) -> Result<Json<AnnotationDetail>, ApiError> {
    let stored = lookup(&state, &id)?;
    let detail = AnnotationDetail::find(&stored.package, &ann_id).ok_or(ApiError::AnnotationNotFound {
        package: id,
        annotation: ann_id,
    })?;
    Ok(Json(detail))
}

async fn canonicalize(RawQuery(query): RawQuery) -> Result<Response, ApiError> {
    let config = parse_config(query.as_deref().unwrap_or(""))?;
    Ok(with_content_type(TEXT_CONTENT_TYPE, serialize_config(&config)))
}

async fn not_found(uri: Uri) -> impl IntoResponse {
    ApiError::RouteNotFound(uri.path().to_owned())
}
