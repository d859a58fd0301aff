use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::Json;
use serde::Serialize;
use thiserror::Error;
use tlviz_core::config::{ConfigError, ResolveError};
use tlviz_core::layout::LayoutError;
use tlviz_core::model::{Issue, PackageError};
use tlviz_core::pipeline::{PipelineError, WidthError};

use crate::registry::RegistryError;

#[derive(Debug, Error)]
pub enum ApiError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Resolve(#[from] ResolveError),
    #[error(transparent)]
    Layout(#[from] LayoutError),
    #[error(transparent)]
    Width(#[from] WidthError),
    #[error("duplicate width parameter")]
    DuplicateWidth,
    #[error(transparent)]
    Package(#[from] PackageError),
    #[error("unknown package {0:?}")]
    PackageNotFound(String),
    #[error("unknown annotation {annotation:?} in package {package:?}")]
    AnnotationNotFound { package: String, annotation: String },
    #[error("no route for {0}")]
    RouteNotFound(String),
    #[error("package exceeds the {limit}-byte size limit")]
    TooLarge { limit: usize },
    #[error("could not read request body: {0}")]
    Body(String),
    #[error("internal error: {0}")]
    Internal(String),
}

impl From<PipelineError> for ApiError {
    fn from(e: PipelineError) -> Self {
        match e {
            PipelineError::Config(e) => e.into(),
            PipelineError::Resolve(e) => e.into(),
            PipelineError::Layout(e) => e.into(),
            PipelineError::Width(e) => e.into(),
        }
    }
}

impl From<RegistryError> for ApiError {
    fn from(e: RegistryError) -> Self {
        match e {
            RegistryError::Package(e) => e.into(),
            e @ RegistryError::Io { .. } => ApiError::Internal(e.to_string()),
        }
    }
}

/// JSON error body. Config errors carry the character position into
/// `input`, the decoded configuration text.
#[derive(Debug, Serialize)]
pub struct ErrorBody {
    pub code: String,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub position: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub found: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub path: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub errors: Option<Vec<Issue>>,
}

impl ApiError {
    pub fn status(&self) -> StatusCode {
        match self {
            ApiError::PackageNotFound(_)
            | ApiError::AnnotationNotFound { .. }
            | ApiError::RouteNotFound(_) => StatusCode::NOT_FOUND,
            ApiError::TooLarge { .. } => StatusCode::PAYLOAD_TOO_LARGE,
            ApiError::Internal(_) => StatusCode::INTERNAL_SERVER_ERROR,
            _ => StatusCode::BAD_REQUEST,
        }
    }

    pub fn code(&self) -> &str {
        match self {
            ApiError::Config(e) => e.code(),
            ApiError::Resolve(e) => e.code(),
            ApiError::Layout(_) => "layout_error",
            ApiError::Width(_) | ApiError::DuplicateWidth => "invalid_width",
            ApiError::Package(e) => e.code(),
            ApiError::PackageNotFound(_) => "package_not_found",
            ApiError::AnnotationNotFound { .. } => "annotation_not_found",
            ApiError::RouteNotFound(_) => "not_found",
            ApiError::TooLarge { .. } => "payload_too_large",
            ApiError::Body(_) => "invalid_body",
            ApiError::Internal(_) => "internal_error",
        }
    }

    pub fn body(&self) -> ErrorBody {
        let mut body = ErrorBody {
            code: self.code().to_owned(),
            message: self.to_string(),
            position: None,
            expected: None,
            found: None,
            input: None,
            path: None,
            errors: None,
        };
        match self {
            ApiError::Config(e) => {
                body.position = Some(e.position);
                body.expected = Some(e.expected.clone());
                body.found = Some(e.found.clone());
                body.input = Some(e.input.clone());
            }
            ApiError::Package(e) => {
                body.path = e.path().map(str::to_owned);
                match e {
                    PackageError::Syntax { position, .. } => body.position = Some(*position),
                    PackageError::Validation(report) => body.errors = Some(report.errors.clone()),
                    PackageError::Schema { .. } => {}
                }
            }
            _ => {}
        }
        body
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        if self.status().is_server_error() {
            tracing::error!(error = %self, "request failed");
        }
        (self.status(), Json(self.body())).into_response()
    }
}
