use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::Json;
use serde::Serialize;
use serde_json::{json, Value};

use hymap_core::analysis::AnalysisError;
use hymap_core::dsl::{JsonError, ParseDiagnostic};
use hymap_core::elicitation::ElicitationError;
use hymap_core::hypogen::HypogenError;
use hymap_core::registry::RegistryError;
use hymap_core::render::RenderError;

/// Error response: `{code, message, details}` with the same codes the core
/// library uses.
#[derive(Debug)]
pub struct ApiError {
    pub status: StatusCode,
    pub code: String,
    pub message: String,
    pub details: Value,
}

#[derive(Serialize)]
struct Body<'a> {
    code: &'a str,
    message: &'a str,
    details: &'a Value,
}

impl ApiError {
    pub fn new(status: StatusCode, code: impl Into<String>, message: impl Into<String>) -> Self {
        ApiError {
            status,
            code: code.into(),
            message: message.into(),
            details: Value::Null,
        }
    }

    pub fn with_details(mut self, details: impl Serialize) -> Self {
        self.details = serde_json::to_value(details).unwrap_or(Value::Null);
        self
    }

    pub fn bad_request(code: &str, message: impl Into<String>) -> Self {
        Self::new(StatusCode::BAD_REQUEST, code, message)
    }

    pub fn not_found(what: &str, id: &str) -> Self {
        Self::new(StatusCode::NOT_FOUND, "NotFound", format!("no {what} `{id}`")).with_details(json!({ "id": id }))
    }

    pub fn internal(message: impl Into<String>) -> Self {
        Self::new(StatusCode::INTERNAL_SERVER_ERROR, "Internal", message)
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let body = Body {
            code: &self.code,
            message: &self.message,
            details: &self.details,
        };
        (self.status, Json(body)).into_response()
    }
}

pub fn parse_failure(diagnostics: Vec<ParseDiagnostic>) -> ApiError {
    ApiError::bad_request("ParseError", format!("{} problem(s) in map source", diagnostics.len()))
        .with_details(json!({ "diagnostics": diagnostics }))
}

impl From<JsonError> for ApiError {
    fn from(e: JsonError) -> Self {
        let details = match &e {
            JsonError::SchemaViolation { path, .. } => json!({ "path": path }),
            JsonError::DanglingReference { path, id } => json!({ "path": path, "id": id }),
            _ => Value::Null,
        };
        ApiError::bad_request(e.code(), e.to_string()).with_details(details)
    }
}

impl From<ElicitationError> for ApiError {
    fn from(e: ElicitationError) -> Self {
        let status = match &e {
            ElicitationError::StalePrompt { .. }
            | ElicitationError::SessionDone
            | ElicitationError::PhaseError { .. }
            | ElicitationError::NotConfirmed => StatusCode::CONFLICT,
            ElicitationError::ReplayMismatch(_) | ElicitationError::Log(_) => StatusCode::INTERNAL_SERVER_ERROR,
            _ => StatusCode::BAD_REQUEST,
        };
        let details = match &e {
            ElicitationError::StalePrompt { expected, got } => json!({ "current": expected, "got": got }),
            ElicitationError::InvalidMap(d) => json!({ "diagnostics": d }),
            _ => Value::Null,
        };
        ApiError::new(status, e.code(), e.to_string()).with_details(details)
    }
}

impl From<RegistryError> for ApiError {
    fn from(e: RegistryError) -> Self {
        let status = match e {
            RegistryError::UnknownHypothesis(_) => StatusCode::NOT_FOUND,
            RegistryError::Io(_) => StatusCode::INTERNAL_SERVER_ERROR,
            _ => StatusCode::BAD_REQUEST,
        };
        ApiError::new(status, e.code(), e.to_string())
    }
}

impl From<AnalysisError> for ApiError {
    fn from(e: AnalysisError) -> Self {
        match e {
            AnalysisError::InvalidMap(d) => invalid_map(d),
            AnalysisError::UnknownEdge(id) => ApiError::not_found("edge", &id),
        }
    }
}

impl From<HypogenError> for ApiError {
    fn from(e: HypogenError) -> Self {
        match e {
            HypogenError::InvalidMap(d) => invalid_map(d),
        }
    }
}

impl From<RenderError> for ApiError {
    fn from(e: RenderError) -> Self {
        match e {
            RenderError::InvalidMap(d) => invalid_map(d),
        }
    }
}

fn invalid_map(diagnostics: Vec<hymap_core::Diagnostic>) -> ApiError {
    ApiError::bad_request("InvalidMap", "the map has validation errors").with_details(json!({ "diagnostics": diagnostics }))
}
