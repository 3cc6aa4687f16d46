use std::collections::HashMap;

use axum::body::Bytes;
use axum::extract::{Path, Query, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::Json;
use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_json::{json, Value};

use hymap_core::dsl::{self, export_json, MapDocument};
use hymap_core::hypogen::{self, HypothesisId};
use hymap_core::registry::{Evidence, Risk, Status, SummaryMode};
use hymap_core::{render, structure_report, CognitiveMap};

use crate::error::{parse_failure, ApiError};
use crate::state::{AppState, StoredMap};

pub(crate) fn json_body<T: DeserializeOwned>(bytes: &Bytes) -> Result<T, ApiError> {
    serde_json::from_slice(bytes).map_err(|e| ApiError::bad_request("BadRequest", format!("request body: {e}")))
}

/// `{"dsl": "..."}` or `{"document": {...}}`.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MapSource {
    dsl: Option<String>,
    document: Option<Value>,
}

fn read_source(bytes: &Bytes) -> Result<(CognitiveMap, Vec<dsl::ParseWarning>), ApiError> {
    let src: MapSource = json_body(bytes)?;
    match (src.dsl, src.document) {
        (Some(text), None) => {
            let parsed = dsl::parse_str(&text).map_err(parse_failure)?;
            Ok((parsed.map, parsed.warnings))
        }
        (None, Some(doc)) => Ok((MapDocument::from_value(doc)?.into_map()?, Vec::new())),
        _ => Err(ApiError::bad_request(
            "BadRequest",
            "request body needs exactly one of `dsl` or `document`",
        )),
    }
}

pub async fn create(State(state): State<AppState>, body: Bytes) -> Result<Response, ApiError> {
    let (mut map, warnings) = read_source(&body)?;
    let id = uuid::Uuid::new_v4().simple().to_string();
    map.set_id(id.clone());
    let diagnostics = map.validate();
    let stored = StoredMap {
        map,
        registry: Default::default(),
    };
    state.persist(&id, &stored).map_err(|e| ApiError::internal(e.to_string()))?;
    state.insert_map(id.clone(), stored);
    let body = json!({ "id": id, "warnings": warnings, "diagnostics": diagnostics });
    Ok((StatusCode::CREATED, Json(body)).into_response())
}

pub async fn fetch(
    State(state): State<AppState>,
    Path(id): Path<String>,
    Query(q): Query<HashMap<String, String>>,
) -> Result<Response, ApiError> {
    let entry = state.map(&id).ok_or_else(|| ApiError::not_found("map", &id))?;
    let stored = entry.lock().expect("map lock");
    match q.get("format").map(String::as_str) {
        None | Some("json") => Ok((
            [(header::CONTENT_TYPE, "application/json")],
            export_json(&stored.map),
        )
            .into_response()),
        Some("dsl") => Ok((
            [(header::CONTENT_TYPE, "text/plain; charset=utf-8")],
            dsl::serialize(&stored.map).text().to_string(),
        )
            .into_response()),
        Some(other) => Err(ApiError::bad_request("BadRequest", format!("unknown format `{other}`"))),
    }
}

pub async fn replace(State(state): State<AppState>, Path(id): Path<String>, body: Bytes) -> Result<Response, ApiError> {
    let entry = state.map(&id).ok_or_else(|| ApiError::not_found("map", &id))?;
    let (mut map, warnings) = read_source(&body)?;
    map.set_id(id.clone());
    let mut stored = entry.lock().expect("map lock");
    let diagnostics = map.validate();
    let hyps = hypogen::generate(&map).unwrap_or_default();
    let mut registry = stored.registry.clone();
    let pruned = registry.prune(&hyps);
    let next = StoredMap { map, registry };
    state.persist(&id, &next).map_err(|e| ApiError::internal(e.to_string()))?;
    *stored = next;
    Ok(Json(json!({ "id": id, "warnings": warnings, "diagnostics": diagnostics, "pruned": pruned })).into_response())
}

pub async fn diagnostics(State(state): State<AppState>, Path(id): Path<String>) -> Result<Response, ApiError> {
    let entry = state.map(&id).ok_or_else(|| ApiError::not_found("map", &id))?;
    let stored = entry.lock().expect("map lock");
    let diagnostics = stored.map.validate();
    let report = structure_report(&stored.map);
    Ok(Json(json!({ "diagnostics": diagnostics, "report": report })).into_response())
}

pub async fn layout(State(state): State<AppState>, Path(id): Path<String>) -> Result<Response, ApiError> {
    let entry = state.map(&id).ok_or_else(|| ApiError::not_found("map", &id))?;
    let stored = entry.lock().expect("map lock");
    Ok(Json(render::layout(&stored.map)?).into_response())
}

pub async fn hypotheses(
    State(state): State<AppState>,
    Path(id): Path<String>,
    Query(q): Query<HashMap<String, String>>,
) -> Result<Response, ApiError> {
    let entry = state.map(&id).ok_or_else(|| ApiError::not_found("map", &id))?;
    let stored = entry.lock().expect("map lock");
    let mut hyps = hypogen::generate(&stored.map)?;
    if matches!(q.get("prioritized").map(String::as_str), Some("1" | "true")) {
        hyps = hypogen::prioritize(&hyps, &stored.registry);
    }
    let rows: Vec<Value> = hyps
        .iter()
        .map(|h| {
            let current = stored.registry.current(&h.id);
            let mut v = serde_json::to_value(h).expect("hypotheses serialize");
            v["statement"] = json!(h.statement());
            v["status"] = json!(current.map_or(Status::Unassessed, |a| a.status));
            v["risk"] = json!(current.and_then(|a| a.risk));
            v
        })
        .collect();
    Ok(Json(rows).into_response())
}

pub async fn summary(
    State(state): State<AppState>,
    Path(id): Path<String>,
    Query(q): Query<HashMap<String, String>>,
) -> Result<Response, ApiError> {
    let entry = state.map(&id).ok_or_else(|| ApiError::not_found("map", &id))?;
    let stored = entry.lock().expect("map lock");
    let mode = match q.get("mode").map(String::as_str) {
        None | Some("paper") => SummaryMode::Paper,
        Some("full") => SummaryMode::Full,
        Some(other) => return Err(ApiError::bad_request("BadRequest", format!("unknown summary mode `{other}`"))),
    };
    let hyps = hypogen::generate(&stored.map)?;
    Ok(Json(stored.registry.summary(&hyps, mode)).into_response())
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct AssessmentRequest {
    map_id: String,
    status: Status,
    #[serde(default)]
    risk: Option<Risk>,
    #[serde(default)]
    evidence: Vec<Evidence>,
}

pub async fn assess(State(state): State<AppState>, Path(id): Path<String>, body: Bytes) -> Result<Response, ApiError> {
    let req: AssessmentRequest = json_body(&body)?;
    let entry = state.map(&req.map_id).ok_or_else(|| ApiError::not_found("map", &req.map_id))?;
    let mut stored = entry.lock().expect("map lock");
    let hyps = hypogen::generate(&stored.map)?;
    let mut registry = stored.registry.clone();
    let assessment = registry
        .assess(&hyps, &HypothesisId(id.clone()), req.status, req.risk, req.evidence)?
        .clone();
    let next = StoredMap {
        map: stored.map.clone(),
        registry,
    };
    state.persist(&req.map_id, &next).map_err(|e| ApiError::internal(e.to_string()))?;
    *stored = next;
    Ok((StatusCode::CREATED, Json(assessment)).into_response())
}
