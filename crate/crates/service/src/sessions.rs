use axum::body::Bytes;
use axum::extract::{Path, State};
use axum::http::{header, HeaderMap, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::Json;
use chrono::Utc;
use serde::Deserialize;
use serde_json::{json, Value};

use hymap_core::elicitation::{log, Answer, ElicitationSession, SessionEvent, DEFAULT_NODE_BUDGET};

use crate::error::ApiError;
use crate::maps::json_body;
use crate::state::{AppState, LiveSession, StoredMap};

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CreateRequest {
    #[serde(default)]
    title: String,
    #[serde(default)]
    node_budget: Option<usize>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct AnswerRequest {
    prompt_id: String,
    payload: Answer,
}

fn prompt_body(session: &ElicitationSession) -> Value {
    json!({
        "session_id": session.id(),
        "phase": session.phase(),
        "prompt": session.next_prompt().ok(),
    })
}

fn log_error(e: impl std::fmt::Display) -> ApiError {
    ApiError::internal(format!("session log: {e}"))
}

pub async fn create(State(state): State<AppState>, body: Bytes) -> Result<Response, ApiError> {
    let req: CreateRequest = if body.is_empty() {
        CreateRequest {
            title: String::new(),
            node_budget: None,
        }
    } else {
        json_body(&body)?
    };
    let id = uuid::Uuid::new_v4().simple().to_string();
    let token = uuid::Uuid::new_v4().simple().to_string();
    let now = Utc::now();
    let session =
        ElicitationSession::start_with(&id, &req.title, req.node_budget.unwrap_or(DEFAULT_NODE_BUDGET), now);
    log::write_events(&state.session_log_path(&id), session.log()).map_err(log_error)?;
    let mut body = prompt_body(&session);
    body["token"] = json!(token);
    state.insert_session(
        id,
        LiveSession {
            session,
            token,
            expires_at: now + state.config().session_ttl,
            last: None,
            finished: None,
        },
    );
    Ok((StatusCode::CREATED, Json(body)).into_response())
}

/// Look up a session, check its bearer token and expiry, and run `f` while
/// holding its lock.
fn with_session<T>(
    state: &AppState,
    id: &str,
    headers: &HeaderMap,
    f: impl FnOnce(&mut LiveSession) -> Result<T, ApiError>,
) -> Result<T, ApiError> {
    let entry = state.session(id).ok_or_else(|| ApiError::not_found("session", id))?;
    let mut live = entry.lock().expect("session lock");
    let presented = headers
        .get(header::AUTHORIZATION)
        .and_then(|v| v.to_str().ok())
        .and_then(|v| v.strip_prefix("Bearer "));
    if presented != Some(live.token.as_str()) {
        return Err(ApiError::new(
            StatusCode::UNAUTHORIZED,
            "Unauthorized",
            "missing or wrong session token",
        ));
    }
    let now = Utc::now();
    if now >= live.expires_at {
        return Err(ApiError::new(StatusCode::GONE, "SessionExpired", "the session has expired"));
    }
    live.expires_at = now + state.config().session_ttl;
    f(&mut live)
}

pub async fn prompt(State(state): State<AppState>, Path(id): Path<String>, headers: HeaderMap) -> Result<Response, ApiError> {
    with_session(&state, &id, &headers, |live| {
        live.session.next_prompt()?;
        Ok(Json(prompt_body(&live.session)).into_response())
    })
}

pub async fn answer(
    State(state): State<AppState>,
    Path(id): Path<String>,
    headers: HeaderMap,
    body: Bytes,
) -> Result<Response, ApiError> {
    let req: AnswerRequest = json_body(&body)?;
    let log_path = state.session_log_path(&id);
    with_session(&state, &id, &headers, |live| {
        if let Some((prompt_id, payload, response)) = &live.last {
            if *prompt_id == req.prompt_id && *payload == req.payload {
                return Ok(Json(response.clone()).into_response());
            }
        }
        let mut next = live.session.clone();
        let deltas = next.answer(&req.prompt_id, req.payload.clone())?;
        let event = next.log().last().expect("an accepted answer is logged");
        log::append_event(&log_path, event).map_err(log_error)?;
        let mut response = prompt_body(&next);
        response["deltas"] = json!(deltas);
        live.session = next;
        live.last = Some((req.prompt_id, req.payload, response.clone()));
        Ok(Json(response).into_response())
    })
}

pub async fn finish(State(state): State<AppState>, Path(id): Path<String>, headers: HeaderMap) -> Result<Response, ApiError> {
    let log_path = state.session_log_path(&id);
    with_session(&state, &id, &headers, |live| {
        if let Some(done) = &live.finished {
            return Ok(Json(done.clone()).into_response());
        }
        let mut next = live.session.clone();
        let finished = next.finish()?;
        if let Some(event @ SessionEvent::Finish { .. }) = next.log().last() {
            log::append_event(&log_path, event).map_err(log_error)?;
        }
        let map_id = uuid::Uuid::new_v4().simple().to_string();
        let mut map = finished.map.clone();
        map.set_id(map_id.clone());
        let stored = StoredMap {
            map,
            registry: Default::default(),
        };
        state.persist(&map_id, &stored).map_err(|e| ApiError::internal(e.to_string()))?;
        state.insert_map(map_id.clone(), stored);
        let body = json!({
            "map_id": map_id,
            "hypotheses": finished.hypotheses,
            "unsaturated": finished.unsaturated,
        });
        live.session = next;
        live.finished = Some(body.clone());
        Ok(Json(body).into_response())
    })
}
