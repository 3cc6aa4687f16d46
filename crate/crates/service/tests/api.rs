use std::path::PathBuf;

use axum::body::Body;
use axum::http::{header, Method, Request, StatusCode};
use axum::Router;
use http_body_util::BodyExt;
use serde_json::{json, Value};
use tower::ServiceExt;

use hymap_service::{router, AppState, Config};

fn corpus(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus").join(name)
}

fn app(dir: &tempfile::TempDir) -> Router {
    router(AppState::open(Config::new(dir.path())).unwrap())
}

async fn call(app: &Router, method: Method, uri: &str, token: Option<&str>, body: Option<Value>) -> (StatusCode, Value) {
    let mut req = Request::builder().method(method).uri(uri);
    if let Some(t) = token {
        req = req.header(header::AUTHORIZATION, format!("Bearer {t}"));
    }
    let req = match body {
        Some(b) => req
            .header(header::CONTENT_TYPE, "application/json")
            .body(Body::from(b.to_string())),
        None => req.body(Body::empty()),
    }
    .unwrap();
    let res = app.clone().oneshot(req).await.unwrap();
    let status = res.status();
    let bytes = res.into_body().collect().await.unwrap().to_bytes();
    let value = serde_json::from_slice(&bytes).unwrap_or_else(|_| Value::String(String::from_utf8_lossy(&bytes).into()));
    (status, value)
}

async fn post_map(app: &Router, file: &str) -> String {
    let dsl = std::fs::read_to_string(corpus(file)).unwrap();
    let (status, body) = call(app, Method::POST, "/maps", None, Some(json!({ "dsl": dsl }))).await;
    assert_eq!(status, StatusCode::CREATED, "{body}");
    body["id"].as_str().unwrap().to_string()
}

#[tokio::test]
async fn first_prompt_asks_for_the_product_name() {
    let dir = tempfile::tempdir().unwrap();
    let app = app(&dir);
    let (status, body) = call(&app, Method::POST, "/sessions", None, Some(json!({ "title": "t" }))).await;
    assert_eq!(status, StatusCode::CREATED);
    assert_eq!(body["phase"], "naming");
    assert_eq!(body["prompt"]["question"], "What is the product/solution name?");
    assert!(body["token"].as_str().is_some_and(|t| !t.is_empty()));
}

#[tokio::test]
async fn session_auth_staleness_and_retry() {
    let dir = tempfile::tempdir().unwrap();
    let app = app(&dir);
    let (_, created) = call(&app, Method::POST, "/sessions", None, None).await;
    let sid = created["session_id"].as_str().unwrap();
    let token = created["token"].as_str().unwrap();
    let pid = created["prompt"]["id"].as_str().unwrap().to_string();
    let answer = json!({ "prompt_id": pid, "payload": { "type": "text", "text": "HotelMatch" } });
    let uri = format!("/sessions/{sid}/answer");

    let (status, body) = call(&app, Method::POST, &uri, None, Some(answer.clone())).await;
    assert_eq!(status, StatusCode::UNAUTHORIZED);
    assert_eq!(body["code"], "Unauthorized");
    let (status, _) = call(&app, Method::POST, &uri, Some("wrong"), Some(answer.clone())).await;
    assert_eq!(status, StatusCode::UNAUTHORIZED);

    let (status, first) = call(&app, Method::POST, &uri, Some(token), Some(answer.clone())).await;
    assert_eq!(status, StatusCode::OK, "{first}");
    assert_eq!(first["phase"], "customers");

    // The same answer again is a network retry, not a second answer.
    let (status, again) = call(&app, Method::POST, &uri, Some(token), Some(answer.clone())).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(again, first);

    // A different payload for an already answered prompt is stale.
    let other = json!({ "prompt_id": pid, "payload": { "type": "text", "text": "Other" } });
    let (status, body) = call(&app, Method::POST, &uri, Some(token), Some(other)).await;
    assert_eq!(status, StatusCode::CONFLICT, "{body}");

    let (status, prompt) = call(&app, Method::GET, &format!("/sessions/{sid}/prompt"), Some(token), None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(prompt["prompt"], first["prompt"]);

    let log = std::fs::read_to_string(dir.path().join("sessions").join(format!("{sid}.log.jsonl"))).unwrap();
    assert_eq!(log.lines().count(), 2, "start plus exactly one answer:\n{log}");

    let (status, body) = call(&app, Method::POST, "/sessions/nope/answer", Some(token), Some(answer)).await;
    assert_eq!(status, StatusCode::NOT_FOUND, "{body}");
}

#[tokio::test]
async fn expired_sessions_are_gone() {
    let dir = tempfile::tempdir().unwrap();
    let mut config = Config::new(dir.path());
    config.session_ttl = chrono::Duration::zero();
    let app = router(AppState::open(config).unwrap());
    let (_, created) = call(&app, Method::POST, "/sessions", None, None).await;
    let sid = created["session_id"].as_str().unwrap();
    let token = created["token"].as_str().unwrap();
    let (status, body) = call(&app, Method::GET, &format!("/sessions/{sid}/prompt"), Some(token), None).await;
    assert_eq!(status, StatusCode::GONE);
    assert_eq!(body["code"], "SessionExpired");
}

#[tokio::test]
async fn finishing_requires_confirmation() {
    let dir = tempfile::tempdir().unwrap();
    let app = app(&dir);
    let (_, created) = call(&app, Method::POST, "/sessions", None, None).await;
    let sid = created["session_id"].as_str().unwrap();
    let token = created["token"].as_str().unwrap();
    let (status, body) = call(&app, Method::POST, &format!("/sessions/{sid}/finish"), Some(token), None).await;
    assert_eq!(status, StatusCode::CONFLICT, "{body}");
}

#[tokio::test]
async fn map_lifecycle() {
    let dir = tempfile::tempdir().unwrap();
    let app = app(&dir);
    let id = post_map(&app, "case_e.hymap").await;

    let (status, diag) = call(&app, Method::GET, &format!("/maps/{id}/diagnostics"), None, None).await;
    assert_eq!(status, StatusCode::OK);
    assert!(diag["diagnostics"].as_array().unwrap().iter().all(|d| d["severity"] != "error"));

    let (_, hyps) = call(&app, Method::GET, &format!("/maps/{id}/hypotheses"), None, None).await;
    let hyps = hyps.as_array().unwrap();
    assert_eq!(hyps.len(), 22);
    assert!(hyps.iter().all(|h| h["status"] == "unassessed"));

    let news = hyps
        .iter()
        .find(|h| h["statement"] == "the team developing app is capable of implementing news feed")
        .unwrap();
    let hid = news["id"].as_str().unwrap();
    let uri = format!("/hypotheses/{hid}/assessment");
    let (status, body) = call(&app, Method::POST, &uri, None, Some(json!({ "map_id": id, "status": "validated", "risk": "L" }))).await;
    assert_eq!(status, StatusCode::BAD_REQUEST, "validation needs evidence: {body}");
    let (status, body) = call(
        &app,
        Method::POST,
        &uri,
        None,
        Some(json!({ "map_id": id, "status": "not-validated", "risk": "L" })),
    )
    .await;
    assert_eq!(status, StatusCode::CREATED, "{body}");

    let (_, summary) = call(&app, Method::GET, &format!("/maps/{id}/summary"), None, None).await;
    let product = summary["rows"].as_array().unwrap().iter().find(|r| r["kind"] == "product").unwrap();
    assert_eq!(product["not_validated"]["low"], 1);
    assert_eq!(product["unassessed"], 5);

    let (_, prioritized) = call(&app, Method::GET, &format!("/maps/{id}/hypotheses?prioritized=1"), None, None).await;
    let kinds: Vec<&str> = prioritized.as_array().unwrap().iter().map(|h| h["kind"].as_str().unwrap()).collect();
    let mut sorted = kinds.clone();
    sorted.sort_by_key(|k| ["problem", "value", "product"].iter().position(|x| x == k));
    assert_eq!(kinds, sorted);

    let (status, layout) = call(&app, Method::GET, &format!("/maps/{id}/layout"), None, None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(layout["nodes"].as_array().unwrap().len(), 16);

    // Dropping the news feed removes its hypothesis and its assessment.
    let (_, dsl) = call(&app, Method::GET, &format!("/maps/{id}?format=dsl"), None, None).await;
    let edited: String = dsl
        .as_str()
        .unwrap()
        .lines()
        .filter(|l| !l.contains("\"news feed\""))
        .map(|l| format!("{l}\n"))
        .collect();
    let (status, body) = call(&app, Method::PUT, &format!("/maps/{id}"), None, Some(json!({ "dsl": edited }))).await;
    assert_eq!(status, StatusCode::OK, "{body}");
    assert_eq!(body["pruned"], json!([hid]));

    // Everything survives a restart.
    drop(app);
    let app = self::app(&dir);
    let (status, doc) = call(&app, Method::GET, &format!("/maps/{id}"), None, None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(doc["nodes"].as_array().unwrap().len(), 15);
    let (status, _) = call(&app, Method::GET, "/maps/missing", None, None).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
}

#[tokio::test]
async fn bad_input_is_reported_with_positions() {
    let dir = tempfile::tempdir().unwrap();
    let app = app(&dir);
    let (status, body) = call(&app, Method::POST, "/maps", None, Some(json!({ "dsl": "product \"x\"\nfeature \n" }))).await;
    assert_eq!(status, StatusCode::BAD_REQUEST, "{body}");
    assert_eq!(body["details"]["diagnostics"][0]["line"], 2);

    let (status, body) = call(&app, Method::POST, "/maps", None, Some(json!({ "nope": 1 }))).await;
    assert_eq!(status, StatusCode::BAD_REQUEST, "{body}");

    let cyclic = std::fs::read_to_string(corpus("cyclic.hymap")).unwrap();
    let (status, body) = call(&app, Method::POST, "/maps", None, Some(json!({ "dsl": cyclic }))).await;
    assert_eq!(status, StatusCode::BAD_REQUEST, "{body}");
    assert!(body.to_string().contains("Cycle"), "{body}");
}

/// Replaying a recorded session over HTTP gives the same map as the file.
#[tokio::test]
async fn http_replay_matches_recorded_map() {
    let dir = tempfile::tempdir().unwrap();
    let app = app(&dir);
    let log = std::fs::read_to_string(corpus("case_d.log.jsonl")).unwrap();
    let events: Vec<Value> = log.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    let (_, created) = call(&app, Method::POST, "/sessions", None, Some(json!({ "title": events[0]["title"] }))).await;
    let sid = created["session_id"].as_str().unwrap().to_string();
    let token = created["token"].as_str().unwrap().to_string();
    for e in events.iter().filter(|e| e["event"] == "answer") {
        let body = json!({ "prompt_id": e["prompt_id"], "payload": e["payload"] });
        let (status, res) = call(&app, Method::POST, &format!("/sessions/{sid}/answer"), Some(&token), Some(body)).await;
        assert_eq!(status, StatusCode::OK, "{res}");
    }
    let (status, done) = call(&app, Method::POST, &format!("/sessions/{sid}/finish"), Some(&token), None).await;
    assert_eq!(status, StatusCode::OK, "{done}");
    assert_eq!(done["hypotheses"].as_array().unwrap().len(), 4);
    let (status, again) = call(&app, Method::POST, &format!("/sessions/{sid}/finish"), Some(&token), None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(again, done);

    let map_id = done["map_id"].as_str().unwrap();
    let (_, dsl) = call(&app, Method::GET, &format!("/maps/{map_id}?format=dsl"), None, None).await;
    assert_eq!(dsl.as_str().unwrap(), std::fs::read_to_string(corpus("case_d.hymap")).unwrap());
}
