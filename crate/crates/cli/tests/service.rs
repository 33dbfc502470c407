//! The HTTP session service, driven in-process.

use std::sync::Arc;

use axum::body::Body;
use axum::http::{Method, Request, StatusCode};
use axum::Router;
use http_body_util::BodyExt;
use serde_json::{json, Value};
use tower::ServiceExt;

use ml_core::proofmode::Session;
use ml_core::theories::TheoryLibrary;
use mlw::service::{router, AppState};

const FIG4: &str = include_str!("../../../scripts/overlapping_variables_equal.mlp");

fn app() -> Router {
    router(Arc::new(AppState::new(TheoryLibrary::builtin(), None)))
}

async fn call(app: &Router, method: Method, uri: &str, body: Option<Value>) -> (StatusCode, Vec<u8>) {
    let req = Request::builder().method(method).uri(uri);
    let req = match body {
        Some(b) => req
            .header("content-type", "application/json")
            .body(Body::from(serde_json::to_vec(&b).unwrap())),
        None => req.body(Body::empty()),
    }
    .unwrap();
    let res = app.clone().oneshot(req).await.unwrap();
    let status = res.status();
    (status, res.into_body().collect().await.unwrap().to_bytes().to_vec())
}

async fn call_json(app: &Router, method: Method, uri: &str, body: Option<Value>) -> (StatusCode, Value) {
    let (s, b) = call(app, method, uri, body).await;
    (s, serde_json::from_slice(&b).unwrap_or(Value::Null))
}

async fn create(app: &Router, theory: &str, goal: &str) -> (String, Value) {
    let (s, v) = call_json(app, Method::POST, "/sessions", Some(json!({ "theory": theory, "goal": goal }))).await;
    assert_eq!(s, StatusCode::CREATED, "{v}");
    (v["id"].as_str().unwrap().to_owned(), v)
}

fn fig4_tactics() -> Vec<String> {
    ml_core::proofmode::parse_script(FIG4)
        .tactics
        .into_iter()
        .map(|t| t.text)
        .collect()
}

#[tokio::test]
async fn create_session_renders_the_goal() {
    let app = app();
    let (id, v) = create(&app, "DEF", "⌈ y and x ⌉ ---> y = x").await;
    assert!(uuid::Uuid::parse_str(&id).is_ok());
    assert_eq!(v["state"]["goals"][0]["goal"]["folded"], "⌈ y and x ⌉ ---> y = x");
    for t in ["remember x as pX", "remember y as pY"] {
        let (s, _) = call_json(&app, Method::POST, &format!("/sessions/{id}/tactic"), Some(json!({ "tactic": t }))).await;
        assert_eq!(s, StatusCode::OK);
    }
    let (s, v) = call_json(&app, Method::GET, &format!("/sessions/{id}/state"), None).await;
    assert_eq!(s, StatusCode::OK);
    assert_eq!(v["state"]["goals"][0]["goal"]["folded"], "⌈ pY and pX ⌉ ---> pY = pX");
    assert!(v["text"].as_str().unwrap().contains("DEF ⊢"));
}

#[tokio::test]
async fn tactics_match_the_in_process_session() {
    let app = app();
    let (id, _) = create(&app, "DEF", "⌈ y and x ⌉ ---> y = x").await;
    let th = TheoryLibrary::builtin().load("DEF").unwrap();
    let mut local = Session::parse(th, "⌈ y and x ⌉ ---> y = x").unwrap();
    for t in fig4_tactics() {
        let (s, v) = call_json(&app, Method::POST, &format!("/sessions/{id}/tactic"), Some(json!({ "tactic": t }))).await;
        assert_eq!(s, StatusCode::OK, "{t}: {v}");
        local.apply_text(&t).unwrap();
        assert_eq!(v["state"], serde_json::to_value(local.view()).unwrap(), "after {t}");
        assert_eq!(v["text"], local.view().to_string());
    }
    let (s, bytes) = call(&app, Method::GET, &format!("/sessions/{id}/proof"), None).await;
    assert_eq!(s, StatusCode::OK);
    let expected = ml_core::format::proof::encode_proof(&local.qed().unwrap().export());
    assert_eq!(bytes, expected);
}

#[tokio::test]
async fn exported_proof_equals_the_cli_export() {
    let app = app();
    let (id, _) = create(&app, "DEF", "⌈ y and x ⌉ ---> y = x").await;
    for t in fig4_tactics() {
        call(&app, Method::POST, &format!("/sessions/{id}/tactic"), Some(json!({ "tactic": t }))).await;
    }
    let (_, bytes) = call(&app, Method::GET, &format!("/sessions/{id}/proof"), None).await;

    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("fig.mlproof");
    let root = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../..");
    let status = std::process::Command::new(env!("CARGO_BIN_EXE_mlw"))
        .current_dir(&root)
        .args(["prove", "scripts/overlapping_variables_equal.mlp", "--export"])
        .arg(&out)
        .status()
        .unwrap();
    assert!(status.success());
    assert_eq!(bytes, std::fs::read(&out).unwrap());
}

#[tokio::test]
async fn errors_have_codes() {
    let app = app();
    let (s, v) = call_json(&app, Method::GET, "/sessions/not-a-session/state", None).await;
    assert_eq!(s, StatusCode::NOT_FOUND);
    assert_eq!(v["error"]["code"], "unknown-session");
    let missing = uuid::Uuid::new_v4();
    let (s, _) = call_json(&app, Method::POST, &format!("/sessions/{missing}/undo"), None).await;
    assert_eq!(s, StatusCode::NOT_FOUND);

    let (s, v) = call_json(&app, Method::POST, "/sessions", Some(json!({ "theory": "NOPE", "goal": "x" }))).await;
    assert_eq!(s, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(v["error"]["code"], "theory");
    let (s, v) = call_json(&app, Method::POST, "/sessions", Some(json!({ "goal": "(x" }))).await;
    assert_eq!(s, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(v["error"]["code"], "parse");

    let (id, first) = create(&app, "empty", "x ---> x").await;
    let uri = format!("/sessions/{id}/tactic");
    let (s, v) = call_json(&app, Method::POST, &uri, Some(json!({ "tactic": "mlExact \"H7\"" }))).await;
    assert_eq!(s, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(v["error"]["code"], "unknown-hypothesis");
    let (s, v) = call_json(&app, Method::POST, &uri, Some(json!({ "tactic": "mlFrobnicate" }))).await;
    assert_eq!(s, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(v["error"]["code"], "parse");
    // failed tactics leave the state alone
    let (_, now) = call_json(&app, Method::GET, &format!("/sessions/{id}/state"), None).await;
    assert_eq!(now["state"], first["state"]);

    let (s, v) = call_json(&app, Method::GET, &format!("/sessions/{id}/proof"), None).await;
    assert_eq!(s, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(v["error"]["code"], "open-goals");
    let (s, v) = call_json(&app, Method::POST, &format!("/sessions/{id}/undo"), None).await;
    assert_eq!(s, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(v["error"]["code"], "nothing-to-undo");
}

#[tokio::test]
async fn undo_and_delete() {
    let app = app();
    let (id, first) = create(&app, "empty", "x ---> x").await;
    let uri = format!("/sessions/{id}/tactic");
    call(&app, Method::POST, &uri, Some(json!({ "tactic": "mlIntro \"H0\"" }))).await;
    let (s, v) = call_json(&app, Method::POST, &format!("/sessions/{id}/undo"), None).await;
    assert_eq!(s, StatusCode::OK);
    assert_eq!(v["state"], first["state"]);
    call(&app, Method::POST, &uri, Some(json!({ "tactic": "mlIntro \"H0\"" }))).await;
    let (_, v) = call_json(&app, Method::POST, &uri, Some(json!({ "tactic": "mlExact \"H0\"" }))).await;
    assert_eq!(v["state"]["complete"], true);
    assert_eq!(v["text"], "No more goals.\n");
    let (s, _) = call(&app, Method::GET, &format!("/sessions/{id}/proof"), None).await;
    assert_eq!(s, StatusCode::OK);

    let (s, _) = call(&app, Method::DELETE, &format!("/sessions/{id}"), None).await;
    assert_eq!(s, StatusCode::NO_CONTENT);
    let (s, _) = call(&app, Method::GET, &format!("/sessions/{id}/state"), None).await;
    assert_eq!(s, StatusCode::NOT_FOUND);
}

#[tokio::test(flavor = "multi_thread", worker_threads = 4)]
async fn concurrent_requests_on_one_session_conflict() {
    let app = app();
    let (id, _) = create(&app, "DEF", "⌈ y and x ⌉ ---> y = x").await;
    let tactics = fig4_tactics();
    // hammer one session; every response is either a success or a 409, and
    // the session stays usable
    let mut handles = Vec::new();
    for _ in 0..16 {
        let app = app.clone();
        let uri = format!("/sessions/{id}/state");
        handles.push(tokio::spawn(async move { call(&app, Method::GET, &uri, None).await.0 }));
    }
    let mut seen = Vec::new();
    for h in handles {
        seen.push(h.await.unwrap());
    }
    assert!(seen.iter().all(|s| *s == StatusCode::OK || *s == StatusCode::CONFLICT));

    // while a tactic holds the lock, a second request gets 409
    let slow = {
        let app = app.clone();
        let uri = format!("/sessions/{id}/tactic");
        let ts = tactics.clone();
        tokio::spawn(async move {
            for t in ts {
                call(&app, Method::POST, &uri, Some(json!({ "tactic": t }))).await;
            }
        })
    };
    let mut conflict = false;
    for _ in 0..2000 {
        let (s, v) = call_json(&app, Method::GET, &format!("/sessions/{id}/proof"), None).await;
        if s == StatusCode::CONFLICT {
            assert_eq!(v["error"]["code"], "busy");
            conflict = true;
        }
        if slow.is_finished() {
            break;
        }
    }
    slow.await.unwrap();
    let (s, _) = call(&app, Method::GET, &format!("/sessions/{id}/proof"), None).await;
    assert_eq!(s, StatusCode::OK);
    assert!(conflict, "no request ever overlapped a running tactic");
}

#[tokio::test]
async fn theories_are_listed() {
    let (s, v) = call_json(&app(), Method::GET, "/theories", None).await;
    assert_eq!(s, StatusCode::OK);
    let names: Vec<&str> = v["theories"].as_array().unwrap().iter().map(|t| t["name"].as_str().unwrap()).collect();
    assert_eq!(names, ["empty", "DEF", "REL"]);
    assert_eq!(v["theories"][1]["axioms"][0]["name"], "Definedness");
}

#[tokio::test]
async fn snapshots_restore_sessions() {
    let dir = tempfile::tempdir().unwrap();
    let state = Arc::new(AppState::new(TheoryLibrary::builtin(), Some(dir.path().to_owned())));
    let app = router(state);
    let (id, _) = create(&app, "empty", "x ---> x").await;
    let (_, after) =
        call_json(&app, Method::POST, &format!("/sessions/{id}/tactic"), Some(json!({ "tactic": "mlIntro \"H0\"" }))).await;

    let restored = Arc::new(AppState::new(TheoryLibrary::builtin(), Some(dir.path().to_owned())));
    assert_eq!(restored.restore(), 1);
    let app2 = router(restored);
    let (s, v) = call_json(&app2, Method::GET, &format!("/sessions/{id}/state"), None).await;
    assert_eq!(s, StatusCode::OK);
    assert_eq!(v["state"], after["state"]);
    assert_eq!(v["script"], json!(["mlIntro \"H0\""]));
}
