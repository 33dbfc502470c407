//! Interactive proof sessions over HTTP with JSON bodies.
//!
//! | method | path                     | body            |
//! |--------|--------------------------|-----------------|
//! | POST   | `/sessions`              | `{theory, goal}`|
//! | POST   | `/sessions/{id}/tactic`  | `{tactic}`      |
//! | POST   | `/sessions/{id}/undo`    |                 |
//! | GET    | `/sessions/{id}/state`   |                 |
//! | GET    | `/sessions/{id}/proof`   |                 |
//! | DELETE | `/sessions/{id}`         |                 |
//! | GET    | `/theories`              |                 |
//!
//! Errors are `{"error": {"code", "message"}}`. A session serves one
//! request at a time; a second concurrent request gets 409.

use std::collections::HashMap;
use std::path::PathBuf;
use std::sync::{Arc, Mutex, RwLock};

use axum::extract::{Path, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use uuid::Uuid;

use ml_core::format::proof::encode_proof;
use ml_core::proofmode::{ProofModeError, Session};
use ml_core::theories::TheoryLibrary;

struct Entry {
    theory: String,
    goal: String,
    session: Session,
}

#[derive(Serialize, Deserialize)]
struct Snapshot {
    theory: String,
    goal: String,
    script: Vec<String>,
}

pub struct AppState {
    library: TheoryLibrary,
    sessions: RwLock<HashMap<Uuid, Arc<Mutex<Entry>>>>,
    snapshot_dir: Option<PathBuf>,
}

impl AppState {
    pub fn new(library: TheoryLibrary, snapshot_dir: Option<PathBuf>) -> AppState {
        AppState {
            library,
            sessions: RwLock::new(HashMap::new()),
            snapshot_dir,
        }
    }

    /// Replays the snapshots found in the snapshot directory. Returns how
    /// many sessions were restored; unreadable snapshots are skipped.
    pub fn restore(&self) -> usize {
        let Some(dir) = &self.snapshot_dir else { return 0 };
        let Ok(entries) = std::fs::read_dir(dir) else { return 0 };
        let mut n = 0;
        for e in entries.flatten() {
            let path = e.path();
            let Some(id) = path
                .file_stem()
                .and_then(|s| s.to_str())
                .and_then(|s| Uuid::parse_str(s).ok())
            else {
                continue;
            };
            let Ok(text) = std::fs::read_to_string(&path) else { continue };
            let Ok(snap) = serde_json::from_str::<Snapshot>(&text) else { continue };
            let Ok(mut entry) = self.open(&snap.theory, &snap.goal) else { continue };
            if snap.script.iter().all(|t| entry.session.apply_text(t).is_ok()) {
                self.sessions.write().unwrap().insert(id, Arc::new(Mutex::new(entry)));
                n += 1;
            }
        }
        n
    }

    fn open(&self, theory: &str, goal: &str) -> Result<Entry, ApiError> {
        let th = self
            .library
            .load(theory)
            .map_err(|e| ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, "theory", e.to_string()))?;
        let session = Session::parse(th, goal).map_err(ApiError::from)?;
        Ok(Entry {
            theory: theory.to_owned(),
            goal: goal.to_owned(),
            session,
        })
    }

    fn save(&self, id: Uuid, e: &Entry) {
        let Some(dir) = &self.snapshot_dir else { return };
        let snap = Snapshot {
            theory: e.theory.clone(),
            goal: e.goal.clone(),
            script: e.session.script().into_iter().map(str::to_owned).collect(),
        };
        let _ = std::fs::create_dir_all(dir);
        let _ = std::fs::write(dir.join(format!("{id}.json")), serde_json::to_vec_pretty(&snap).unwrap());
    }

    fn forget(&self, id: Uuid) {
        if let Some(dir) = &self.snapshot_dir {
            let _ = std::fs::remove_file(dir.join(format!("{id}.json")));
        }
    }

    fn get(&self, id: &str) -> Result<(Uuid, Arc<Mutex<Entry>>), ApiError> {
        let uuid = Uuid::parse_str(id).map_err(|_| ApiError::unknown(id))?;
        let map = self.sessions.read().unwrap();
        map.get(&uuid).cloned().map(|e| (uuid, e)).ok_or_else(|| ApiError::unknown(id))
    }
}

#[derive(Debug)]
pub struct ApiError {
    status: StatusCode,
    code: String,
    message: String,
}

impl ApiError {
    fn new(status: StatusCode, code: &str, message: impl Into<String>) -> ApiError {
        ApiError {
            status,
            code: code.to_owned(),
            message: message.into(),
        }
    }

    fn unknown(id: &str) -> ApiError {
        ApiError::new(StatusCode::NOT_FOUND, "unknown-session", format!("no session `{id}`"))
    }

    fn busy() -> ApiError {
        ApiError::new(StatusCode::CONFLICT, "busy", "the session is handling another request")
    }
}

impl From<ProofModeError> for ApiError {
    fn from(e: ProofModeError) -> ApiError {
        ApiError::new(StatusCode::UNPROCESSABLE_ENTITY, e.code(), e.to_string())
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (
            self.status,
            Json(json!({ "error": { "code": self.code, "message": self.message } })),
        )
            .into_response()
    }
}

type Shared = Arc<AppState>;

fn state_json(id: Uuid, s: &Session) -> Value {
    let view = s.view();
    json!({ "id": id.to_string(), "text": view.to_string(), "state": view, "script": s.script() })
}

/// Runs `f` on the locked session off the async executor.
async fn with_session<T: Send + 'static>(
    app: &Shared,
    id: &str,
    f: impl FnOnce(&AppState, Uuid, &mut Entry) -> Result<T, ApiError> + Send + 'static,
) -> Result<T, ApiError> {
    let (uuid, entry) = app.get(id)?;
    let app = app.clone();
    tokio::task::spawn_blocking(move || {
        let mut guard = entry.try_lock().map_err(|e| match e {
            std::sync::TryLockError::WouldBlock => ApiError::busy(),
            std::sync::TryLockError::Poisoned(_) => {
                ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, "internal", "session state lost")
            }
        })?;
        f(&app, uuid, &mut guard)
    })
    .await
    .map_err(|e| ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, "internal", e.to_string()))?
}

#[derive(Deserialize)]
struct CreateBody {
    #[serde(default = "default_theory")]
    theory: String,
    goal: String,
}

fn default_theory() -> String {
    "empty".into()
}

#[derive(Deserialize)]
struct TacticBody {
    tactic: String,
}

async fn create(State(app): State<Shared>, Json(body): Json<CreateBody>) -> Result<Response, ApiError> {
    let app2 = app.clone();
    let (id, v) = tokio::task::spawn_blocking(move || -> Result<_, ApiError> {
        let entry = app2.open(&body.theory, &body.goal)?;
        let id = Uuid::new_v4();
        let v = state_json(id, &entry.session);
        app2.save(id, &entry);
        app2.sessions.write().unwrap().insert(id, Arc::new(Mutex::new(entry)));
        Ok((id, v))
    })
    .await
    .map_err(|e| ApiError::new(StatusCode::INTERNAL_SERVER_ERROR, "internal", e.to_string()))??;
    Ok((
        StatusCode::CREATED,
        [(header::LOCATION, format!("/sessions/{id}"))],
        Json(v),
    )
        .into_response())
}

async fn tactic(
    State(app): State<Shared>,
    Path(id): Path<String>,
    Json(body): Json<TacticBody>,
) -> Result<Json<Value>, ApiError> {
    with_session(&app, &id, move |app, uuid, e| {
        e.session.apply_text(&body.tactic)?;
        app.save(uuid, e);
        Ok(Json(state_json(uuid, &e.session)))
    })
    .await
}

async fn undo(State(app): State<Shared>, Path(id): Path<String>) -> Result<Json<Value>, ApiError> {
    with_session(&app, &id, |app, uuid, e| {
        e.session.undo()?;
        app.save(uuid, e);
        Ok(Json(state_json(uuid, &e.session)))
    })
    .await
}

async fn state(State(app): State<Shared>, Path(id): Path<String>) -> Result<Json<Value>, ApiError> {
    with_session(&app, &id, |_, uuid, e| Ok(Json(state_json(uuid, &e.session)))).await
}

async fn proof(State(app): State<Shared>, Path(id): Path<String>) -> Result<Response, ApiError> {
    let bytes = with_session(&app, &id, |_, _, e| Ok(encode_proof(&e.session.qed()?.export()))).await?;
    Ok(([(header::CONTENT_TYPE, "application/json")], bytes).into_response())
}

async fn delete(State(app): State<Shared>, Path(id): Path<String>) -> Result<StatusCode, ApiError> {
    let (uuid, _) = app.get(&id)?;
    app.sessions.write().unwrap().remove(&uuid);
    app.forget(uuid);
    Ok(StatusCode::NO_CONTENT)
}

async fn theories(State(app): State<Shared>) -> Json<Value> {
    let list: Vec<Value> = app
        .library
        .names()
        .filter_map(|n| app.library.load(n).ok())
        .map(|t| {
            json!({
                "name": t.name(),
                "symbols": t.syntax().signature.symbols().map(|s| s.to_string()).collect::<Vec<_>>(),
                "axioms": t.theory.axioms().iter().map(|(n, p)| json!({ "name": n, "pattern": p.to_string() })).collect::<Vec<_>>(),
            })
        })
        .collect();
    Json(json!({ "theories": list }))
}

pub fn router(app: Arc<AppState>) -> Router {
    Router::new()
        .route("/sessions", post(create))
        .route("/sessions/:id", axum::routing::delete(delete))
        .route("/sessions/:id/tactic", post(tactic))
        .route("/sessions/:id/undo", post(undo))
        .route("/sessions/:id/state", get(state))
        .route("/sessions/:id/proof", get(proof))
        .route("/theories", get(theories))
        .with_state(app)
}
