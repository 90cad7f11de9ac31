//! HTTP sessions in which a person or a script plays the learner.
//!
//! `POST /sessions` starts a session, `GET /sessions/{id}` shows it,
//! `POST /sessions/{id}/hypothesis` declares the learner's next hypothesis and
//! `GET /sessions/{id}/trace` returns the replayable record. The target stays
//! hidden until a session ends.

pub mod api;
pub mod engine;
pub mod error;
pub mod store;

use std::collections::HashMap;
use std::net::SocketAddr;
use std::sync::{Arc, Mutex, RwLock};

use axum::body::Bytes;
use axum::extract::{Path, State};
use axum::http::StatusCode;
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::de::DeserializeOwned;
use serde_json::Value;

use crate::api::{CreateRequest, SubmitRequest};
use crate::engine::{Session, Tables};
use crate::error::ApiError;
use crate::store::{Event, Store};

/// Environment variable naming the session data directory.
pub const DATA_DIR_ENV: &str = "TEACHLAB_DATA_DIR";

pub struct AppState {
    sessions: RwLock<HashMap<String, Arc<Mutex<Session>>>>,
    tables: Tables,
    store: Store,
    master_seed: u64,
}

impl AppState {
    /// Opens the store and replays every stored session.
    pub fn open(store: Store, master_seed: u64) -> std::io::Result<Arc<Self>> {
        let state = AppState { sessions: RwLock::new(HashMap::new()), tables: Tables::default(), store, master_seed };
        for (id, events) in state.store.load()? {
            match state.replay(&id, &events) {
                Ok(session) => {
                    state.sessions.write().expect("session map poisoned").insert(id, Arc::new(Mutex::new(session)));
                }
                Err(e) => eprintln!("skipping stored session {id}: {e}"),
            }
        }
        Ok(Arc::new(state))
    }

    fn replay(&self, id: &str, events: &[Event]) -> Result<Session, ApiError> {
        let Some(Event::Created { request, .. }) = events.first() else {
            return Err(ApiError::Internal("stored session does not start with its creation".into()));
        };
        let (mut session, _) = Session::create(id.to_string(), request, self.master_seed, &self.tables)?;
        for event in &events[1..] {
            if let Event::Submitted { request } = event {
                session.submit(request)?;
            }
        }
        Ok(session)
    }

    pub fn session_count(&self) -> usize {
        self.sessions.read().expect("session map poisoned").len()
    }

    fn session(&self, id: &str) -> Result<Arc<Mutex<Session>>, ApiError> {
        self.sessions
            .read()
            .expect("session map poisoned")
            .get(id)
            .cloned()
            .ok_or_else(|| ApiError::NotFound(id.to_string()))
    }

    fn create(&self, req: CreateRequest) -> Result<Value, ApiError> {
        let id = uuid::Uuid::new_v4().simple().to_string();
        let (session, resolved) = Session::create(id.clone(), &req, self.master_seed, &self.tables)?;
        self.store
            .append(&id, &Event::Created { id: id.clone(), request: resolved })
            .map_err(|e| ApiError::Internal(format!("storing session: {e}")))?;
        let view = session.view();
        self.sessions.write().expect("session map poisoned").insert(id, Arc::new(Mutex::new(session)));
        Ok(view)
    }

    fn submit(&self, id: &str, req: SubmitRequest) -> Result<Value, ApiError> {
        let session = self.session(id)?;
        let mut session = session.lock().expect("session poisoned");
        let repeat = session.is_repeat(&req);
        let reply = session.submit(&req)?;
        if !repeat {
            self.store
                .append(id, &Event::Submitted { request: req })
                .map_err(|e| ApiError::Internal(format!("storing submission: {e}")))?;
        }
        Ok(reply)
    }
}

fn body<T: DeserializeOwned>(bytes: &Bytes) -> Result<T, ApiError> {
    serde_json::from_slice(bytes).map_err(|e| ApiError::BadRequest(format!("malformed request: {e}")))
}

/// Runs session work off the async executor; teacher steps can take a while.
async fn blocking<T: Send + 'static>(f: impl FnOnce() -> Result<T, ApiError> + Send + 'static) -> Result<T, ApiError> {
    tokio::task::spawn_blocking(f).await.map_err(|e| ApiError::Internal(e.to_string()))?
}

async fn create_session(State(app): State<Arc<AppState>>, bytes: Bytes) -> Result<(StatusCode, Json<Value>), ApiError> {
    let req: CreateRequest = body(&bytes)?;
    let view = blocking(move || app.create(req)).await?;
    Ok((StatusCode::CREATED, Json(view)))
}

async fn get_session(State(app): State<Arc<AppState>>, Path(id): Path<String>) -> Result<Json<Value>, ApiError> {
    let session = app.session(&id)?;
    let view = session.lock().expect("session poisoned").view();
    Ok(Json(view))
}

async fn submit_hypothesis(
    State(app): State<Arc<AppState>>,
    Path(id): Path<String>,
    bytes: Bytes,
) -> Result<Json<Value>, ApiError> {
    let req: SubmitRequest = body(&bytes)?;
    let reply = blocking(move || app.submit(&id, req)).await?;
    Ok(Json(reply))
}

async fn get_trace(State(app): State<Arc<AppState>>, Path(id): Path<String>) -> Result<Json<Value>, ApiError> {
    let session = app.session(&id)?;
    let trace = session.lock().expect("session poisoned").trace();
    Ok(Json(trace))
}

pub fn router(app: Arc<AppState>) -> Router {
    Router::new()
        .route("/sessions", post(create_session))
        .route("/sessions/{id}", get(get_session))
        .route("/sessions/{id}/hypothesis", post(submit_hypothesis))
        .route("/sessions/{id}/trace", get(get_trace))
        .with_state(app)
}

/// Serves until the process is stopped.
pub async fn serve(addr: SocketAddr, app: Arc<AppState>) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    axum::serve(listener, router(app)).await
}
