//! Local HTTP/JSON service over sessions. Each session is persisted as an
//! append-only JSON-lines event log under the data directory and recovered
//! by replay at startup.

use super::{Choice, Engine, Session, SessionError, SessionEvent, SessionView};
use crate::scs::{print_example, print_pattern, Param};
use axum::extract::{Path, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::fs::{self, OpenOptions};
use std::io::Write;
use std::path::{Path as FsPath, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex, RwLock};

pub struct AppState {
    engine: Arc<Engine>,
    sessions: RwLock<HashMap<String, Arc<Mutex<Session>>>>,
    data_dir: Option<PathBuf>,
    next_id: AtomicU64,
}

impl AppState {
    /// Recover sessions from `data_dir` (created if missing).
    pub fn new(engine: Arc<Engine>, data_dir: Option<PathBuf>) -> std::io::Result<AppState> {
        let mut sessions = HashMap::new();
        let mut max_id = 0;
        if let Some(dir) = &data_dir {
            fs::create_dir_all(dir)?;
            let mut paths: Vec<PathBuf> =
                fs::read_dir(dir)?.filter_map(|e| e.ok().map(|e| e.path())).filter(|p| p.extension().is_some_and(|x| x == "jsonl")).collect();
            paths.sort();
            for p in paths {
                let events = read_log(&p)?;
                match Session::replay(&engine, &events) {
                    Ok(s) => {
                        if let Some(n) = s.id.strip_prefix('s').and_then(|n| n.parse::<u64>().ok()) {
                            max_id = max_id.max(n);
                        }
                        sessions.insert(s.id.clone(), Arc::new(Mutex::new(s)));
                    }
                    Err(e) => eprintln!("skipping session log {}: {e}", p.display()),
                }
            }
        }
        Ok(AppState { engine, sessions: RwLock::new(sessions), data_dir, next_id: AtomicU64::new(max_id + 1) })
    }

    fn log_path(&self, id: &str) -> Option<PathBuf> {
        self.data_dir.as_ref().map(|d| d.join(format!("{id}.jsonl")))
    }

    fn persist(&self, id: &str, event: &SessionEvent) -> Result<(), ApiError> {
        let Some(path) = self.log_path(id) else { return Ok(()) };
        let line = serde_json::to_string(event).expect("event serializes");
        let mut f = OpenOptions::new().create(true).append(true).open(path).map_err(ApiError::io)?;
        writeln!(f, "{line}").map_err(ApiError::io)
    }

    fn session(&self, id: &str) -> Result<Arc<Mutex<Session>>, ApiError> {
        self.sessions
            .read()
            .expect("sessions lock")
            .get(id)
            .cloned()
            .ok_or_else(|| SessionError::UnknownSession(id.to_string()).into())
    }
}

/// Parse a JSON-lines event log.
pub fn read_log(path: &FsPath) -> std::io::Result<Vec<SessionEvent>> {
    let text = fs::read_to_string(path)?;
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| serde_json::from_str(l).map_err(|e| std::io::Error::new(std::io::ErrorKind::InvalidData, e)))
        .collect()
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ErrorBody {
    pub error: String,
    pub message: String,
}

#[derive(Debug)]
pub struct ApiError {
    status: StatusCode,
    code: &'static str,
    message: String,
}

impl ApiError {
    fn io(e: std::io::Error) -> ApiError {
        ApiError { status: StatusCode::INTERNAL_SERVER_ERROR, code: "io", message: e.to_string() }
    }
}

impl From<SessionError> for ApiError {
    fn from(e: SessionError) -> Self {
        let (status, code) = match &e {
            SessionError::UnknownPattern(_) => (StatusCode::NOT_FOUND, "unknown_pattern"),
            SessionError::UnknownSession(_) => (StatusCode::NOT_FOUND, "unknown_session"),
            SessionError::UnknownExample(_) => (StatusCode::NOT_FOUND, "unknown_example"),
            SessionError::UnknownGroup(_) => (StatusCode::NOT_FOUND, "unknown_group"),
            SessionError::UnknownCandidate(_) => (StatusCode::NOT_FOUND, "unknown_candidate"),
            SessionError::AlreadyFilled(_) => (StatusCode::CONFLICT, "already_filled"),
            SessionError::NothingToUndo => (StatusCode::CONFLICT, "nothing_to_undo"),
            SessionError::TypeMismatch(_) => (StatusCode::UNPROCESSABLE_ENTITY, "type_mismatch"),
            SessionError::InvalidContext(_) => (StatusCode::UNPROCESSABLE_ENTITY, "invalid_context"),
            SessionError::ModelMismatch(_) => (StatusCode::UNPROCESSABLE_ENTITY, "model_mismatch"),
            SessionError::NoEmbedding(_) => (StatusCode::UNPROCESSABLE_ENTITY, "no_embedding"),
            SessionError::Hole(_) => (StatusCode::UNPROCESSABLE_ENTITY, "hole_analysis"),
            SessionError::Log(_) => (StatusCode::INTERNAL_SERVER_ERROR, "log"),
        };
        ApiError { status, code, message: e.to_string() }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(ErrorBody { error: self.code.to_string(), message: self.message })).into_response()
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct OpenRequest {
    pub pattern_id: String,
    #[serde(default)]
    pub context: Vec<Param>,
    #[serde(default)]
    pub seed: u64,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct FillRequest {
    pub group_id: usize,
    pub choice: Choice,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct CodeResponse {
    pub code: String,
    pub complete: bool,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct PatternSummary {
    pub id: String,
    pub support: usize,
    pub description: String,
    pub call_count: usize,
    pub hole_count: usize,
    pub text: String,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ExampleResponse {
    pub id: String,
    pub source_uri: Option<String>,
    pub context: Vec<Param>,
    pub text: String,
}

type Shared = Arc<AppState>;

async fn open_session(State(st): State<Shared>, Json(req): Json<OpenRequest>) -> Result<(StatusCode, Json<SessionView>), ApiError> {
    let id = format!("s{:06}", st.next_id.fetch_add(1, Ordering::SeqCst));
    let s = Session::open(&st.engine, &id, &req.pattern_id, req.context, req.seed)?;
    st.persist(&id, &s.events[0])?;
    let view = s.view(&st.engine)?;
    st.sessions.write().expect("sessions lock").insert(id, Arc::new(Mutex::new(s)));
    Ok((StatusCode::CREATED, Json(view)))
}

async fn get_session(State(st): State<Shared>, Path(id): Path<String>) -> Result<Json<SessionView>, ApiError> {
    let s = st.session(&id)?;
    let s = s.lock().expect("session lock");
    Ok(Json(s.view(&st.engine)?))
}

async fn fill(State(st): State<Shared>, Path(id): Path<String>, Json(req): Json<FillRequest>) -> Result<Json<SessionView>, ApiError> {
    let s = st.session(&id)?;
    let mut s = s.lock().expect("session lock");
    s.fill(&st.engine, req.group_id, req.choice)?;
    st.persist(&id, s.events.last().expect("fill event"))?;
    Ok(Json(s.view(&st.engine)?))
}

async fn undo(State(st): State<Shared>, Path(id): Path<String>) -> Result<Json<SessionView>, ApiError> {
    let s = st.session(&id)?;
    let mut s = s.lock().expect("session lock");
    s.undo(&st.engine)?;
    st.persist(&id, &SessionEvent::Undo)?;
    Ok(Json(s.view(&st.engine)?))
}

async fn code(State(st): State<Shared>, Path(id): Path<String>) -> Result<Json<CodeResponse>, ApiError> {
    let s = st.session(&id)?;
    let s = s.lock().expect("session lock");
    let c = s.emit(&st.engine)?;
    Ok(Json(CodeResponse { code: c.code, complete: c.complete }))
}

async fn patterns(State(st): State<Shared>) -> Json<Vec<PatternSummary>> {
    Json(
        st.engine
            .patterns
            .iter()
            .map(|p| PatternSummary {
                id: p.id.clone(),
                support: p.support,
                description: p.description.clone(),
                call_count: p.calls.len(),
                hole_count: p.holes.len(),
                text: print_pattern(p),
            })
            .collect(),
    )
}

async fn example(State(st): State<Shared>, Path(id): Path<String>) -> Result<Json<ExampleResponse>, ApiError> {
    let ex = st.engine.example(&id)?;
    Ok(Json(ExampleResponse {
        id: ex.id.clone(),
        source_uri: ex.source_uri.clone(),
        context: ex.context_params.clone(),
        text: print_example(ex),
    }))
}

pub fn router(state: Arc<AppState>) -> Router {
    Router::new()
        .route("/sessions", post(open_session))
        .route("/sessions/{id}", get(get_session))
        .route("/sessions/{id}/fill", post(fill))
        .route("/sessions/{id}/undo", post(undo))
        .route("/sessions/{id}/code", get(code))
        .route("/patterns", get(patterns))
        .route("/examples/{id}", get(example))
        .with_state(state)
}

/// Serve on `127.0.0.1:port` until the process is stopped.
pub async fn serve(state: Arc<AppState>, port: u16) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(("127.0.0.1", port)).await?;
    axum::serve(listener, router(state)).await
}
