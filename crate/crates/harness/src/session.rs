//! HTTP service for sessions whose queries a person answers.
//!
//! Every session runs its learner on its own thread behind a
//! [`DeferredTeacher`]; handlers only touch the link and the shared log.

use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex};

use axum::body::Bytes;
use axum::extract::{Path, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use elhlab_core::framework::FragmentId;
use elhlab_core::framework::LearningFramework;
use elhlab_core::learners::{learn, AlgorithmId, Caps, LearnError, LearnerConfig};
use elhlab_core::teacher::{AnswerError, DeferredLink, DeferredTeacher, HumanAnswer, TeacherError};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::experiment::SignatureSpec;
use crate::transcript::{Recorder, SharedLog, TranscriptLog};

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CapsSpec {
    pub max_queries: Option<usize>,
    pub max_size: Option<usize>,
    pub depth_cap: Option<usize>,
}

impl CapsSpec {
    fn caps(&self) -> Caps {
        let d = Caps::default();
        Caps {
            max_queries: self.max_queries,
            max_size: self.max_size.unwrap_or(d.max_size),
            depth_cap: self.depth_cap.unwrap_or(d.depth_cap),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SessionRequest {
    #[serde(with = "crate::text")]
    pub framework: FragmentId,
    #[serde(with = "crate::text")]
    pub learner: AlgorithmId,
    pub signature: SignatureSpec,
    #[serde(default)]
    pub caps: CapsSpec,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct AnswerBody {
    answer: Option<String>,
    counterexample: Option<String>,
}

struct Session {
    link: DeferredLink,
    log: SharedLog,
    config: serde_json::Value,
}

#[derive(Default)]
pub struct AppState {
    sessions: Mutex<HashMap<String, Arc<Session>>>,
    next: AtomicU64,
}

type Shared = Arc<AppState>;

fn error(status: StatusCode, reason: impl Into<String>) -> Response {
    (status, Json(json!({ "error": reason.into() }))).into_response()
}

pub fn router() -> Router {
    Router::new()
        .route("/sessions", post(create))
        .route("/sessions/{id}", axum::routing::delete(remove))
        .route("/sessions/{id}/pending", get(pending))
        .route("/sessions/{id}/answer", post(answer))
        .route("/sessions/{id}/transcript", get(transcript))
        .with_state(Shared::default())
}

pub async fn serve(addr: &str) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    log::info!("listening on {}", listener.local_addr()?);
    axum::serve(listener, router()).await
}

fn lookup(state: &AppState, id: &str) -> Result<Arc<Session>, Response> {
    state
        .sessions
        .lock()
        .expect("session table")
        .get(id)
        .cloned()
        .ok_or_else(|| error(StatusCode::NOT_FOUND, format!("no session `{id}`")))
}

async fn create(State(state): State<Shared>, body: Bytes) -> Response {
    let req: SessionRequest = match serde_json::from_slice(&body) {
        Ok(r) => r,
        Err(e) => return error(StatusCode::BAD_REQUEST, e.to_string()),
    };
    if matches!(req.learner, AlgorithmId::Pac(_)) {
        return error(StatusCode::BAD_REQUEST, "sample queries cannot be answered interactively");
    }
    if !req.learner.supports(req.framework) {
        return error(StatusCode::BAD_REQUEST, format!("{} does not run on {}", req.learner, req.framework));
    }
    let sig = match req.signature.to_signature() {
        Ok(s) => s,
        Err(e) => return error(StatusCode::BAD_REQUEST, e.to_string()),
    };
    let learner_cfg = LearnerConfig::new(req.learner.clone(), sig).with_caps(req.caps.caps());
    let link = DeferredLink::new(LearningFramework::new(req.framework));
    let log = TranscriptLog::shared(None);
    let session = Arc::new(Session {
        link: link.clone(),
        log: log.clone(),
        config: serde_json::to_value(&req).expect("requests serialize"),
    });
    let id = format!("s{}", state.next.fetch_add(1, Ordering::Relaxed) + 1);
    state.sessions.lock().expect("session table").insert(id.clone(), session);
    let spawned = std::thread::Builder::new().name(format!("learner-{id}")).spawn(move || {
        let mut teacher = Recorder::new(DeferredTeacher::new(link.clone(), None), log.clone());
        let result = learn(&learner_cfg, &mut teacher);
        let outcome = match &result {
            Ok(_) => "halted".to_string(),
            Err(LearnError::Teacher(TeacherError::SessionClosed)) => "closed".to_string(),
            Err(LearnError::Teacher(TeacherError::Budget { .. })) => "query cap reached".to_string(),
            Err(e) => e.to_string(),
        };
        log.lock().expect("log lock").halt(&outcome, result.as_ref().ok(), None);
        link.close();
    });
    if let Err(e) = spawned {
        state.sessions.lock().expect("session table").remove(&id);
        return error(StatusCode::INTERNAL_SERVER_ERROR, e.to_string());
    }
    (StatusCode::CREATED, Json(json!({ "sessionId": id }))).into_response()
}

async fn pending(State(state): State<Shared>, Path(id): Path<String>) -> Response {
    let session = match lookup(&state, &id) {
        Ok(s) => s,
        Err(r) => return r,
    };
    match session.link.pending() {
        Some(q) => {
            let step = session.log.lock().expect("log lock").last_query_step().unwrap_or(q.step as usize);
            Json(json!({ "kind": q.kind.as_str(), "payload": q.payload, "step": step })).into_response()
        }
        None => StatusCode::NO_CONTENT.into_response(),
    }
}

async fn answer(State(state): State<Shared>, Path(id): Path<String>, body: Bytes) -> Response {
    let session = match lookup(&state, &id) {
        Ok(s) => s,
        Err(r) => return r,
    };
    let body: AnswerBody = match serde_json::from_slice(&body) {
        Ok(b) => b,
        Err(e) => return error(StatusCode::BAD_REQUEST, e.to_string()),
    };
    let human = match (body.answer.as_deref(), body.counterexample) {
        (Some("yes"), None) => HumanAnswer::Yes,
        (Some("no"), None) => HumanAnswer::No,
        (None, Some(text)) => HumanAnswer::Counterexample(text),
        _ => {
            return error(
                StatusCode::BAD_REQUEST,
                "expected {\"answer\": \"yes\"|\"no\"} or {\"counterexample\": text}",
            )
        }
    };
    match session.link.answer(human) {
        Ok(()) => Json(json!({ "accepted": true })).into_response(),
        Err(e @ AnswerError::NoPending) => error(StatusCode::CONFLICT, e.to_string()),
        Err(e @ AnswerError::Closed) => error(StatusCode::GONE, e.to_string()),
        Err(e) => error(StatusCode::BAD_REQUEST, e.to_string()),
    }
}

async fn transcript(State(state): State<Shared>, Path(id): Path<String>) -> Response {
    match lookup(&state, &id) {
        Ok(s) => Json(s.log.lock().expect("log lock").transcript(s.config.clone())).into_response(),
        Err(r) => r,
    }
}

async fn remove(State(state): State<Shared>, Path(id): Path<String>) -> Response {
    match state.sessions.lock().expect("session table").remove(&id) {
        Some(s) => {
            s.link.close();
            StatusCode::NO_CONTENT.into_response()
        }
        None => error(StatusCode::NOT_FOUND, format!("no session `{id}`")),
    }
}
