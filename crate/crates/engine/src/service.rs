//! HTTP endpoint speaking the same messages as the line protocol.
//!
//! `POST /sessions` opens a session and returns its id. `POST
//! /sessions/{id}` takes one request object and returns one response
//! object. `DELETE /sessions/{id}` closes the session. Requests within a
//! session are handled one at a time; sessions are independent.

use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use axum::extract::{Path, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::Router;
use serde_json::json;
use tokio::sync::Mutex;

use crate::session::Session;

#[derive(Default)]
struct Sessions {
    next: AtomicU64,
    open: Mutex<HashMap<u64, Arc<Mutex<Session>>>>,
}

type Shared = Arc<Sessions>;

fn json_body(status: StatusCode, body: String) -> Response {
    (status, [(header::CONTENT_TYPE, "application/json")], body).into_response()
}

fn unknown_session(id: u64) -> Response {
    let body = json!({ "error": { "code": "UnknownSession", "message": format!("no session {id}") } });
    json_body(StatusCode::NOT_FOUND, body.to_string())
}

async fn open(State(s): State<Shared>) -> Response {
    let id = s.next.fetch_add(1, Ordering::Relaxed) + 1;
    s.open.lock().await.insert(id, Arc::new(Mutex::new(Session::new())));
    log::info!("opened session {id}");
    json_body(StatusCode::CREATED, json!({ "session": id }).to_string())
}

async fn request(State(s): State<Shared>, Path(id): Path<u64>, body: String) -> Response {
    let Some(session) = s.open.lock().await.get(&id).cloned() else {
        return unknown_session(id);
    };
    let mut session = session.lock().await;
    json_body(StatusCode::OK, session.handle_line(&body))
}

async fn close(State(s): State<Shared>, Path(id): Path<u64>) -> Response {
    match s.open.lock().await.remove(&id) {
        Some(_) => {
            log::info!("closed session {id}");
            StatusCode::NO_CONTENT.into_response()
        }
        None => unknown_session(id),
    }
}

pub fn router() -> Router {
    Router::new()
        .route("/health", get(|| async { "ok" }))
        .route("/sessions", post(open))
        .route("/sessions/{id}", post(request).delete(close))
        .with_state(Shared::default())
}

/// Serves on `127.0.0.1:port` until the process ends.
pub async fn serve(port: u16) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(("127.0.0.1", port)).await?;
    log::info!("listening on {}", listener.local_addr()?);
    axum::serve(listener, router()).await
}
