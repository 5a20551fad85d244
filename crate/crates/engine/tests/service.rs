use axum::body::{to_bytes, Body};
use axum::http::{Method, Request, StatusCode};
use axum::Router;
use little_engine::service::router;
use little_engine::Session;
use serde_json::{json, Value};
use tower::ServiceExt;

const SRC: &str = "(def x 1)\n(def main [x x])\n";

async fn call(app: &Router, method: Method, uri: &str, body: String) -> (StatusCode, String) {
    let req = Request::builder()
        .method(method)
        .uri(uri)
        .body(Body::from(body))
        .unwrap();
    let resp = app.clone().oneshot(req).await.unwrap();
    let status = resp.status();
    let bytes = to_bytes(resp.into_body(), usize::MAX).await.unwrap();
    (status, String::from_utf8(bytes.to_vec()).unwrap())
}

async fn open(app: &Router) -> u64 {
    let (status, body) = call(app, Method::POST, "/sessions", String::new()).await;
    assert_eq!(status, StatusCode::CREATED);
    serde_json::from_str::<Value>(&body).unwrap()["session"]
        .as_u64()
        .unwrap()
}

fn script() -> Vec<String> {
    [
        json!({"cmd": "load", "text": SRC}),
        json!({"cmd": "select", "id": "def:0/pat"}),
        json!({"cmd": "tools"}),
        json!({"cmd": "run", "tool": "rename", "option": "y"}),
        json!({"cmd": "preview", "tool": "rename", "option": "y", "index": 0}),
        json!({"cmd": "apply", "tool": "rename", "option": "y", "index": 0}),
        json!({"cmd": "undo"}),
        json!({"cmd": "state"}),
    ]
    .iter()
    .map(Value::to_string)
    .collect()
}

#[tokio::test]
async fn http_matches_the_line_protocol() {
    let app = router();
    let id = open(&app).await;
    let mut local = Session::new();
    for line in script() {
        let (status, body) = call(&app, Method::POST, &format!("/sessions/{id}"), line.clone()).await;
        assert_eq!(status, StatusCode::OK);
        assert_eq!(body, local.handle_line(&line));
    }
}

#[tokio::test]
async fn sessions_are_independent() {
    let app = router();
    let a = open(&app).await;
    let b = open(&app).await;
    assert_ne!(a, b);
    let load = json!({"cmd": "load", "text": SRC}).to_string();
    call(&app, Method::POST, &format!("/sessions/{a}"), load).await;
    let (_, body) = call(
        &app,
        Method::POST,
        &format!("/sessions/{b}"),
        json!({"cmd": "items"}).to_string(),
    )
    .await;
    let r: Value = serde_json::from_str(&body).unwrap();
    assert_eq!(r["error"]["code"], "NotLoaded");
    let (_, body) = call(
        &app,
        Method::POST,
        &format!("/sessions/{a}"),
        json!({"cmd": "state"}).to_string(),
    )
    .await;
    let r: Value = serde_json::from_str(&body).unwrap();
    assert_eq!(r["result"]["text"], SRC);
}

#[tokio::test]
async fn closed_and_unknown_sessions_are_not_found() {
    let app = router();
    let id = open(&app).await;
    let (status, _) = call(&app, Method::DELETE, &format!("/sessions/{id}"), String::new()).await;
    assert_eq!(status, StatusCode::NO_CONTENT);
    let (status, body) = call(&app, Method::POST, &format!("/sessions/{id}"), "{}".into()).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
    assert!(body.contains("UnknownSession"));
    let (status, _) = call(&app, Method::DELETE, "/sessions/999", String::new()).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
}

#[tokio::test]
async fn stale_revisions_are_rejected_over_http() {
    let app = router();
    let id = open(&app).await;
    let uri = format!("/sessions/{id}");
    call(
        &app,
        Method::POST,
        &uri,
        json!({"cmd": "load", "text": SRC}).to_string(),
    )
    .await;
    let stale = json!({"cmd": "select", "id": "def:0", "rev": 0}).to_string();
    let (_, body) = call(&app, Method::POST, &uri, stale).await;
    let r: Value = serde_json::from_str(&body).unwrap();
    assert_eq!(r["ok"], false);
    assert_eq!(r["error"]["code"], "StaleRevision");
    assert_eq!(r["rev"], 1);
}

#[tokio::test]
async fn serves_over_tcp() {
    let listener = tokio::net::TcpListener::bind(("127.0.0.1", 0)).await.unwrap();
    let addr = listener.local_addr().unwrap();
    tokio::spawn(async move { axum::serve(listener, router()).await.unwrap() });
    use tokio::io::{AsyncReadExt, AsyncWriteExt};
    let mut stream = tokio::net::TcpStream::connect(addr).await.unwrap();
    stream
        .write_all(b"GET /health HTTP/1.1\r\nHost: localhost\r\nConnection: close\r\n\r\n")
        .await
        .unwrap();
    let mut buf = String::new();
    stream.read_to_string(&mut buf).await.unwrap();
    assert!(buf.starts_with("HTTP/1.1 200"), "{buf}");
    assert!(buf.ends_with("ok"));
}
