//! Network front of a [`Host`].
//!
//! - `GET /v1/ws`: WebSocket. Each text frame carries one or more records,
//!   one JSON object per line.
//! - `POST /v1/messages`: one client record in, one server record out. Every
//!   kind except `subscribe`.
//! - `GET /v1/sessions`: ids, as a JSON array.
//! - `GET /v1/sessions/{id}/state`: a `state` record.
//! - `GET /v1/sessions/{id}/events?from=N`: the event log from `N`, NDJSON.
//! - `GET /v1/health`: `ok`.

use std::collections::HashMap;
use std::io;
use std::sync::Arc;

use axum::extract::ws::{Message, WebSocket, WebSocketUpgrade};
use axum::extract::{Path, Query, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use futures::{SinkExt, StreamExt};
use tokio::net::TcpListener;
use tokio::sync::{broadcast, mpsc};
use tokio::task::JoinHandle;

use super::{ClientBody, ClientMessage, Host, ServerBody, ServerMessage, WireError};
use crate::engine::Timestamps;

pub fn router(host: Arc<Host>) -> Router {
    Router::new()
        .route("/v1/ws", get(ws_upgrade))
        .route("/v1/messages", post(message))
        .route("/v1/sessions", get(list))
        .route("/v1/sessions/{id}/state", get(state))
        .route("/v1/sessions/{id}/events", get(events))
        .route("/v1/health", get(|| async { "ok" }))
        .with_state(host)
}

pub async fn serve(listener: TcpListener, host: Arc<Host>) -> io::Result<()> {
    axum::serve(listener, router(host)).await
}

fn status_for(e: &WireError) -> StatusCode {
    match e.code.as_str() {
        "unknown-session" => StatusCode::NOT_FOUND,
        _ => StatusCode::BAD_REQUEST,
    }
}

fn error_response(e: WireError) -> Response {
    (status_for(&e), Json(ServerMessage::new(None, ServerBody::Error(e)))).into_response()
}

async fn message(State(host): State<Arc<Host>>, body: String) -> Response {
    match serde_json::from_str::<ClientMessage>(&body) {
        Ok(msg) => Json(host.handle(msg)).into_response(),
        Err(e) => error_response(WireError::new("bad-message", e.to_string())),
    }
}

async fn list(State(host): State<Arc<Host>>) -> Json<Vec<String>> {
    Json(host.session_ids())
}

async fn state(State(host): State<Arc<Host>>, Path(id): Path<String>) -> Response {
    match host.state(&id) {
        Ok(state) => Json(ServerMessage::new(None, ServerBody::State { session: id, state })).into_response(),
        Err(e) => error_response(e),
    }
}

async fn events(State(host): State<Arc<Host>>, Path(id): Path<String>, Query(q): Query<HashMap<String, u64>>) -> Response {
    match host.events(&id, q.get("from").copied().unwrap_or(0)) {
        Ok(evs) => {
            let body: String = evs.iter().map(|e| e.to_line(Timestamps::Include) + "\n").collect();
            ([(header::CONTENT_TYPE, "application/x-ndjson")], body).into_response()
        }
        Err(e) => error_response(e),
    }
}

async fn ws_upgrade(ws: WebSocketUpgrade, State(host): State<Arc<Host>>) -> Response {
    ws.on_upgrade(move |socket| connection(socket, host))
}

async fn connection(socket: WebSocket, host: Arc<Host>) {
    let (mut sink, mut stream) = socket.split();
    let (tx, mut rx) = mpsc::unbounded_channel::<String>();
    let writer = tokio::spawn(async move {
        while let Some(line) = rx.recv().await {
            if sink.send(Message::Text(line.into())).await.is_err() {
                break;
            }
        }
    });
    let mut forwarders = Vec::new();
    while let Some(Ok(msg)) = stream.next().await {
        let text = match msg {
            Message::Text(t) => t.to_string(),
            Message::Close(_) => break,
            _ => continue,
        };
        for line in text.lines().filter(|l| !l.trim().is_empty()) {
            if let Some(f) = handle_line(&host, line, &tx) {
                forwarders.push(f);
            }
        }
    }
    for f in forwarders {
        f.abort();
    }
    drop(tx);
    let _ = writer.await;
}

fn handle_line(host: &Arc<Host>, line: &str, tx: &mpsc::UnboundedSender<String>) -> Option<JoinHandle<()>> {
    let msg = match serde_json::from_str::<ClientMessage>(line) {
        Ok(m) => m,
        Err(e) => {
            let _ = tx.send(ServerMessage::new(None, ServerBody::Error(WireError::new("bad-message", e.to_string()))).to_line());
            return None;
        }
    };
    let ClientBody::Subscribe { session, from_seq } = &msg.body else {
        let _ = tx.send(host.handle(msg).to_line());
        return None;
    };
    if msg.v != super::PROTOCOL_VERSION {
        let _ = tx.send(host.handle(msg).to_line());
        return None;
    }
    let session = session.clone();
    match host.subscribe(&session, *from_seq) {
        Err(e) => {
            let _ = tx.send(ServerMessage::new(msg.rid, ServerBody::Error(e)).to_line());
            None
        }
        Ok(sub) => {
            let _ = tx.send(ServerMessage::new(msg.rid, ServerBody::Ack { session: session.clone(), next_seq: sub.next_seq }).to_line());
            for event in sub.backlog {
                let _ = tx.send(ServerMessage::new(None, ServerBody::Event { session: session.clone(), event }).to_line());
            }
            Some(tokio::spawn(forward(host.clone(), session, sub.next_seq, sub.rx, tx.clone())))
        }
    }
}

/// Pushes live events in order. Gaps (a lagging receiver) are filled from the log.
async fn forward(
    host: Arc<Host>,
    session: String,
    mut next: u64,
    mut rx: broadcast::Receiver<crate::engine::SessionEvent>,
    tx: mpsc::UnboundedSender<String>,
) {
    let send = |event| ServerMessage::new(None, ServerBody::Event { session: session.clone(), event }).to_line();
    loop {
        let live = match rx.recv().await {
            Ok(ev) => Some(ev),
            Err(broadcast::error::RecvError::Lagged(_)) => None,
            Err(broadcast::error::RecvError::Closed) => return,
        };
        if live.as_ref().is_some_and(|ev| ev.seq < next) {
            continue;
        }
        if live.as_ref().is_none_or(|ev| ev.seq > next) {
            let Ok(missing) = host.events(&session, next) else { return };
            for ev in missing {
                if live.as_ref().is_some_and(|l| ev.seq >= l.seq) {
                    break;
                }
                next = ev.seq + 1;
                if tx.send(send(ev)).is_err() {
                    return;
                }
            }
        }
        if let Some(ev) = live {
            next = ev.seq + 1;
            if tx.send(send(ev)).is_err() {
                return;
            }
        }
    }
}
