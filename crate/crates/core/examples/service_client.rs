//! Starts the session host on a free port, then talks to it over the
//! WebSocket: create a session, subscribe, play the first movement.
//!
//! cargo run --example service_client

use std::sync::Arc;

use futures::{SinkExt, StreamExt};
use qcm::service::{server, Host};
use serde_json::{json, Value};
use tokio_tungstenite::tungstenite::Message;

#[tokio::main]
async fn main() {
    let listener = tokio::net::TcpListener::bind("127.0.0.1:0").await.unwrap();
    let addr = listener.local_addr().unwrap();
    tokio::spawn(server::serve(listener, Arc::new(Host::in_memory())));

    let (mut ws, _) = tokio_tungstenite::connect_async(format!("ws://{addr}/v1/ws")).await.unwrap();
    let score = qcm::lang::serialize(&qcm::score::bell_score_fixture());
    let mut pending = Vec::new();

    send(&mut ws, json!({"v":1,"rid":"new","kind":"create","score":score,"seed":42})).await;
    let created = next(&mut ws, &mut pending).await;
    let sid = created["session"].as_str().unwrap().to_string();
    println!("created {sid}, status {}", created["state"]["status"]);

    send(&mut ws, json!({"v":1,"kind":"subscribe","session":sid})).await;
    send(&mut ws, json!({"v":1,"kind":"action","session":sid,"action":{"actor":"audience","type":"choose-basis","qubit":"q1","colour":"green"}})).await;
    send(&mut ws, json!({"v":1,"kind":"action","session":sid,"action":{"actor":"audience","type":"trigger"}})).await;

    let mut instructions = 0;
    while instructions < 2 {
        let v = next(&mut ws, &mut pending).await;
        println!("{v}");
        if v["kind"] == "event" && v["event"]["type"] == "instruction" {
            instructions += 1;
        }
    }
}

type Ws = tokio_tungstenite::WebSocketStream<tokio_tungstenite::MaybeTlsStream<tokio::net::TcpStream>>;

async fn send(ws: &mut Ws, v: Value) {
    ws.send(Message::text(v.to_string())).await.unwrap();
}

async fn next(ws: &mut Ws, pending: &mut Vec<Value>) -> Value {
    while pending.is_empty() {
        if let Some(Ok(Message::Text(t))) = ws.next().await {
            pending.extend(t.as_str().lines().map(|l| serde_json::from_str::<Value>(l).unwrap()));
        }
    }
    pending.remove(0)
}
