use serde::{Deserialize, Serialize};

use crate::engine::{ObserverAction, SessionEvent, SessionOptions, SessionSnapshot};
use crate::lang::ParseDiagnostic;

pub const PROTOCOL_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Deserialize, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ClientBody {
    Create {
        /// Score text in the `.qcm` format.
        score: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        seed: Option<u64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        options: Option<SessionOptions>,
    },
    Action {
        session: String,
        action: ObserverAction,
    },
    /// Sends the log from `from_seq` on, then every new event.
    Subscribe {
        session: String,
        #[serde(default)]
        from_seq: u64,
    },
    StateRequest {
        session: String,
    },
}

#[derive(Clone, Debug, PartialEq, Deserialize, Serialize)]
pub struct ClientMessage {
    pub v: u32,
    /// Echoed on direct replies.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rid: Option<String>,
    #[serde(flatten)]
    pub body: ClientBody,
}

impl ClientMessage {
    pub fn new(body: ClientBody) -> Self {
        ClientMessage { v: PROTOCOL_VERSION, rid: None, body }
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ServerBody {
    Created {
        session: String,
        seed: u64,
        state: SessionSnapshot,
    },
    /// The request was applied; `next_seq` is the log length afterwards.
    Ack {
        session: String,
        next_seq: u64,
    },
    Event {
        session: String,
        event: SessionEvent,
    },
    State {
        session: String,
        state: SessionSnapshot,
    },
    Error(WireError),
}

#[derive(Clone, Debug, Serialize)]
pub struct ServerMessage {
    pub v: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rid: Option<String>,
    #[serde(flatten)]
    pub body: ServerBody,
}

impl ServerMessage {
    pub fn new(rid: Option<String>, body: ServerBody) -> Self {
        ServerMessage { v: PROTOCOL_VERSION, rid, body }
    }

    /// One record, newline-terminated.
    pub fn to_line(&self) -> String {
        let mut s = serde_json::to_string(self).expect("server messages serialize");
        s.push('\n');
        s
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WireError {
    pub code: String,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub session: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub diagnostics: Vec<ParseDiagnostic>,
}

impl WireError {
    pub fn new(code: &str, message: impl Into<String>) -> Self {
        WireError { code: code.into(), message: message.into(), session: None, diagnostics: Vec::new() }
    }

    pub fn in_session(mut self, id: &str) -> Self {
        self.session = Some(id.into());
        self
    }
}

impl std::fmt::Display for WireError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.code, self.message)
    }
}

impl std::error::Error for WireError {}
