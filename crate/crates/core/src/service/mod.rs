//! Session host and wire protocol.
//!
//! [`Host`] owns the sessions. Actions on one session are applied under that
//! session's lock, journaled, and broadcast in log order. [`server`] puts the
//! host on a WebSocket and a few plain HTTP routes.

pub mod journal;
mod protocol;
pub mod server;

use std::collections::HashMap;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex};

use tokio::sync::broadcast;

use crate::engine::{replay, wall_clock, ObserverAction, Session, SessionEvent, SessionOptions, SessionSnapshot};
use crate::lang::{check_text, serialize, ParseDiagnostic};
use crate::score::Severity;
use crate::sim::RngSeed;

pub use journal::{Journal, JournalHeader};
pub use protocol::{ClientBody, ClientMessage, ServerBody, ServerMessage, WireError, PROTOCOL_VERSION};

pub const DEFAULT_LISTEN: &str = "127.0.0.1:7878";
pub const LISTEN_ENV: &str = "QCM_LISTEN";

const BROADCAST_CAPACITY: usize = 1024;

struct Slot {
    session: Session,
    journal: Option<Journal>,
    tx: broadcast::Sender<SessionEvent>,
}

type SlotRef = Arc<Mutex<Slot>>;

pub struct Host {
    sessions: Mutex<HashMap<String, SlotRef>>,
    journal_dir: Option<PathBuf>,
}

/// The backlog from the requested sequence number plus a receiver for
/// everything after it, taken under one lock so nothing falls in between.
pub struct Subscription {
    pub backlog: Vec<SessionEvent>,
    /// Sequence number the receiver continues from.
    pub next_seq: u64,
    pub rx: broadcast::Receiver<SessionEvent>,
}

fn unknown(id: &str) -> WireError {
    WireError::new("unknown-session", format!("no session `{id}`")).in_session(id)
}

impl Host {
    /// A host without persistence.
    pub fn in_memory() -> Host {
        Host { sessions: Mutex::new(HashMap::new()), journal_dir: None }
    }

    /// A host journaling to `dir`. Sessions journaled there earlier are
    /// replayed; the ids of any that could not be restored are returned
    /// with the reason.
    pub fn with_journal(dir: &Path) -> std::io::Result<(Host, Vec<(PathBuf, String)>)> {
        std::fs::create_dir_all(dir)?;
        let host = Host { sessions: Mutex::new(HashMap::new()), journal_dir: Some(dir.to_path_buf()) };
        let mut failed = Vec::new();
        let mut paths: Vec<_> = std::fs::read_dir(dir)?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "journal"))
            .collect();
        paths.sort();
        for path in paths {
            if let Err(e) = host.restore(&path) {
                failed.push((path, e));
            }
        }
        Ok((host, failed))
    }

    fn restore(&self, path: &Path) -> Result<(), String> {
        let (header, actions) = journal::read(path).map_err(|e| e.to_string())?;
        let (score, diags) = check_text(&header.score);
        let score = match score {
            Some(s) if diags.iter().all(|d| d.severity != Severity::Error) => s,
            _ => return Err("journaled score no longer checks".into()),
        };
        let session = replay(Arc::new(score), RngSeed(header.seed), header.options, wall_clock(), &actions)
            .map_err(|e| e.to_string())?;
        journal::truncate_torn_tail(path).map_err(|e| e.to_string())?;
        let journal = Journal::reopen(path).map_err(|e| e.to_string())?;
        let (tx, _) = broadcast::channel(BROADCAST_CAPACITY);
        let slot = Slot { session, journal: Some(journal), tx };
        self.sessions.lock().expect("host lock").insert(header.session, Arc::new(Mutex::new(slot)));
        Ok(())
    }

    fn slot(&self, id: &str) -> Result<SlotRef, WireError> {
        self.sessions.lock().expect("host lock").get(id).cloned().ok_or_else(|| unknown(id))
    }

    pub fn session_ids(&self) -> Vec<String> {
        let mut ids: Vec<_> = self.sessions.lock().expect("host lock").keys().cloned().collect();
        ids.sort();
        ids
    }

    /// Parses and checks `text`, then starts a session. Without a seed one
    /// is drawn and reported back.
    pub fn create(&self, text: &str, seed: Option<u64>, options: SessionOptions) -> Result<(String, u64, SessionSnapshot), WireError> {
        let (score, diags) = check_text(text);
        let errors: Vec<ParseDiagnostic> = diags.into_iter().filter(|d| d.severity == Severity::Error).collect();
        let score = match score {
            Some(s) if errors.is_empty() => s,
            _ => {
                let mut e = WireError::new("invalid-score", format!("score has {} error(s)", errors.len()));
                e.diagnostics = errors;
                return Err(e);
            }
        };
        let seed = seed.unwrap_or_else(rand::random);
        let id = uuid::Uuid::new_v4().simple().to_string();
        let journal = match &self.journal_dir {
            Some(dir) => {
                let header = JournalHeader {
                    v: journal::JOURNAL_VERSION,
                    session: id.clone(),
                    seed,
                    options,
                    score: serialize(&score),
                };
                Some(Journal::create(dir, &header).map_err(|e| WireError::new("journal-failed", e.to_string()))?)
            }
            None => None,
        };
        let session = Session::new(Arc::new(score), RngSeed(seed), options, wall_clock())
            .map_err(|e| WireError::new(e.code(), e.to_string()))?;
        let snapshot = session.snapshot();
        let (tx, _) = broadcast::channel(BROADCAST_CAPACITY);
        let slot = Slot { session, journal, tx };
        self.sessions.lock().expect("host lock").insert(id.clone(), Arc::new(Mutex::new(slot)));
        Ok((id, seed, snapshot))
    }

    /// Applies one action; the new events go to every subscriber.
    pub fn act(&self, id: &str, action: ObserverAction) -> Result<Vec<SessionEvent>, WireError> {
        let slot = self.slot(id)?;
        let mut slot = slot.lock().expect("session lock");
        let events = slot
            .session
            .apply_action(action.clone())
            .map_err(|e| WireError::new(e.code(), e.to_string()).in_session(id))?;
        for e in &events {
            // no receivers is fine
            let _ = slot.tx.send(e.clone());
        }
        if let Some(j) = slot.journal.as_mut() {
            j.append(&action).map_err(|e| WireError::new("journal-failed", e.to_string()).in_session(id))?;
        }
        Ok(events)
    }

    pub fn subscribe(&self, id: &str, from_seq: u64) -> Result<Subscription, WireError> {
        let slot = self.slot(id)?;
        let slot = slot.lock().expect("session lock");
        let log = slot.session.log();
        let from = (from_seq as usize).min(log.len());
        Ok(Subscription { backlog: log[from..].to_vec(), next_seq: log.len() as u64, rx: slot.tx.subscribe() })
    }

    /// Log entries from `from_seq` on.
    pub fn events(&self, id: &str, from_seq: u64) -> Result<Vec<SessionEvent>, WireError> {
        let slot = self.slot(id)?;
        let slot = slot.lock().expect("session lock");
        let log = slot.session.log();
        Ok(log[(from_seq as usize).min(log.len())..].to_vec())
    }

    pub fn state(&self, id: &str) -> Result<SessionSnapshot, WireError> {
        Ok(self.slot(id)?.lock().expect("session lock").session.snapshot())
    }

    /// Runs `f` on the session, read-only.
    pub fn with_session<T>(&self, id: &str, f: impl FnOnce(&Session) -> T) -> Result<T, WireError> {
        Ok(f(&self.slot(id)?.lock().expect("session lock").session))
    }

    /// Handles every message kind except `subscribe`, which needs a
    /// connection to stream into (see [`server`]).
    pub fn handle(&self, msg: ClientMessage) -> ServerMessage {
        let rid = msg.rid.clone();
        let reply = |body| ServerMessage::new(rid.clone(), body);
        if msg.v != PROTOCOL_VERSION {
            return reply(ServerBody::Error(WireError::new(
                "unsupported-version",
                format!("protocol version {} is not supported; use {PROTOCOL_VERSION}", msg.v),
            )));
        }
        let body = match msg.body {
            ClientBody::Create { score, seed, options } => self
                .create(&score, seed, options.unwrap_or_default())
                .map(|(session, seed, state)| ServerBody::Created { session, seed, state }),
            ClientBody::Action { session, action } => self.act(&session, action).map(|events| {
                let next_seq = events.last().map_or(0, |e| e.seq + 1);
                ServerBody::Ack { session, next_seq }
            }),
            ClientBody::StateRequest { session } => self.state(&session).map(|state| ServerBody::State { session, state }),
            ClientBody::Subscribe { session, .. } => {
                Err(WireError::new("unsupported", "subscribe needs a streaming connection").in_session(&session))
            }
        };
        reply(body.unwrap_or_else(ServerBody::Error))
    }
}

/// `QCM_LISTEN` if set, else the default.
pub fn listen_address_from_env() -> String {
    std::env::var(LISTEN_ENV).unwrap_or_else(|_| DEFAULT_LISTEN.to_string())
}
