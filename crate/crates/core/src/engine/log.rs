//! Event log export: one JSON object per line.
//!
//! Each line is `{"v":1,"seq":N,"ts":MS,"type":KIND,...}` where the fields
//! after `type` are those of the payload. `ts` is left out when timestamps
//! are excluded, which is the form replay comparisons use.

use serde::{Deserialize, Serialize};

use super::{Payload, Session, SessionEvent};

pub const LOG_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Timestamps {
    Include,
    Exclude,
}

#[derive(Serialize)]
struct LineOut<'a> {
    v: u32,
    seq: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    ts: Option<u64>,
    #[serde(flatten)]
    payload: &'a Payload,
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
pub struct LogRecord {
    pub v: u32,
    pub seq: u64,
    #[serde(default)]
    pub ts: Option<u64>,
    #[serde(flatten)]
    pub payload: Payload,
}

impl SessionEvent {
    pub fn to_line(&self, ts: Timestamps) -> String {
        let line = LineOut {
            v: LOG_VERSION,
            seq: self.seq,
            ts: (ts == Timestamps::Include).then_some(self.ts),
            payload: &self.payload,
        };
        serde_json::to_string(&line).expect("log records serialize")
    }
}

pub fn parse_log_line(line: &str) -> Result<LogRecord, serde_json::Error> {
    serde_json::from_str(line)
}

impl Session {
    pub fn log_lines(&self, ts: Timestamps) -> Vec<String> {
        self.log().iter().map(|e| e.to_line(ts)).collect()
    }

    /// The whole log, newline-terminated.
    pub fn to_ndjson(&self, ts: Timestamps) -> String {
        let mut out = String::new();
        for line in self.log_lines(ts) {
            out.push_str(&line);
            out.push('\n');
        }
        out
    }
}
