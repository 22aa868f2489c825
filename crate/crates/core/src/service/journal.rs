//! Append-only action journal, one file per session: `<dir>/<id>.journal`.
//!
//! Line 1 is the header, every further line one accepted action:
//!
//! ```text
//! {"v":1,"session":"…","seed":42,"options":{"reprepare":true},"score":"score \"Bell\" {\n…"}
//! {"action":{"actor":"audience","type":"choose-basis","qubit":"q1","colour":"green"}}
//! ```
//!
//! A last line without its newline is a torn write and is ignored.

use std::fs::{self, File, OpenOptions};
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::engine::{ObserverAction, SessionOptions};

pub const JOURNAL_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JournalHeader {
    pub v: u32,
    pub session: String,
    pub seed: u64,
    pub options: SessionOptions,
    /// Canonical score text.
    pub score: String,
}

#[derive(Serialize, Deserialize)]
struct ActionLine {
    action: ObserverAction,
}

pub struct Journal {
    file: File,
}

pub fn path_for(dir: &Path, session: &str) -> PathBuf {
    dir.join(format!("{session}.journal"))
}

impl Journal {
    pub fn create(dir: &Path, header: &JournalHeader) -> io::Result<Journal> {
        fs::create_dir_all(dir)?;
        let mut file = OpenOptions::new().create_new(true).append(true).open(path_for(dir, &header.session))?;
        writeln!(file, "{}", serde_json::to_string(header)?)?;
        file.sync_data()?;
        Ok(Journal { file })
    }

    pub fn reopen(path: &Path) -> io::Result<Journal> {
        Ok(Journal { file: OpenOptions::new().append(true).open(path)? })
    }

    pub fn append(&mut self, action: &ObserverAction) -> io::Result<()> {
        let line = serde_json::to_string(&ActionLine { action: action.clone() })?;
        writeln!(self.file, "{line}")?;
        self.file.sync_data()
    }
}

/// Reads a journal back into its header and actions.
pub fn read(path: &Path) -> io::Result<(JournalHeader, Vec<ObserverAction>)> {
    let text = fs::read_to_string(path)?;
    let mut complete: Vec<&str> = text.split_inclusive('\n').filter(|l| l.ends_with('\n')).collect();
    if complete.is_empty() {
        return Err(io::Error::new(io::ErrorKind::InvalidData, "journal has no header"));
    }
    let header: JournalHeader = serde_json::from_str(complete.remove(0))?;
    if header.v != JOURNAL_VERSION {
        return Err(io::Error::new(io::ErrorKind::InvalidData, format!("journal version {}", header.v)));
    }
    let mut actions = Vec::with_capacity(complete.len());
    for line in complete {
        let a: ActionLine = serde_json::from_str(line)?;
        actions.push(a.action);
    }
    Ok((header, actions))
}

/// Cuts a torn last line so appends start on a fresh line.
pub fn truncate_torn_tail(path: &Path) -> io::Result<()> {
    let bytes = fs::read(path)?;
    let keep = bytes.iter().rposition(|&b| b == b'\n').map_or(0, |i| i + 1);
    if keep != bytes.len() {
        OpenOptions::new().write(true).open(path)?.set_len(keep as u64)?;
    }
    Ok(())
}
