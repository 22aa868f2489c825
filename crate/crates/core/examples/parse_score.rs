//! Parses a `.qcm` file, prints its diagnostics, and echoes the canonical text.
//!
//! cargo run --example parse_score -- corpus/canon.qcm

use qcm::lang::{check_text, serialize};
use qcm::score::bell_score_fixture;

fn main() {
    let text = match std::env::args().nth(1) {
        Some(path) => std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}")),
        None => serialize(&bell_score_fixture()),
    };
    let (score, diags) = check_text(&text);
    for d in &diags {
        eprintln!("{d}");
    }
    if let Some(score) = score {
        print!("{}", serialize(&score));
    }
}
