//! The `.qcm` score text format.
//!
//! ```text
//! score "Bell" {
//!   glossary {
//!     policy audience
//!   }
//!   qubit q1 "guitar" {
//!     z "low" "high"
//!     x "soft" "loud"
//!   }
//!   qubit q2 "piano" {
//!     z "low" "high"
//!     x "soft" "loud"
//!   }
//!   entangle e1 q1 q2 identity
//!   movement m1 {
//!     measure q1 basis green -> q2 via e1 cue 1
//!   }
//! }
//! ```
//!
//! Statements are one per line. `#` starts a comment. [`serialize`] writes
//! the canonical form, which [`parse`] reads back to an equal [`Score`].

mod lexer;
mod parser;
mod serialize;

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::score::{check_score, DiagnosticCode, Locus, Score, Severity};

pub use serialize::serialize;

/// 1-based line and column (in chars), plus the byte range.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SourceSpan {
    pub line: usize,
    pub column: usize,
    pub offset: usize,
    pub length: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ParseDiagnostic {
    pub severity: Severity,
    pub code: DiagnosticCode,
    pub message: String,
    pub span: SourceSpan,
}

impl fmt::Display for ParseDiagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sev = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(f, "{}:{}: {sev}[{}]: {}", self.span.line, self.span.column, self.code, self.message)
    }
}

/// Spans of the parsed declarations, keyed by the loci checker diagnostics use.
#[derive(Clone, Debug, Default)]
pub struct SourceMap {
    spans: BTreeMap<Locus, SourceSpan>,
}

impl SourceMap {
    pub fn get(&self, locus: &Locus) -> Option<SourceSpan> {
        self.spans.get(locus).copied()
    }

    /// The closest enclosing declaration that has a span.
    pub fn resolve(&self, locus: &Locus) -> SourceSpan {
        let parent = match locus {
            Locus::Item(m, _) => Some(Locus::Movement(*m)),
            Locus::Sameness(_) | Locus::Relation(_) | Locus::MovementNote(_) => Some(Locus::Glossary),
            _ => None,
        };
        self.get(locus)
            .or_else(|| parent.and_then(|p| self.get(&p)))
            .or_else(|| self.get(&Locus::Score))
            .unwrap_or(SourceSpan { line: 1, column: 1, offset: 0, length: 1 })
    }
}

#[derive(Clone, Debug)]
pub struct Parsed {
    pub score: Score,
    /// Non-fatal findings, such as `sharp(0)` being rewritten.
    pub warnings: Vec<ParseDiagnostic>,
    pub map: SourceMap,
}

/// Parses score text. Any error means no score; all errors found are returned.
pub fn parse(text: &str) -> Result<Parsed, Vec<ParseDiagnostic>> {
    parser::parse_str(text)
}

pub fn parse_bytes(bytes: &[u8]) -> Result<Parsed, Vec<ParseDiagnostic>> {
    match std::str::from_utf8(bytes) {
        Ok(text) => parse(text),
        Err(e) => {
            let at = e.valid_up_to();
            let prefix = std::str::from_utf8(&bytes[..at]).unwrap_or_default();
            let line_start = prefix.rfind('\n').map_or(0, |i| i + 1);
            let span = SourceSpan {
                line: prefix.matches('\n').count() + 1,
                column: prefix[line_start..].chars().count() + 1,
                offset: at,
                length: e.error_len().unwrap_or(bytes.len() - at).max(1),
            };
            Err(vec![ParseDiagnostic {
                severity: Severity::Error,
                code: DiagnosticCode::InvalidUtf8,
                message: format!("invalid UTF-8 at byte {at}"),
                span,
            }])
        }
    }
}

/// Parses and checks. Returns the score (if it parsed) and every diagnostic,
/// errors first, each with a span.
pub fn check_text(text: &str) -> (Option<Score>, Vec<ParseDiagnostic>) {
    check_parsed(parse(text))
}

pub fn check_bytes(bytes: &[u8]) -> (Option<Score>, Vec<ParseDiagnostic>) {
    check_parsed(parse_bytes(bytes))
}

fn check_parsed(parsed: Result<Parsed, Vec<ParseDiagnostic>>) -> (Option<Score>, Vec<ParseDiagnostic>) {
    match parsed {
        Err(diags) => (None, diags),
        Ok(p) => {
            let mut out = p.warnings;
            out.extend(check_score(&p.score).into_iter().map(|d| ParseDiagnostic {
                severity: d.severity,
                code: d.code,
                span: p.map.resolve(&d.locus),
                message: d.message,
            }));
            out.sort_by_key(|d| (d.severity, d.span.offset));
            (Some(p.score), out)
        }
    }
}
