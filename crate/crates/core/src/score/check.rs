use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::{
    BlobContent, Endpoint, GateKind, Identification, Item, MeasurementEvent, SamenessKind, SamenessLink, Score,
};
use crate::sim::MAX_QUBITS;
use crate::zx::{gadgets, DiagramBuilder, WireKind, ZxError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
}

/// Stable diagnostic identifiers. The kebab-case string is the public name.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DiagnosticCode {
    // lexical and syntactic
    InvalidUtf8,
    ExpectedScoreHeader,
    UnterminatedString,
    UnexpectedToken,
    UnexpectedEnd,
    BadNumber,
    UnknownKeyword,
    DuplicateClause,
    SharpZeroNormalised,
    TrailingInput,
    MissingClause,
    // structural
    NoMovements,
    MissingPolicy,
    DuplicateId,
    UnknownQubit,
    UnknownBlob,
    UnknownEvent,
    UnknownEntanglement,
    UnknownMovement,
    UnresolvedGlossaryName,
    BlobQubitMismatch,
    TooManyQubits,
    DuplicateLabels,
    BadPhaseRange,
    PhaseOutOfRange,
    SameQubit,
    DuplicateCue,
    EntanglementMismatch,
    OverlappingEntanglement,
    NonUnitary,
    MissingUnitary,
    EmptyFragment,
    NonPositiveDuration,
    SharpZero,
    LinkEndpointsIdentical,
    // wire typing and tilts
    ClassicalIntoHadamard,
    OutcomeOnQuantumWire,
    TiltNotEndpoint,
    LeaderIsFollower,
    LeaderCycle,
}

impl DiagnosticCode {
    pub fn as_str(self) -> &'static str {
        use DiagnosticCode::*;
        match self {
            InvalidUtf8 => "invalid-utf8",
            ExpectedScoreHeader => "expected-score-header",
            UnterminatedString => "unterminated-string",
            UnexpectedToken => "unexpected-token",
            UnexpectedEnd => "unexpected-end",
            BadNumber => "bad-number",
            UnknownKeyword => "unknown-keyword",
            DuplicateClause => "duplicate-clause",
            SharpZeroNormalised => "sharp-zero-normalised",
            TrailingInput => "trailing-input",
            MissingClause => "missing-clause",
            NoMovements => "no-movements",
            MissingPolicy => "missing-policy",
            DuplicateId => "duplicate-id",
            UnknownQubit => "unknown-qubit",
            UnknownBlob => "unknown-blob",
            UnknownEvent => "unknown-event",
            UnknownEntanglement => "unknown-entanglement",
            UnknownMovement => "unknown-movement",
            UnresolvedGlossaryName => "unresolved-glossary-name",
            BlobQubitMismatch => "blob-qubit-mismatch",
            TooManyQubits => "too-many-qubits",
            DuplicateLabels => "duplicate-labels",
            BadPhaseRange => "bad-phase-range",
            PhaseOutOfRange => "phase-out-of-range",
            SameQubit => "same-qubit",
            DuplicateCue => "duplicate-cue",
            EntanglementMismatch => "entanglement-mismatch",
            OverlappingEntanglement => "overlapping-entanglement",
            NonUnitary => "non-unitary",
            MissingUnitary => "missing-unitary",
            EmptyFragment => "empty-fragment",
            NonPositiveDuration => "non-positive-duration",
            SharpZero => "sharp-zero",
            LinkEndpointsIdentical => "link-endpoints-identical",
            ClassicalIntoHadamard => "classical-into-hadamard",
            OutcomeOnQuantumWire => "outcome-on-quantum-wire",
            TiltNotEndpoint => "tilt-not-endpoint",
            LeaderIsFollower => "leader-is-follower",
            LeaderCycle => "leader-cycle",
        }
    }
}

impl fmt::Display for DiagnosticCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl Serialize for DiagnosticCode {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

/// Where in a score a diagnostic points. The parser maps these to spans.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Locus {
    Score,
    Glossary,
    Sameness(String),
    Relation(String),
    MovementNote(String),
    Qubit(usize),
    Entanglement(usize),
    Movement(usize),
    Item(usize, usize),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Diagnostic {
    pub severity: Severity,
    pub code: DiagnosticCode,
    pub message: String,
    pub locus: Locus,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sev = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(f, "{sev}[{}]: {}", self.code, self.message)
    }
}

struct Sink(Vec<Diagnostic>);

impl Sink {
    fn error(&mut self, code: DiagnosticCode, locus: Locus, message: impl Into<String>) {
        self.0.push(Diagnostic { severity: Severity::Error, code, message: message.into(), locus });
    }
}

/// Validates a score. The list is empty iff the score is fit to perform.
pub fn check_score(s: &Score) -> Vec<Diagnostic> {
    use DiagnosticCode::*;
    let mut out = Sink(Vec::new());

    if s.movements.is_empty() {
        out.error(NoMovements, Locus::Score, "a score needs at least one movement");
    }
    if s.glossary.policy.is_empty() {
        out.error(MissingPolicy, Locus::Glossary, "the glossary must name who decides measurements");
    }
    for (name, r) in &s.glossary.relations {
        if let Some(u) = r.unitary {
            if !gadgets::is_unitary(u, 1e-9) {
                out.error(NonUnitary, Locus::Relation(name.clone()), format!("relation `{name}` has a non-unitary matrix"));
            }
        }
    }
    for m in s.glossary.movement_notes.keys() {
        if !s.movements.iter().any(|mv| &mv.id == m) {
            out.error(UnknownMovement, Locus::MovementNote(m.clone()), format!("note for unknown movement `{m}`"));
        }
    }

    let mut qubit_ids = BTreeSet::new();
    if s.qubits.len() > MAX_QUBITS {
        out.error(TooManyQubits, Locus::Score, format!("{} qubits, at most {MAX_QUBITS} are supported", s.qubits.len()));
    }
    for (i, q) in s.qubits.iter().enumerate() {
        if !qubit_ids.insert(q.id.as_str()) {
            out.error(DuplicateId, Locus::Qubit(i), format!("qubit `{}` declared twice", q.id));
        }
        let labels: BTreeSet<&str> = q.z_labels.iter().chain(&q.x_labels).map(String::as_str).collect();
        if labels.len() != 4 {
            out.error(DuplicateLabels, Locus::Qubit(i), format!("qubit `{}` needs four distinct eigenstate labels", q.id));
        }
        let (lo, hi) = q.phase_range;
        if !(0.0 <= lo && lo <= hi && hi <= std::f64::consts::TAU + 1e-12) {
            out.error(BadPhaseRange, Locus::Qubit(i), format!("phase range of `{}` must satisfy 0 ≤ lo ≤ hi ≤ 2π", q.id));
        }
    }

    let mut ent_ids = BTreeSet::new();
    let mut entangled: BTreeMap<&str, usize> = BTreeMap::new();
    for (i, e) in s.entanglements.iter().enumerate() {
        let locus = Locus::Entanglement(i);
        if !ent_ids.insert(e.id.as_str()) {
            out.error(DuplicateId, locus.clone(), format!("entanglement `{}` declared twice", e.id));
        }
        let (a, b) = (&e.pair.0, &e.pair.1);
        for q in [a, b] {
            if s.qubit(q).is_none() {
                out.error(UnknownQubit, locus.clone(), format!("entanglement `{}` names unknown qubit `{q}`", e.id));
            }
            if let Some(prev) = entangled.insert(q, i) {
                if prev != i {
                    out.error(
                        OverlappingEntanglement,
                        locus.clone(),
                        format!("qubit `{q}` is already entangled by `{}`", s.entanglements[prev].id),
                    );
                }
            }
        }
        if a == b {
            out.error(SameQubit, locus.clone(), "an entanglement needs two different qubits");
        }
        match &e.gate {
            Identification::Matrix(u) if !gadgets::is_unitary(*u, 1e-9) => {
                out.error(NonUnitary, locus.clone(), format!("identification gate of `{}` is not unitary", e.id));
            }
            Identification::Relation(name) => match s.glossary.relations.get(name) {
                None => out.error(UnresolvedGlossaryName, locus.clone(), format!("relation `{name}` is not in the glossary")),
                Some(r) if r.unitary.is_none() => {
                    out.error(MissingUnitary, locus.clone(), format!("relation `{name}` has no matrix to entangle with"))
                }
                _ => {}
            },
            _ => {}
        }
    }

    let mut movement_ids = BTreeSet::new();
    let mut blobs: BTreeMap<&str, &str> = BTreeMap::new();
    let mut events: BTreeSet<&str> = BTreeSet::new();
    for (mi, m) in s.movements.iter().enumerate() {
        if !movement_ids.insert(m.id.as_str()) {
            out.error(DuplicateId, Locus::Movement(mi), format!("movement `{}` declared twice", m.id));
        }
        for (ii, item) in m.items.iter().enumerate() {
            let locus = Locus::Item(mi, ii);
            match item {
                Item::Blob(b) => {
                    if blobs.insert(&b.id, &b.qubit).is_some() || events.contains(b.id.as_str()) {
                        out.error(DuplicateId, locus.clone(), format!("id `{}` used twice", b.id));
                    }
                    if s.qubit(&b.qubit).is_none() {
                        out.error(UnknownQubit, locus.clone(), format!("blob `{}` sits on unknown qubit `{}`", b.id, b.qubit));
                    }
                    if let BlobContent::Fragment(f) = &b.content {
                        if f.0.is_empty() {
                            out.error(EmptyFragment, locus.clone(), format!("blob `{}` has no notes", b.id));
                        }
                        if f.0.iter().any(|n| *n.duration.numer() == 0) {
                            out.error(NonPositiveDuration, locus.clone(), format!("blob `{}` has a zero duration", b.id));
                        }
                    }
                }
                Item::Measure(e) => {
                    if !events.insert(&e.id) || blobs.contains_key(e.id.as_str()) {
                        out.error(DuplicateId, locus.clone(), format!("id `{}` used twice", e.id));
                    }
                }
                Item::Link(_) => {}
            }
        }
    }

    for (mi, m) in s.movements.iter().enumerate() {
        let mut cues = BTreeSet::new();
        let mut leads: Vec<(&str, &str, usize)> = Vec::new();
        for (ii, item) in m.items.iter().enumerate() {
            let locus = Locus::Item(mi, ii);
            match item {
                Item::Measure(e) => {
                    if !cues.insert(e.cue) {
                        out.error(DuplicateCue, locus.clone(), format!("cue {} appears twice in movement `{}`", e.cue, m.id));
                    }
                    check_event(s, e, &locus, &mut out);
                }
                Item::Link(l) => {
                    check_link(s, l, &blobs, &events, &locus, &mut out);
                    if let (Some(lead), Some(a), Some(b)) = (&l.gate.lead, l.from.qubit_id(), l.to.qubit_id()) {
                        let follower = if lead == a { b } else { a };
                        if (lead == a || lead == b) && a != b {
                            leads.push((lead.as_str(), follower, ii));
                        }
                    }
                }
                Item::Blob(_) => {}
            }
        }
        if let Some(ii) = find_cycle(&leads) {
            out.error(LeaderCycle, Locus::Item(mi, ii), format!("leaders in movement `{}` form a cycle", m.id));
        }
    }
    out.0
}

fn check_event(s: &Score, e: &MeasurementEvent, locus: &Locus, out: &mut Sink) {
    use DiagnosticCode::*;
    for q in [&e.measured, &e.influenced] {
        if s.qubit(q).is_none() {
            out.error(UnknownQubit, locus.clone(), format!("measurement names unknown qubit `{q}`"));
        }
    }
    if e.measured == e.influenced {
        out.error(SameQubit, locus.clone(), "measured and influenced qubit must differ");
    }
    match s.entanglement_for(e) {
        None => match &e.entanglement {
            Some(id) => out.error(UnknownEntanglement, locus.clone(), format!("unknown entanglement `{id}`")),
            None if e.measured != e.influenced => out.error(
                UnknownEntanglement,
                locus.clone(),
                format!("no entanglement pairs `{}` with `{}`", e.measured, e.influenced),
            ),
            None => {}
        },
        Some(spec) => {
            let (a, b) = &spec.pair;
            let matches = (a == &e.measured && b == &e.influenced) || (a == &e.influenced && b == &e.measured);
            if !matches {
                out.error(
                    EntanglementMismatch,
                    locus.clone(),
                    format!("entanglement `{}` does not pair `{}` with `{}`", spec.id, e.measured, e.influenced),
                );
            }
        }
    }
    if let (Some(phase), Some(q)) = (e.phase, s.qubit(&e.measured)) {
        if !q.phase_allowed(phase) {
            out.error(
                PhaseOutOfRange,
                locus.clone(),
                format!("phase {phase} outside the range [{}, {}] of `{}`", q.phase_range.0, q.phase_range.1, q.id),
            );
        }
    }
}

fn check_link(
    s: &Score,
    l: &SamenessLink,
    blobs: &BTreeMap<&str, &str>,
    events: &BTreeSet<&str>,
    locus: &Locus,
    out: &mut Sink,
) {
    use DiagnosticCode::*;
    for end in [&l.from, &l.to] {
        match end {
            Endpoint::Qubit { qubit, blob } => {
                if s.qubit(qubit).is_none() {
                    out.error(UnknownQubit, locus.clone(), format!("link names unknown qubit `{qubit}`"));
                }
                if let Some(b) = blob {
                    match blobs.get(b.as_str()) {
                        None => out.error(UnknownBlob, locus.clone(), format!("link names unknown blob `{b}`")),
                        Some(owner) if owner != qubit => out.error(
                            BlobQubitMismatch,
                            locus.clone(),
                            format!("blob `{b}` belongs to `{owner}`, not `{qubit}`"),
                        ),
                        _ => {}
                    }
                }
            }
            Endpoint::Outcome(ev) => {
                if !events.contains(ev.as_str()) {
                    out.error(UnknownEvent, locus.clone(), format!("link names unknown measurement `{ev}`"));
                }
                if l.wire == WireKind::Quantum {
                    out.error(OutcomeOnQuantumWire, locus.clone(), format!("the outcome of `{ev}` is classical"));
                }
            }
        }
    }
    if l.from == l.to {
        out.error(LinkEndpointsIdentical, locus.clone(), "a link needs two distinct endpoints");
    }
    if let SamenessKind::Custom(name) = &l.kind {
        if !s.glossary.sameness.contains_key(name) {
            out.error(UnresolvedGlossaryName, locus.clone(), format!("sameness kind `{name}` is not in the glossary"));
        }
    }
    match &l.gate.kind {
        GateKind::Custom(name) if !s.glossary.relations.contains_key(name) => {
            out.error(UnresolvedGlossaryName, locus.clone(), format!("gate `{name}` is not in the glossary"));
        }
        GateKind::Sharp(0) => out.error(SharpZero, locus.clone(), "sharp(0) is the identity; write `id`"),
        _ => {}
    }
    if let Err(ZxError::ClassicalHadamard(_)) = link_diagram(l) {
        out.error(ClassicalIntoHadamard, locus.clone(), "a Hadamard gate cannot act on a classical wire");
    }
    if let Some(lead) = &l.gate.lead {
        let (a, b) = (l.from.qubit_id(), l.to.qubit_id());
        if a != Some(lead.as_str()) && b != Some(lead.as_str()) {
            out.error(TiltNotEndpoint, locus.clone(), format!("leader `{lead}` is not an endpoint of the link"));
        } else if a == b {
            out.error(LeaderIsFollower, locus.clone(), format!("`{lead}` would lead and follow the same link"));
        }
    }
}

/// The link as a one-wire diagram, so wire typing is decided by the same
/// rules that govern diagrams.
fn link_diagram(l: &SamenessLink) -> Result<crate::zx::Diagram, ZxError> {
    let mut b = DiagramBuilder::new();
    let i = b.input();
    let o = b.output();
    if l.gate.kind == GateKind::Hadamard {
        let h = b.hadamard();
        b.connect(i, h, l.wire).connect(h, o, l.wire);
    } else {
        b.connect(i, o, l.wire);
    }
    b.build()
}

/// Index of an item on a leader cycle, if the leader → follower graph has one.
fn find_cycle(edges: &[(&str, &str, usize)]) -> Option<usize> {
    let mut adj: BTreeMap<&str, Vec<(&str, usize)>> = BTreeMap::new();
    for &(a, b, i) in edges {
        adj.entry(a).or_default().push((b, i));
    }
    // 0 unvisited, 1 on stack, 2 done
    let mut state: BTreeMap<&str, u8> = BTreeMap::new();
    fn visit<'a>(
        n: &'a str,
        adj: &BTreeMap<&'a str, Vec<(&'a str, usize)>>,
        state: &mut BTreeMap<&'a str, u8>,
    ) -> Option<usize> {
        state.insert(n, 1);
        for &(m, i) in adj.get(n).map(Vec::as_slice).unwrap_or(&[]) {
            match state.get(m).copied().unwrap_or(0) {
                1 => return Some(i),
                0 => {
                    if let Some(i) = visit(m, adj, state) {
                        return Some(i);
                    }
                }
                _ => {}
            }
        }
        state.insert(n, 2);
        None
    }
    let starts: Vec<&str> = adj.keys().copied().collect();
    for n in starts {
        if state.get(n).copied().unwrap_or(0) == 0 {
            if let Some(i) = visit(n, &adj, &mut state) {
                return Some(i);
            }
        }
    }
    None
}
