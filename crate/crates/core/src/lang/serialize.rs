use std::f64::consts::TAU;
use std::fmt::Write;

use crate::score::{
    BasisChoice, Blob, BlobContent, Endpoint, GateKind, Identification, Item, MeasurementEvent, MusicalQubit,
    OutcomeMode, SamenessLink, Scope, Score, DEFAULT_DIRECTIVE,
};
use crate::sim::Gate1;
use crate::zx::{format_angle, Colour, WireKind};

fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\t' => out.push_str("\\t"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

fn matrix(m: &Gate1) -> String {
    m.iter().flatten().map(|z| format!("{} {}", z.re, z.im)).collect::<Vec<_>>().join(" ")
}

fn endpoint(e: &Endpoint) -> String {
    match e {
        Endpoint::Qubit { qubit, blob: Some(b) } => format!("{qubit}.{b}"),
        Endpoint::Qubit { qubit, blob: None } => qubit.clone(),
        Endpoint::Outcome(ev) => format!("outcome({ev})"),
    }
}

fn gate(k: &GateKind) -> String {
    match k {
        GateKind::Identity => "id".into(),
        GateKind::Hadamard => "H".into(),
        GateKind::Sharp(n) => format!("sharp({n})"),
        GateKind::Custom(r) => format!("rel({r})"),
        GateKind::Variable(v) => format!("var({v})"),
    }
}

/// Canonical text of a score. Defaults are left out; cues are always written.
pub fn serialize(score: &Score) -> String {
    let mut out = String::new();
    let w = &mut out;
    let _ = writeln!(w, "score {} {{", quote(&score.title));

    let g = &score.glossary;
    let _ = writeln!(w, "  glossary {{");
    if !g.policy.is_empty() {
        let roles: Vec<_> = g.policy.iter().map(|r| r.as_str()).collect();
        let _ = writeln!(w, "    policy {}", roles.join(" "));
    }
    if g.outcomes == OutcomeMode::Manual {
        let _ = writeln!(w, "    outcomes manual");
    }
    if g.open_colours {
        let _ = writeln!(w, "    colours open");
    }
    for (name, def) in &g.sameness {
        let _ = write!(w, "    sameness {name} {}", quote(&def.description));
        if def.scope != Scope::Full {
            let _ = write!(w, " scope {}", def.scope.as_str());
        }
        w.push('\n');
    }
    for (name, rel) in &g.relations {
        let _ = write!(w, "    relation {name} {}", quote(&rel.description));
        if let Some(u) = &rel.unitary {
            let _ = write!(w, " unitary {}", matrix(u));
        }
        w.push('\n');
    }
    for (m, text) in &g.movement_notes {
        let _ = writeln!(w, "    note {m} {}", quote(text));
    }
    let _ = writeln!(w, "  }}");

    for q in &score.qubits {
        qubit(w, q);
    }
    for e in &score.entanglements {
        let _ = write!(w, "  entangle {} {} {} ", e.id, e.pair.0, e.pair.1);
        match &e.gate {
            Identification::Identity => w.push_str("identity"),
            Identification::Hadamard => w.push('H'),
            Identification::Matrix(m) => {
                let _ = write!(w, "matrix {}", matrix(m));
            }
            Identification::Relation(r) => {
                let _ = write!(w, "relation {r}");
            }
        }
        if !e.description.is_empty() {
            let _ = write!(w, " {}", quote(&e.description));
        }
        w.push('\n');
    }
    for m in &score.movements {
        let _ = writeln!(w, "  movement {} {{", m.id);
        for item in &m.items {
            w.push_str("    ");
            match item {
                Item::Blob(b) => blob(w, b),
                Item::Link(l) => link(w, l),
                Item::Measure(e) => measure(w, &m.id, e),
            }
            w.push('\n');
        }
        let _ = writeln!(w, "  }}");
    }
    out.push_str("}\n");
    out
}

fn qubit(w: &mut String, q: &MusicalQubit) {
    let _ = writeln!(w, "  qubit {} {} {{", q.id, quote(&q.instrument));
    let _ = writeln!(w, "    z {} {}", quote(&q.z_labels[0]), quote(&q.z_labels[1]));
    let _ = writeln!(w, "    x {} {}", quote(&q.x_labels[0]), quote(&q.x_labels[1]));
    if q.phase_range != (0.0, TAU) {
        let _ = writeln!(w, "    phases {} {}", format_angle(q.phase_range.0), format_angle(q.phase_range.1));
    }
    if q.directive != DEFAULT_DIRECTIVE {
        let _ = writeln!(w, "    directive {}", quote(&q.directive));
    }
    for p in &q.paths {
        let _ = writeln!(w, "    path {}", quote(p));
    }
    let _ = writeln!(w, "  }}");
}

fn blob(w: &mut String, b: &Blob) {
    let _ = write!(w, "blob {} {} ", b.id, b.qubit);
    match &b.content {
        BlobContent::Fragment(f) => {
            w.push_str("notes");
            for n in &f.0 {
                let d = n.duration;
                if *d.denom() == 1 {
                    let _ = write!(w, " {}:{}", n.pitch, d.numer());
                } else {
                    let _ = write!(w, " {}:{}/{}", n.pitch, d.numer(), d.denom());
                }
            }
        }
        BlobContent::Variable(v) => {
            let _ = write!(w, "var {v}");
        }
        BlobContent::Abstract(t) => {
            let _ = write!(w, "abstract {}", quote(t));
        }
    }
}

fn link(w: &mut String, l: &SamenessLink) {
    let _ = write!(w, "link {} -> {}", endpoint(&l.from), endpoint(&l.to));
    if l.kind != Default::default() {
        let _ = write!(w, " kind {}", l.kind.name());
    }
    if l.scope != Scope::Full {
        let _ = write!(w, " scope {}", l.scope.as_str());
    }
    if l.gate.kind != GateKind::Identity {
        let _ = write!(w, " gate {}", gate(&l.gate.kind));
    }
    if let Some(q) = &l.gate.lead {
        let _ = write!(w, " lead {q}");
    }
    if l.wire != SamenessLink::natural_wire(&l.from, &l.to) {
        let _ = write!(w, " wire {}", if l.wire == WireKind::Classical { "classical" } else { "quantum" });
    }
}

fn measure(w: &mut String, movement: &str, e: &MeasurementEvent) {
    let basis = match e.basis {
        BasisChoice::Scored(Colour::Green) => "green",
        BasisChoice::Scored(Colour::Red) => "red",
        BasisChoice::Open => "open",
    };
    let _ = write!(w, "measure {} basis {basis} -> {}", e.measured, e.influenced);
    if let Some(v) = &e.entanglement {
        let _ = write!(w, " via {v}");
    }
    let _ = write!(w, " cue {}", e.cue);
    if let Some(p) = e.phase {
        let _ = write!(w, " phase {}", format_angle(p));
    }
    if e.id != MeasurementEvent::default_id(movement, e.cue) {
        let _ = write!(w, " id {}", e.id);
    }
}
