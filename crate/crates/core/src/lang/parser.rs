use num_complex::Complex64;
use num_rational::Ratio;

use super::lexer::{lex, Positions, Tok, Token};
use super::{ParseDiagnostic, Parsed, SourceMap, SourceSpan};
use crate::score::{
    BasisChoice, Blob, BlobContent, DiagnosticCode, Endpoint, EntanglementSpec, Fragment, Gate, GateKind,
    Identification, Item, Locus, MeasurementEvent, MetaGlossary, Movement, MusicalQubit, Note, OutcomeMode, Relation,
    Role, SamenessDef, SamenessKind, SamenessLink, Scope, Score, Severity,
};
use crate::sim::Gate1;
use crate::zx::{parse_angle, Colour, WireKind};

use DiagnosticCode as D;

type Res<T> = Result<T, ()>;

struct Parser<'a> {
    toks: Vec<Token>,
    i: usize,
    pos: &'a Positions<'a>,
    diags: Vec<ParseDiagnostic>,
    map: SourceMap,
}

pub fn parse_str(text: &str) -> Result<Parsed, Vec<ParseDiagnostic>> {
    let pos = Positions::new(text);
    let (toks, lex_errors) = lex(text, &pos);
    let mut p = Parser { toks, i: 0, pos: &pos, diags: Vec::new(), map: SourceMap::default() };
    for e in lex_errors {
        p.diags.push(ParseDiagnostic { severity: Severity::Error, code: e.code, message: e.message, span: e.span });
    }
    let score = p.score();
    let failed = p.diags.iter().any(|d| d.severity == Severity::Error);
    match score {
        Ok(score) if !failed => Ok(Parsed { score, warnings: p.diags, map: p.map }),
        _ => {
            let mut diags = p.diags;
            diags.sort_by_key(|d| (d.span.offset, d.severity));
            Err(diags)
        }
    }
}

fn is_ident(s: &str) -> bool {
    let mut cs = s.chars();
    cs.next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
        && cs.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-')
}

fn wrapped<'w>(word: &'w str, head: &str) -> Option<&'w str> {
    word.strip_prefix(head)?.strip_prefix('(')?.strip_suffix(')')
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &Token {
        &self.toks[self.i]
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.i].clone();
        if self.i + 1 < self.toks.len() {
            self.i += 1;
        }
        t
    }

    fn error(&mut self, code: DiagnosticCode, span: SourceSpan, message: impl Into<String>) {
        self.diags.push(ParseDiagnostic { severity: Severity::Error, code, message: message.into(), span });
    }

    fn warn(&mut self, code: DiagnosticCode, span: SourceSpan, message: impl Into<String>) {
        self.diags.push(ParseDiagnostic { severity: Severity::Warning, code, message: message.into(), span });
    }

    fn skip_newlines(&mut self) {
        while self.peek().tok == Tok::Newline {
            self.bump();
        }
    }

    /// Skips the rest of a broken statement, including any block it opens.
    fn recover(&mut self) {
        let mut depth = 0usize;
        loop {
            match self.peek().tok {
                Tok::Eof => return,
                Tok::Newline if depth == 0 => {
                    self.bump();
                    return;
                }
                Tok::RBrace if depth == 0 => return,
                Tok::RBrace => depth -= 1,
                Tok::LBrace => depth += 1,
                _ => {}
            }
            self.bump();
        }
    }

    fn unexpected(&mut self, what: &str) {
        let t = self.peek().clone();
        let (code, found) = match &t.tok {
            Tok::Eof => (D::UnexpectedEnd, "end of input".to_string()),
            Tok::Newline => (D::UnexpectedEnd, "end of line".to_string()),
            Tok::Word(w) => (D::UnexpectedToken, format!("`{w}`")),
            Tok::Str(_) => (D::UnexpectedToken, "a string".to_string()),
            Tok::LBrace => (D::UnexpectedToken, "`{`".to_string()),
            Tok::RBrace => (D::UnexpectedToken, "`}`".to_string()),
        };
        self.error(code, t.span, format!("expected {what}, found {found}"));
    }

    fn word(&mut self, what: &str) -> Res<(String, SourceSpan)> {
        if let Tok::Word(w) = &self.peek().tok {
            let w = w.clone();
            let span = self.bump().span;
            return Ok((w, span));
        }
        self.unexpected(what);
        Err(())
    }

    fn keyword(&mut self, kw: &str) -> Res<SourceSpan> {
        if matches!(&self.peek().tok, Tok::Word(w) if w == kw) {
            return Ok(self.bump().span);
        }
        self.unexpected(&format!("`{kw}`"));
        Err(())
    }

    fn ident(&mut self, what: &str) -> Res<(String, SourceSpan)> {
        let (w, span) = self.word(what)?;
        if !is_ident(&w) {
            self.error(D::UnexpectedToken, span, format!("`{w}` is not a valid {what}"));
            return Err(());
        }
        Ok((w, span))
    }

    fn string(&mut self, what: &str) -> Res<(String, SourceSpan)> {
        if let Tok::Str(s) = &self.peek().tok {
            let s = s.clone();
            let span = self.bump().span;
            return Ok((s, span));
        }
        self.unexpected(what);
        Err(())
    }

    fn lbrace(&mut self) -> Res<()> {
        if self.peek().tok == Tok::LBrace {
            self.bump();
            return Ok(());
        }
        self.unexpected("`{`");
        Err(())
    }

    /// A statement must end at a newline, a closing brace, or the end.
    fn end_statement(&mut self) -> Res<()> {
        match self.peek().tok {
            Tok::Newline => {
                self.bump();
                Ok(())
            }
            Tok::RBrace | Tok::Eof => Ok(()),
            _ => {
                self.unexpected("end of line");
                Err(())
            }
        }
    }

    fn at_clause(&self) -> bool {
        matches!(self.peek().tok, Tok::Word(_))
    }

    fn span_from(&self, start: SourceSpan) -> SourceSpan {
        let last = self.toks[self.i.saturating_sub(1)].span;
        if last.offset < start.offset {
            start
        } else {
            self.pos.join(start, last)
        }
    }

    fn number<T: std::str::FromStr>(&mut self, what: &str) -> Res<(T, SourceSpan)> {
        let (w, span) = self.word(what)?;
        match w.parse() {
            Ok(v) => Ok((v, span)),
            Err(_) => {
                self.error(D::BadNumber, span, format!("`{w}` is not a valid {what}"));
                Err(())
            }
        }
    }

    fn float(&mut self, what: &str) -> Res<f64> {
        let (v, span): (f64, _) = self.number(what)?;
        if !v.is_finite() {
            self.error(D::BadNumber, span, format!("{what} must be finite"));
            return Err(());
        }
        Ok(v)
    }

    fn angle(&mut self) -> Res<f64> {
        let (w, span) = self.word("an angle")?;
        match parse_angle(&w) {
            Some(a) => Ok(a),
            None => {
                self.error(D::BadNumber, span, format!("`{w}` is not an angle (try `pi/2` or `0.25`)"));
                Err(())
            }
        }
    }

    fn matrix(&mut self) -> Res<Gate1> {
        let mut vals = [0.0; 8];
        for v in &mut vals {
            *v = self.float("matrix entry")?;
        }
        let e = |k: usize| Complex64::new(vals[2 * k], vals[2 * k + 1]);
        Ok([[e(0), e(1)], [e(2), e(3)]])
    }

    /// Runs `stmt` for each statement of a `{ … }` body until the closing brace.
    fn body(&mut self, what: &str, mut stmt: impl FnMut(&mut Self, String, SourceSpan) -> Res<()>) -> Res<()> {
        loop {
            self.skip_newlines();
            match self.peek().tok.clone() {
                Tok::RBrace => {
                    self.bump();
                    return Ok(());
                }
                Tok::Eof => {
                    let span = self.peek().span;
                    self.error(D::UnexpectedEnd, span, format!("missing `}}` to close {what}"));
                    return Err(());
                }
                Tok::Word(w) => {
                    let span = self.bump().span;
                    if stmt(self, w, span).is_err() {
                        self.recover();
                    }
                }
                _ => {
                    self.unexpected("a keyword");
                    self.recover();
                }
            }
        }
    }

    fn score(&mut self) -> Res<Score> {
        self.skip_newlines();
        if !matches!(&self.peek().tok, Tok::Word(w) if w == "score") {
            let span = self.peek().span;
            self.error(D::ExpectedScoreHeader, span, "expected score header");
            return Err(());
        }
        let head = self.bump().span;
        let (title, _) = self.string("a score title")?;
        self.lbrace()?;
        self.map.insert(Locus::Score, self.span_from(head));

        let mut glossary: Option<MetaGlossary> = None;
        let mut qubits = Vec::new();
        let mut entanglements = Vec::new();
        let mut movements = Vec::new();
        let closed = self.body("the score", |p, kw, span| match kw.as_str() {
            "glossary" => {
                let g = p.glossary(span)?;
                if glossary.is_some() {
                    p.error(D::DuplicateClause, span, "only one glossary per score");
                    return Ok(());
                }
                glossary = Some(g);
                Ok(())
            }
            "qubit" => {
                let q = p.qubit(span, qubits.len())?;
                qubits.push(q);
                Ok(())
            }
            "entangle" => {
                let e = p.entangle(span, entanglements.len())?;
                entanglements.push(e);
                Ok(())
            }
            "movement" => {
                let m = p.movement(span, movements.len())?;
                movements.push(m);
                Ok(())
            }
            other => {
                p.error(D::UnknownKeyword, span, format!("unknown section `{other}`"));
                Err(())
            }
        });
        if closed.is_ok() {
            self.skip_newlines();
            if self.peek().tok != Tok::Eof {
                let span = self.peek().span;
                self.error(D::TrailingInput, span, "text after the end of the score");
            }
        }
        Ok(Score { title, glossary: glossary.unwrap_or_default(), qubits, entanglements, movements })
    }

    fn glossary(&mut self, head: SourceSpan) -> Res<MetaGlossary> {
        self.lbrace()?;
        self.end_statement()?;
        self.map.insert(Locus::Glossary, head);
        let mut g = MetaGlossary::default();
        let mut seen_policy = false;
        self.body("the glossary", |p, kw, span| {
            match kw.as_str() {
                "policy" => {
                    if seen_policy {
                        p.error(D::DuplicateClause, span, "policy given twice");
                    }
                    seen_policy = true;
                    if !p.at_clause() {
                        p.unexpected("a role (performer, third-party, audience)");
                        return Err(());
                    }
                    while p.at_clause() {
                        let (w, wspan) = p.word("a role")?;
                        match Role::parse(&w) {
                            Some(r) if !g.policy.contains(&r) => g.policy.push(r),
                            Some(_) => p.error(D::DuplicateClause, wspan, format!("role `{w}` listed twice")),
                            None => {
                                p.error(D::UnknownKeyword, wspan, format!("unknown role `{w}`"));
                                return Err(());
                            }
                        }
                    }
                }
                "outcomes" => {
                    let (w, wspan) = p.word("`seeded` or `manual`")?;
                    g.outcomes = match w.as_str() {
                        "seeded" => OutcomeMode::Seeded,
                        "manual" => OutcomeMode::Manual,
                        _ => {
                            p.error(D::UnknownKeyword, wspan, format!("unknown outcome mode `{w}`"));
                            return Err(());
                        }
                    };
                }
                "colours" | "colors" => {
                    let (w, wspan) = p.word("`scored` or `open`")?;
                    g.open_colours = match w.as_str() {
                        "scored" => false,
                        "open" => true,
                        _ => {
                            p.error(D::UnknownKeyword, wspan, format!("unknown colour mode `{w}`"));
                            return Err(());
                        }
                    };
                }
                "sameness" => {
                    let (name, nspan) = p.ident("sameness name")?;
                    let (description, _) = p.string("a description")?;
                    let mut scope = Scope::Full;
                    if p.at_clause() {
                        p.keyword("scope")?;
                        scope = p.scope()?;
                    }
                    if g.sameness.insert(name.clone(), SamenessDef { description, scope }).is_some() {
                        p.error(D::DuplicateId, nspan, format!("sameness `{name}` defined twice"));
                    }
                    p.map.insert(Locus::Sameness(name), p.span_from(span));
                }
                "relation" => {
                    let (name, nspan) = p.ident("relation name")?;
                    let (description, _) = p.string("a description")?;
                    let mut unitary = None;
                    if p.at_clause() {
                        p.keyword("unitary")?;
                        unitary = Some(p.matrix()?);
                    }
                    if g.relations.insert(name.clone(), Relation { description, unitary }).is_some() {
                        p.error(D::DuplicateId, nspan, format!("relation `{name}` defined twice"));
                    }
                    p.map.insert(Locus::Relation(name), p.span_from(span));
                }
                "note" => {
                    let (m, mspan) = p.ident("movement id")?;
                    let (text, _) = p.string("note text")?;
                    if g.movement_notes.insert(m.clone(), text).is_some() {
                        p.error(D::DuplicateId, mspan, format!("two notes for movement `{m}`"));
                    }
                    p.map.insert(Locus::MovementNote(m), p.span_from(span));
                }
                other => {
                    p.error(D::UnknownKeyword, span, format!("unknown glossary entry `{other}`"));
                    return Err(());
                }
            }
            p.end_statement()
        })?;
        self.end_statement()?;
        Ok(g)
    }

    fn scope(&mut self) -> Res<Scope> {
        let (w, span) = self.word("a scope")?;
        match Scope::ALL.into_iter().find(|s| s.as_str() == w) {
            Some(s) => Ok(s),
            None => {
                self.error(D::UnknownKeyword, span, format!("unknown scope `{w}` (full, notes, rhythm, sound)"));
                Err(())
            }
        }
    }

    fn qubit(&mut self, head: SourceSpan, index: usize) -> Res<MusicalQubit> {
        let (id, _) = self.ident("qubit id")?;
        let (instrument, _) = self.string("an instrument name")?;
        self.lbrace()?;
        self.map.insert(Locus::Qubit(index), self.span_from(head));
        self.end_statement()?;
        let mut z = None;
        let mut x = None;
        let mut q = MusicalQubit::new(&id, &instrument, ["", ""], ["", ""]);
        let mut seen_phases = false;
        let mut seen_directive = false;
        self.body("the qubit", |p, kw, span| {
            match kw.as_str() {
                "z" | "x" => {
                    let (a, _) = p.string("an eigenstate label")?;
                    let (b, _) = p.string("an eigenstate label")?;
                    let slot = if kw == "z" { &mut z } else { &mut x };
                    if slot.replace([a, b]).is_some() {
                        p.error(D::DuplicateClause, span, format!("`{kw}` labels given twice"));
                    }
                }
                "phases" => {
                    let lo = p.angle()?;
                    let hi = p.angle()?;
                    if std::mem::replace(&mut seen_phases, true) {
                        p.error(D::DuplicateClause, span, "phase range given twice");
                    }
                    q.phase_range = (lo, hi);
                }
                "directive" => {
                    let (d, _) = p.string("directive text")?;
                    if std::mem::replace(&mut seen_directive, true) {
                        p.error(D::DuplicateClause, span, "directive given twice");
                    }
                    q.directive = d;
                }
                "path" => {
                    let (t, _) = p.string("a path hint")?;
                    q.paths.push(t);
                }
                other => {
                    p.error(D::UnknownKeyword, span, format!("unknown qubit entry `{other}`"));
                    return Err(());
                }
            }
            p.end_statement()
        })?;
        self.end_statement()?;
        match (z, x) {
            (Some(z), Some(x)) => {
                q.z_labels = z;
                q.x_labels = x;
            }
            // the block is already consumed, so report without triggering recovery
            _ => self.error(D::MissingClause, head, format!("qubit `{id}` needs both `z` and `x` labels")),
        }
        Ok(q)
    }

    fn entangle(&mut self, head: SourceSpan, index: usize) -> Res<EntanglementSpec> {
        let (id, _) = self.ident("entanglement id")?;
        let (a, _) = self.ident("qubit id")?;
        let (b, _) = self.ident("qubit id")?;
        let (g, gspan) = self.word("an identification gate (identity, H, matrix, relation)")?;
        let gate = match g.as_str() {
            "identity" | "id" => Identification::Identity,
            "H" => Identification::Hadamard,
            "matrix" => Identification::Matrix(self.matrix()?),
            "relation" => Identification::Relation(self.ident("relation name")?.0),
            other => {
                self.error(D::UnknownKeyword, gspan, format!("unknown identification gate `{other}`"));
                return Err(());
            }
        };
        let description = match self.peek().tok {
            Tok::Str(_) => self.string("a description")?.0,
            _ => String::new(),
        };
        self.map.insert(Locus::Entanglement(index), self.span_from(head));
        self.end_statement()?;
        Ok(EntanglementSpec { id, pair: (a, b), gate, description })
    }

    fn movement(&mut self, head: SourceSpan, index: usize) -> Res<Movement> {
        let (id, _) = self.ident("movement id")?;
        self.lbrace()?;
        self.map.insert(Locus::Movement(index), self.span_from(head));
        self.end_statement()?;
        let mut items = Vec::new();
        let mut measures = 0u32;
        self.body("the movement", |p, kw, span| {
            let item = match kw.as_str() {
                "blob" => Item::Blob(p.blob()?),
                "link" => Item::Link(p.link()?),
                "measure" => {
                    measures += 1;
                    Item::Measure(p.measure(&id, measures, span)?)
                }
                other => {
                    p.error(D::UnknownKeyword, span, format!("unknown movement entry `{other}`"));
                    return Err(());
                }
            };
            p.map.insert(Locus::Item(index, items.len()), p.span_from(span));
            items.push(item);
            p.end_statement()
        })?;
        self.end_statement()?;
        Ok(Movement { id, items })
    }

    fn blob(&mut self) -> Res<Blob> {
        let (id, _) = self.ident("blob id")?;
        let (qubit, _) = self.ident("qubit id")?;
        let (kind, kspan) = self.word("`notes`, `var`, or `abstract`")?;
        let content = match kind.as_str() {
            "notes" => {
                let mut notes = Vec::new();
                while self.at_clause() {
                    let (w, span) = self.word("a note")?;
                    match parse_note(&w) {
                        Some(n) => notes.push(n),
                        None => {
                            self.error(D::BadNumber, span, format!("`{w}` is not a note (pitch:duration, e.g. `-3:1/2`)"));
                            return Err(());
                        }
                    }
                }
                BlobContent::Fragment(Fragment(notes))
            }
            "var" => BlobContent::Variable(self.ident("variable name")?.0),
            "abstract" => BlobContent::Abstract(self.string("a description")?.0),
            other => {
                self.error(D::UnknownKeyword, kspan, format!("unknown blob content `{other}`"));
                return Err(());
            }
        };
        Ok(Blob { id, qubit, content })
    }

    fn endpoint(&mut self) -> Res<Endpoint> {
        let (w, span) = self.word("a link endpoint")?;
        if let Some(ev) = wrapped(&w, "outcome") {
            if is_ident(ev) {
                return Ok(Endpoint::Outcome(ev.to_string()));
            }
        } else if let Some((q, b)) = w.split_once('.') {
            if is_ident(q) && is_ident(b) {
                return Ok(Endpoint::Qubit { qubit: q.into(), blob: Some(b.into()) });
            }
        } else if is_ident(&w) {
            return Ok(Endpoint::qubit(&w));
        }
        self.error(D::UnexpectedToken, span, format!("`{w}` is not an endpoint (q, q.blob, or outcome(event))"));
        Err(())
    }

    fn gate_kind(&mut self) -> Res<GateKind> {
        let (w, span) = self.word("a gate")?;
        let kind = match w.as_str() {
            "id" => GateKind::Identity,
            "H" => GateKind::Hadamard,
            _ => {
                if let Some(n) = wrapped(&w, "sharp") {
                    match n.parse::<i32>() {
                        Ok(0) => {
                            self.warn(D::SharpZeroNormalised, span, "sharp(0) is the identity gate");
                            GateKind::Identity
                        }
                        Ok(n) => GateKind::Sharp(n),
                        Err(_) => {
                            self.error(D::BadNumber, span, format!("`{n}` is not a semitone count"));
                            return Err(());
                        }
                    }
                } else if let Some(v) = wrapped(&w, "var").filter(|v| is_ident(v)) {
                    GateKind::Variable(v.into())
                } else if let Some(r) = wrapped(&w, "rel").filter(|r| is_ident(r)) {
                    GateKind::Custom(r.into())
                } else if is_ident(&w) {
                    GateKind::Custom(w)
                } else {
                    self.error(D::UnexpectedToken, span, format!("`{w}` is not a gate"));
                    return Err(());
                }
            }
        };
        Ok(kind)
    }

    fn link(&mut self) -> Res<SamenessLink> {
        let from = self.endpoint()?;
        self.keyword("->")?;
        let to = self.endpoint()?;
        let mut kind = None;
        let mut scope = None;
        let mut gate = None;
        let mut lead = None;
        let mut wire = None;
        while self.at_clause() {
            let (clause, span) = self.word("a link clause")?;
            let dup = match clause.as_str() {
                "kind" => {
                    let (k, _) = self.ident("sameness kind")?;
                    kind.replace(SamenessKind::from_name(&k)).is_some()
                }
                "scope" => {
                    let s = self.scope()?;
                    scope.replace(s).is_some()
                }
                "gate" => {
                    let g = self.gate_kind()?;
                    gate.replace(g).is_some()
                }
                "lead" => {
                    let (q, _) = self.ident("qubit id")?;
                    lead.replace(q).is_some()
                }
                "wire" => {
                    let (w, wspan) = self.word("`quantum` or `classical`")?;
                    let k = match w.as_str() {
                        "quantum" => WireKind::Quantum,
                        "classical" => WireKind::Classical,
                        _ => {
                            self.error(D::UnknownKeyword, wspan, format!("unknown wire kind `{w}`"));
                            return Err(());
                        }
                    };
                    wire.replace(k).is_some()
                }
                other => {
                    self.error(D::UnknownKeyword, span, format!("unknown link clause `{other}`"));
                    return Err(());
                }
            };
            if dup {
                self.error(D::DuplicateClause, span, format!("`{clause}` given twice"));
            }
        }
        let wire = wire.unwrap_or_else(|| SamenessLink::natural_wire(&from, &to));
        Ok(SamenessLink {
            from,
            to,
            kind: kind.unwrap_or_default(),
            scope: scope.unwrap_or_default(),
            gate: Gate { kind: gate.unwrap_or(GateKind::Identity), lead },
            wire,
        })
    }

    fn measure(&mut self, movement: &str, ordinal: u32, head: SourceSpan) -> Res<MeasurementEvent> {
        let (measured, _) = self.ident("qubit id")?;
        self.keyword("basis")?;
        let (b, bspan) = self.word("`green`, `red`, or `open`")?;
        let basis = match b.as_str() {
            "green" => BasisChoice::Scored(Colour::Green),
            "red" => BasisChoice::Scored(Colour::Red),
            "open" => BasisChoice::Open,
            _ => {
                self.error(D::UnknownKeyword, bspan, format!("unknown basis colour `{b}`"));
                return Err(());
            }
        };
        self.keyword("->")?;
        let (influenced, _) = self.ident("qubit id")?;
        let mut via = None;
        let mut cue = None;
        let mut phase = None;
        let mut id = None;
        while self.at_clause() {
            let (clause, span) = self.word("a measure clause")?;
            let dup = match clause.as_str() {
                "via" => {
                    let (e, _) = self.ident("entanglement id")?;
                    via.replace(e).is_some()
                }
                "cue" => {
                    let (n, _): (u32, _) = self.number("cue number")?;
                    cue.replace(n).is_some()
                }
                "phase" => {
                    let a = self.angle()?;
                    phase.replace(a).is_some()
                }
                "id" => {
                    let (e, _) = self.ident("event id")?;
                    id.replace(e).is_some()
                }
                other => {
                    self.error(D::UnknownKeyword, span, format!("unknown measure clause `{other}`"));
                    return Err(());
                }
            };
            if dup {
                self.error(D::DuplicateClause, span, format!("`{clause}` given twice"));
            }
        }
        if measured == influenced {
            let span = self.span_from(head);
            self.error(D::SameQubit, span, "measured and influenced qubit must differ");
        }
        let cue = cue.unwrap_or(ordinal);
        Ok(MeasurementEvent {
            id: id.unwrap_or_else(|| MeasurementEvent::default_id(movement, cue)),
            measured,
            basis,
            influenced,
            entanglement: via,
            cue,
            phase,
        })
    }
}

fn parse_note(w: &str) -> Option<Note> {
    let (p, d) = w.split_once(':')?;
    let pitch: i32 = p.parse().ok()?;
    let duration = match d.split_once('/') {
        Some((n, m)) => {
            let (n, m): (u32, u32) = (n.parse().ok()?, m.parse().ok()?);
            if m == 0 {
                return None;
            }
            Ratio::new(n, m)
        }
        None => Ratio::from_integer(d.parse().ok()?),
    };
    Some(Note { pitch, duration })
}

impl SourceMap {
    fn insert(&mut self, locus: Locus, span: SourceSpan) {
        self.spans.entry(locus).or_insert(span);
    }
}
