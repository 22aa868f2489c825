//! Score model: musical qubits, glossary, movements, and what links them.
//!
//! Only the entanglement's identification gate and the measurement events
//! drive simulation. Sameness kinds, blobs, and link gates travel to the
//! performers as metadata.

mod check;
mod compile;
mod fixture;

use std::collections::BTreeMap;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::sim::Gate1;
use crate::zx::{Colour, WireKind};

pub use check::{check_score, Diagnostic, DiagnosticCode, Locus, Severity};
pub use compile::{to_diagram, to_diagram_with, CompileError};
pub use fixture::bell_score_fixture;

pub type QubitId = String;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Score {
    pub title: String,
    pub glossary: MetaGlossary,
    pub qubits: Vec<MusicalQubit>,
    pub entanglements: Vec<EntanglementSpec>,
    pub movements: Vec<Movement>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Role {
    Performer,
    ThirdParty,
    Audience,
}

impl Role {
    pub fn as_str(self) -> &'static str {
        match self {
            Role::Performer => "performer",
            Role::ThirdParty => "third-party",
            Role::Audience => "audience",
        }
    }

    pub fn parse(s: &str) -> Option<Role> {
        [Role::Performer, Role::ThirdParty, Role::Audience].into_iter().find(|r| r.as_str() == s)
    }
}

/// Who decides the outcome of a triggered measurement.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutcomeMode {
    /// Sampled from the session's seeded stream.
    #[default]
    Seeded,
    /// Supplied with the trigger by whoever holds the decision.
    Manual,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct MetaGlossary {
    /// Roles allowed to choose, trigger, and advance. Empty means unset.
    pub policy: Vec<Role>,
    pub outcomes: OutcomeMode,
    /// When set, every measurement's colour is left to the observer.
    pub open_colours: bool,
    pub sameness: BTreeMap<String, SamenessDef>,
    pub relations: BTreeMap<String, Relation>,
    pub movement_notes: BTreeMap<String, String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SamenessDef {
    pub description: String,
    pub scope: Scope,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Relation {
    pub description: String,
    pub unitary: Option<Gate1>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scope {
    #[default]
    Full,
    Notes,
    Rhythm,
    Sound,
}

impl Scope {
    pub const ALL: [Scope; 4] = [Scope::Full, Scope::Notes, Scope::Rhythm, Scope::Sound];

    pub fn as_str(self) -> &'static str {
        match self {
            Scope::Full => "full",
            Scope::Notes => "notes",
            Scope::Rhythm => "rhythm",
            Scope::Sound => "sound",
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SamenessKind {
    #[default]
    Identical,
    Alike,
    InspiredBy,
    Anticipates,
    Follows,
    Custom(String),
}

impl SamenessKind {
    pub fn name(&self) -> &str {
        match self {
            SamenessKind::Identical => "identical",
            SamenessKind::Alike => "alike",
            SamenessKind::InspiredBy => "inspired-by",
            SamenessKind::Anticipates => "anticipates",
            SamenessKind::Follows => "follows",
            SamenessKind::Custom(n) => n,
        }
    }

    pub fn from_name(s: &str) -> SamenessKind {
        match s {
            "identical" => SamenessKind::Identical,
            "alike" => SamenessKind::Alike,
            "inspired-by" => SamenessKind::InspiredBy,
            "anticipates" => SamenessKind::Anticipates,
            "follows" => SamenessKind::Follows,
            other => SamenessKind::Custom(other.to_string()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MusicalQubit {
    pub id: QubitId,
    pub instrument: String,
    /// Outcome labels of the green (Z) measurement.
    pub z_labels: [String; 2],
    /// Outcome labels of the red (X) measurement.
    pub x_labels: [String; 2],
    pub phase_range: (f64, f64),
    /// Instruction text; `{label}` is replaced by the eigenstate label.
    pub directive: String,
    /// Hints on the ways between eigenstates, passed along with instructions.
    pub paths: Vec<String>,
}

pub const DEFAULT_DIRECTIVE: &str = "play {label}";

impl MusicalQubit {
    pub fn new(id: &str, instrument: &str, z: [&str; 2], x: [&str; 2]) -> Self {
        MusicalQubit {
            id: id.into(),
            instrument: instrument.into(),
            z_labels: z.map(String::from),
            x_labels: x.map(String::from),
            phase_range: (0.0, std::f64::consts::TAU),
            directive: DEFAULT_DIRECTIVE.into(),
            paths: Vec::new(),
        }
    }

    pub fn label(&self, colour: Colour, outcome: u8) -> &str {
        let labels = match colour {
            Colour::Green => &self.z_labels,
            Colour::Red => &self.x_labels,
        };
        &labels[usize::from(outcome.min(1))]
    }

    pub fn directive_for(&self, colour: Colour, outcome: u8) -> String {
        self.directive.replace("{label}", self.label(colour, outcome))
    }

    pub fn phase_allowed(&self, phase: f64) -> bool {
        let (lo, hi) = self.phase_range;
        phase >= lo - 1e-12 && phase <= hi + 1e-12
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "kebab-case")]
pub enum GateKind {
    Identity,
    /// Transpose by `n` semitones; `n ≠ 0`.
    Sharp(i32),
    Hadamard,
    Custom(String),
    Variable(String),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Gate {
    pub kind: GateKind,
    /// Leader of a tilted gate.
    pub lead: Option<QubitId>,
}

impl Gate {
    pub fn identity() -> Self {
        Gate { kind: GateKind::Identity, lead: None }
    }
}

impl Default for Gate {
    fn default() -> Self {
        Gate::identity()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Endpoint {
    Qubit { qubit: QubitId, blob: Option<String> },
    /// The classical outcome of a measurement event.
    Outcome(String),
}

impl Endpoint {
    pub fn qubit(q: &str) -> Self {
        Endpoint::Qubit { qubit: q.into(), blob: None }
    }

    pub fn qubit_id(&self) -> Option<&str> {
        match self {
            Endpoint::Qubit { qubit, .. } => Some(qubit),
            Endpoint::Outcome(_) => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SamenessLink {
    pub from: Endpoint,
    pub to: Endpoint,
    pub kind: SamenessKind,
    pub scope: Scope,
    pub gate: Gate,
    pub wire: WireKind,
}

impl SamenessLink {
    /// The wire kind a link gets when none is written: classical iff an
    /// endpoint is a measurement outcome.
    pub fn natural_wire(from: &Endpoint, to: &Endpoint) -> WireKind {
        if matches!(from, Endpoint::Outcome(_)) || matches!(to, Endpoint::Outcome(_)) {
            WireKind::Classical
        } else {
            WireKind::Quantum
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Note {
    /// Semitones from middle C.
    pub pitch: i32,
    /// Beats.
    pub duration: Ratio<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fragment(pub Vec<Note>);

impl Fragment {
    /// What a `sharp(n)` gate does to a fragment.
    pub fn transpose(&self, n: i32) -> Fragment {
        Fragment(self.0.iter().map(|note| Note { pitch: note.pitch + n, ..*note }).collect())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BlobContent {
    Fragment(Fragment),
    Variable(String),
    Abstract(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Blob {
    pub id: String,
    pub qubit: QubitId,
    pub content: BlobContent,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BasisChoice {
    Scored(Colour),
    Open,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeasurementEvent {
    pub id: String,
    pub measured: QubitId,
    pub basis: BasisChoice,
    pub influenced: QubitId,
    /// Entanglement to use; when absent, the one pairing the two qubits.
    pub entanglement: Option<String>,
    pub cue: u32,
    /// Rotates the measurement about the Z axis by this angle.
    pub phase: Option<f64>,
}

impl MeasurementEvent {
    pub fn default_id(movement: &str, cue: u32) -> String {
        format!("{movement}-{cue}")
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Identification {
    Identity,
    Hadamard,
    Matrix(Gate1),
    /// A glossary relation carrying a unitary.
    Relation(String),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EntanglementSpec {
    pub id: String,
    pub pair: (QubitId, QubitId),
    /// Applied to the second qubit of the pair.
    pub gate: Identification,
    pub description: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Item {
    Measure(MeasurementEvent),
    Link(SamenessLink),
    Blob(Blob),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Movement {
    pub id: String,
    pub items: Vec<Item>,
}

impl Movement {
    pub fn events(&self) -> impl Iterator<Item = &MeasurementEvent> {
        self.items.iter().filter_map(|i| match i {
            Item::Measure(e) => Some(e),
            _ => None,
        })
    }

    pub fn links(&self) -> impl Iterator<Item = &SamenessLink> {
        self.items.iter().filter_map(|i| match i {
            Item::Link(l) => Some(l),
            _ => None,
        })
    }

    pub fn blobs(&self) -> impl Iterator<Item = &Blob> {
        self.items.iter().filter_map(|i| match i {
            Item::Blob(b) => Some(b),
            _ => None,
        })
    }
}

impl Score {
    pub fn qubit(&self, id: &str) -> Option<&MusicalQubit> {
        self.qubits.iter().find(|q| q.id == id)
    }

    pub fn qubit_index(&self, id: &str) -> Option<usize> {
        self.qubits.iter().position(|q| q.id == id)
    }

    pub fn entanglement(&self, id: &str) -> Option<&EntanglementSpec> {
        self.entanglements.iter().find(|e| e.id == id)
    }

    /// The entanglement an event runs through: named, or the one whose pair
    /// is exactly the event's two qubits.
    pub fn entanglement_for(&self, e: &MeasurementEvent) -> Option<&EntanglementSpec> {
        match &e.entanglement {
            Some(id) => self.entanglement(id),
            None => self.entanglements.iter().find(|s| {
                let (a, b) = &s.pair;
                (a == &e.measured && b == &e.influenced) || (a == &e.influenced && b == &e.measured)
            }),
        }
    }

    /// The identification unitary of an entanglement, resolving relations.
    pub fn identification_unitary(&self, spec: &EntanglementSpec) -> Option<Gate1> {
        match &spec.gate {
            Identification::Identity => Some(crate::sim::identity_gate()),
            Identification::Hadamard => Some(crate::sim::hadamard_gate()),
            Identification::Matrix(u) => Some(*u),
            Identification::Relation(name) => self.glossary.relations.get(name)?.unitary,
        }
    }

    /// The colours an observer may choose for `e`.
    pub fn allowed_colours(&self, e: &MeasurementEvent) -> Vec<Colour> {
        match (e.basis, self.glossary.open_colours) {
            (BasisChoice::Scored(c), false) => vec![c],
            _ => vec![Colour::Green, Colour::Red],
        }
    }
}
