//! Live performance sessions.
//!
//! A session walks the movements of a checked score. Each measurement event
//! goes through choose-basis, then trigger; the trigger collapses the shared
//! state and produces one instruction per qubit of the entangled pair, the
//! measured one first. Everything that happens is appended to an event log
//! that [`replay`] reproduces from `(score, seed, actions)`.

mod log;
mod simulate;

use std::collections::BTreeMap;
use std::sync::Arc;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use crate::score::{check_score, Diagnostic, MeasurementEvent, OutcomeMode, QubitId, Role, Score};
use crate::sim::{self, MeasurementBasis, Resolve, RngSeed, RngStream, SimError, StateVector};
use crate::zx::Colour;

pub use log::{parse_log_line, LogRecord, Timestamps, LOG_VERSION};
pub use simulate::{simulate, AgreementTally, DrivePolicy, SimulateError, SimulateOptions, SimulateReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    AwaitingChoice,
    AwaitingTrigger,
    /// Nothing left to measure in this movement.
    Collapsed,
    Finished,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum ActionKind {
    ChooseBasis {
        qubit: QubitId,
        colour: Colour,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        phase: Option<f64>,
    },
    /// `outcome` is given in manual mode only.
    Trigger {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        outcome: Option<u8>,
    },
    AdvanceMovement,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ObserverAction {
    pub actor: Role,
    #[serde(flatten)]
    pub kind: ActionKind,
}

impl ObserverAction {
    pub fn choose(actor: Role, qubit: &str, colour: Colour) -> Self {
        ObserverAction { actor, kind: ActionKind::ChooseBasis { qubit: qubit.into(), colour, phase: None } }
    }

    pub fn trigger(actor: Role) -> Self {
        ObserverAction { actor, kind: ActionKind::Trigger { outcome: None } }
    }

    pub fn advance(actor: Role) -> Self {
        ObserverAction { actor, kind: ActionKind::AdvanceMovement }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Instruction {
    pub qubit: QubitId,
    pub instrument: String,
    pub directive: String,
    pub colour: Colour,
    pub outcome: u8,
    pub label: String,
    /// Probability that the qubit is in the named eigenstate right now.
    pub probability: f64,
    pub measured: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub paths: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum Payload {
    ActionAccepted { action: ObserverAction },
    MovementStarted { movement: usize, id: String, reprepared: bool },
    Collapse { event: String, qubit: QubitId, colour: Colour, outcome: u8, label: String, probability: f64 },
    Instruction(Instruction),
    SessionFinished,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SessionEvent {
    pub seq: u64,
    /// Wall-clock milliseconds. Not part of replay comparison.
    pub ts: u64,
    #[serde(flatten)]
    pub payload: Payload,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EngineError {
    #[error("score has {} problem(s); first: {}", .0.len(), .0.first().map(|d| d.to_string()).unwrap_or_default())]
    InvalidScore(Vec<Diagnostic>),
    #[error("{action} is not allowed while {status:?}")]
    IllegalInState { action: &'static str, status: Status },
    #[error("{actor:?} may not act; the glossary allows {policy:?}")]
    UnauthorizedActor { actor: Role, policy: Vec<Role> },
    #[error("this measurement is on `{expected}`, not `{got}`")]
    WrongQubit { expected: QubitId, got: QubitId },
    #[error("the score fixes the colour of this measurement to {0:?}")]
    ColourNotAllowed(Colour),
    #[error("phase {phase} is outside the range [{lo}, {hi}] of `{qubit}`")]
    PhaseOutOfRange { qubit: QubitId, phase: f64, lo: f64, hi: f64 },
    #[error("the score fixes the phase of this measurement")]
    PhaseFixed,
    #[error("a phase does not change a green measurement")]
    PhaseOnGreen,
    #[error("outcomes are decided by hand; the trigger must name one")]
    OutcomeRequired,
    #[error("outcomes are seeded; the trigger must not name one")]
    OutcomeNotManual,
    #[error("outcome {0} has probability zero")]
    ImpossibleOutcome(u8),
    #[error(transparent)]
    Sim(#[from] SimError),
}

impl EngineError {
    /// Stable identifier for wire messages.
    pub fn code(&self) -> &'static str {
        match self {
            EngineError::InvalidScore(_) => "invalid-score",
            EngineError::IllegalInState { .. } => "illegal-in-state",
            EngineError::UnauthorizedActor { .. } => "unauthorized-actor",
            EngineError::WrongQubit { .. } => "wrong-qubit",
            EngineError::ColourNotAllowed(_) => "colour-not-allowed",
            EngineError::PhaseOutOfRange { .. } => "phase-out-of-range",
            EngineError::PhaseFixed => "phase-fixed",
            EngineError::PhaseOnGreen => "phase-on-green",
            EngineError::OutcomeRequired => "outcome-required",
            EngineError::OutcomeNotManual => "outcome-not-manual",
            EngineError::ImpossibleOutcome(_) => "impossible-outcome",
            EngineError::Sim(_) => "simulation",
        }
    }
}

/// What `apply_action` would accept right now, minus the actor (any role in
/// the glossary policy).
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum ActionTemplate {
    /// `phase_range` is `None` when the score fixes the phase (or the colour
    /// is green, where a phase changes nothing and is not accepted).
    ChooseBasis { qubit: QubitId, colour: Colour, phase_range: Option<(f64, f64)> },
    /// `outcomes` lists the possible outcomes in manual mode; `None` when seeded.
    Trigger { outcomes: Option<Vec<u8>> },
    AdvanceMovement,
}

impl ActionTemplate {
    pub fn accepts(&self, kind: &ActionKind) -> bool {
        match (self, kind) {
            (ActionTemplate::ChooseBasis { qubit, colour, phase_range }, ActionKind::ChooseBasis { qubit: q, colour: c, phase }) => {
                qubit == q
                    && colour == c
                    && match (phase_range, phase) {
                        (_, None) => true,
                        (Some((lo, hi)), Some(p)) => *p >= lo - 1e-12 && *p <= hi + 1e-12,
                        (None, Some(_)) => false,
                    }
            }
            (ActionTemplate::Trigger { outcomes }, ActionKind::Trigger { outcome }) => match (outcomes, outcome) {
                (None, None) => true,
                (Some(os), Some(o)) => os.contains(o),
                _ => false,
            },
            (ActionTemplate::AdvanceMovement, ActionKind::AdvanceMovement) => true,
            _ => false,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SessionOptions {
    /// Prepare fresh Bell pairs at the start of every movement.
    pub reprepare: bool,
}

impl Default for SessionOptions {
    fn default() -> Self {
        SessionOptions { reprepare: true }
    }
}

pub type Clock = Arc<dyn Fn() -> u64 + Send + Sync>;

pub fn wall_clock() -> Clock {
    Arc::new(|| SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_millis() as u64))
}

/// Always 0. Used where outputs must be byte-identical.
pub fn zero_clock() -> Clock {
    Arc::new(|| 0)
}

/// Directive text per (qubit, colour, outcome), total over the score.
#[derive(Clone, Debug, PartialEq)]
pub struct InstructionMap {
    map: BTreeMap<(QubitId, u8, u8), String>,
}

fn colour_index(c: Colour) -> u8 {
    match c {
        Colour::Green => 0,
        Colour::Red => 1,
    }
}

impl InstructionMap {
    pub fn new(score: &Score) -> Self {
        let mut map = BTreeMap::new();
        for q in &score.qubits {
            for colour in [Colour::Green, Colour::Red] {
                for outcome in 0..2 {
                    map.insert((q.id.clone(), colour_index(colour), outcome), q.directive_for(colour, outcome));
                }
            }
        }
        InstructionMap { map }
    }

    pub fn get(&self, qubit: &str, colour: Colour, outcome: u8) -> Option<&str> {
        self.map.get(&(qubit.to_string(), colour_index(colour), outcome)).map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }
}

/// Basis measured for `colour` with an optional phase. A phase turns the red
/// basis around the Z axis; green eigenstates do not move.
pub fn basis_for(colour: Colour, phase: Option<f64>) -> MeasurementBasis {
    match (colour, phase) {
        (Colour::Red, Some(p)) if p != 0.0 => MeasurementBasis::equatorial(p),
        _ => MeasurementBasis::of_colour(colour),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PendingMeasurement {
    pub event: String,
    pub measured: QubitId,
    pub influenced: QubitId,
    pub colours: Vec<Colour>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub chosen: Option<Colour>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub phase: Option<f64>,
}

/// Last instruction per qubit, for displays.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SessionSnapshot {
    pub status: Status,
    pub seed: RngSeed,
    pub movement: usize,
    pub movement_id: Option<String>,
    pub movements: usize,
    pub pending: Option<PendingMeasurement>,
    pub legal_actions: Vec<ActionTemplate>,
    pub policy: Vec<Role>,
    pub next_seq: u64,
    pub rng_position: u64,
    pub current: BTreeMap<QubitId, Instruction>,
}

pub struct Session {
    score: Arc<Score>,
    seed: RngSeed,
    options: SessionOptions,
    clock: Clock,
    rng: RngStream,
    state: StateVector,
    movement: usize,
    /// Measurement events of the current movement, in cue order.
    queue: Vec<MeasurementEvent>,
    cursor: usize,
    chosen: Option<(Colour, Option<f64>)>,
    status: Status,
    log: Vec<SessionEvent>,
    actions: Vec<ObserverAction>,
    current: BTreeMap<QubitId, Instruction>,
    instructions: InstructionMap,
}

impl std::fmt::Debug for Session {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Session")
            .field("title", &self.score.title)
            .field("seed", &self.seed)
            .field("status", &self.status)
            .field("movement", &self.movement)
            .field("events", &self.log.len())
            .finish()
    }
}

/// Starts a session with the wall clock and default options.
pub fn create_session(score: Score, seed: RngSeed) -> Result<Session, EngineError> {
    Session::new(Arc::new(score), seed, SessionOptions::default(), wall_clock())
}

/// Rebuilds a session from its inputs. Any rejected action is a divergence.
pub fn replay(
    score: Arc<Score>,
    seed: RngSeed,
    options: SessionOptions,
    clock: Clock,
    actions: &[ObserverAction],
) -> Result<Session, ReplayError> {
    let mut s = Session::new(score, seed, options, clock).map_err(ReplayError::Create)?;
    for (index, a) in actions.iter().enumerate() {
        s.apply_action(a.clone()).map_err(|error| ReplayError::Rejected { index, error })?;
    }
    Ok(s)
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ReplayError {
    #[error("cannot start the session: {0}")]
    Create(EngineError),
    #[error("action {index} was rejected on replay: {error}")]
    Rejected { index: usize, error: EngineError },
    #[error("replayed log differs from the recording at sequence number {seq}")]
    Divergence { seq: u64 },
}

impl Session {
    pub fn new(score: Arc<Score>, seed: RngSeed, options: SessionOptions, clock: Clock) -> Result<Session, EngineError> {
        let diags = check_score(&score);
        if !diags.is_empty() {
            return Err(EngineError::InvalidScore(diags));
        }
        let state = prepare(&score)?;
        let mut s = Session {
            instructions: InstructionMap::new(&score),
            score,
            seed,
            options,
            clock,
            rng: RngStream::new(seed),
            state,
            movement: 0,
            queue: Vec::new(),
            cursor: 0,
            chosen: None,
            status: Status::AwaitingChoice,
            log: Vec::new(),
            actions: Vec::new(),
            current: BTreeMap::new(),
        };
        s.start_movement(0, false)?;
        Ok(s)
    }

    pub fn score(&self) -> &Score {
        &self.score
    }

    pub fn seed(&self) -> RngSeed {
        self.seed
    }

    pub fn options(&self) -> SessionOptions {
        self.options
    }

    pub fn status(&self) -> Status {
        self.status
    }

    pub fn movement(&self) -> usize {
        self.movement
    }

    /// Movements not yet finished, the current one included.
    pub fn pending_movements(&self) -> usize {
        match self.status {
            Status::Finished => 0,
            _ => self.score.movements.len() - self.movement,
        }
    }

    pub fn log(&self) -> &[SessionEvent] {
        &self.log
    }

    /// Accepted actions, in order. Feeding them to [`replay`] rebuilds this session.
    pub fn actions(&self) -> &[ObserverAction] {
        &self.actions
    }

    pub fn state(&self) -> &StateVector {
        &self.state
    }

    pub fn instruction_map(&self) -> &InstructionMap {
        &self.instructions
    }

    pub fn pending_event(&self) -> Option<&MeasurementEvent> {
        match self.status {
            Status::AwaitingChoice | Status::AwaitingTrigger => self.queue.get(self.cursor),
            _ => None,
        }
    }

    pub fn legal_actions(&self) -> Vec<ActionTemplate> {
        match self.status {
            Status::Finished => Vec::new(),
            Status::Collapsed => vec![ActionTemplate::AdvanceMovement],
            Status::AwaitingChoice => {
                let e = &self.queue[self.cursor];
                let q = self.score.qubit(&e.measured).expect("checked");
                self.score
                    .allowed_colours(e)
                    .into_iter()
                    .map(|colour| ActionTemplate::ChooseBasis {
                        qubit: e.measured.clone(),
                        colour,
                        phase_range: (colour == Colour::Red && e.phase.is_none()).then_some(q.phase_range),
                    })
                    .collect()
            }
            Status::AwaitingTrigger => {
                let outcomes = match self.score.glossary.outcomes {
                    OutcomeMode::Seeded => None,
                    OutcomeMode::Manual => {
                        let (colour, phase) = self.chosen.expect("chosen before trigger");
                        let basis = basis_for(colour, phase);
                        let qi = self.qubit_index(&self.queue[self.cursor].measured);
                        Some(
                            (0..2u8)
                                .filter(|&k| self.state.probability(qi, basis.state(k.into())).unwrap_or(0.0) > 0.0)
                                .collect(),
                        )
                    }
                };
                vec![ActionTemplate::Trigger { outcomes }]
            }
        }
    }

    /// Applies one action. On error nothing changes, the log included.
    pub fn apply_action(&mut self, action: ObserverAction) -> Result<Vec<SessionEvent>, EngineError> {
        let policy = &self.score.glossary.policy;
        if !policy.contains(&action.actor) {
            return Err(EngineError::UnauthorizedActor { actor: action.actor, policy: policy.clone() });
        }
        let start = self.log.len();
        match &action.kind {
            ActionKind::ChooseBasis { qubit, colour, phase } => {
                self.require(Status::AwaitingChoice, "choose-basis")?;
                let e = &self.queue[self.cursor];
                if &e.measured != qubit {
                    return Err(EngineError::WrongQubit { expected: e.measured.clone(), got: qubit.clone() });
                }
                if !self.score.allowed_colours(e).contains(colour) {
                    return Err(EngineError::ColourNotAllowed(self.score.allowed_colours(e)[0]));
                }
                let q = self.score.qubit(qubit).expect("checked");
                let phase = match (phase, e.phase) {
                    (Some(_), Some(_)) => return Err(EngineError::PhaseFixed),
                    (Some(_), None) if *colour == Colour::Green => return Err(EngineError::PhaseOnGreen),
                    (Some(p), None) => {
                        if !q.phase_allowed(*p) {
                            let (lo, hi) = q.phase_range;
                            return Err(EngineError::PhaseOutOfRange { qubit: q.id.clone(), phase: *p, lo, hi });
                        }
                        Some(*p)
                    }
                    (None, scored) => scored,
                };
                self.chosen = Some((*colour, phase));
                self.status = Status::AwaitingTrigger;
                self.push(Payload::ActionAccepted { action: action.clone() });
            }
            ActionKind::Trigger { outcome } => {
                self.require(Status::AwaitingTrigger, "trigger")?;
                let resolve_manual = match (self.score.glossary.outcomes, outcome) {
                    (OutcomeMode::Seeded, None) => None,
                    (OutcomeMode::Seeded, Some(_)) => return Err(EngineError::OutcomeNotManual),
                    (OutcomeMode::Manual, None) => return Err(EngineError::OutcomeRequired),
                    (OutcomeMode::Manual, Some(o)) => Some(*o),
                };
                self.collapse(&action, resolve_manual)?;
            }
            ActionKind::AdvanceMovement => {
                self.require(Status::Collapsed, "advance-movement")?;
                self.push(Payload::ActionAccepted { action: action.clone() });
                if self.movement + 1 < self.score.movements.len() {
                    self.start_movement(self.movement + 1, self.options.reprepare)?;
                } else {
                    self.status = Status::Finished;
                    self.push(Payload::SessionFinished);
                }
            }
        }
        self.actions.push(action);
        Ok(self.log[start..].to_vec())
    }

    pub fn snapshot(&self) -> SessionSnapshot {
        let pending = self.pending_event().map(|e| PendingMeasurement {
            event: e.id.clone(),
            measured: e.measured.clone(),
            influenced: e.influenced.clone(),
            colours: self.score.allowed_colours(e),
            chosen: self.chosen.map(|c| c.0),
            phase: self.chosen.and_then(|c| c.1).or(e.phase),
        });
        SessionSnapshot {
            status: self.status,
            seed: self.seed,
            movement: self.movement,
            movement_id: self.score.movements.get(self.movement).map(|m| m.id.clone()),
            movements: self.score.movements.len(),
            pending,
            legal_actions: self.legal_actions(),
            policy: self.score.glossary.policy.clone(),
            next_seq: self.log.len() as u64,
            rng_position: self.rng.position(),
            current: self.current.clone(),
        }
    }

    /// Replays this session's actions and compares the logs, timestamps aside.
    pub fn verify_replay(&self) -> Result<(), ReplayError> {
        let again = replay(self.score.clone(), self.seed, self.options, zero_clock(), &self.actions)?;
        let ours = self.log_lines(Timestamps::Exclude);
        let theirs = again.log_lines(Timestamps::Exclude);
        for (k, (a, b)) in ours.iter().zip(&theirs).enumerate() {
            if a != b {
                return Err(ReplayError::Divergence { seq: k as u64 });
            }
        }
        if ours.len() != theirs.len() {
            return Err(ReplayError::Divergence { seq: ours.len().min(theirs.len()) as u64 });
        }
        Ok(())
    }

    fn require(&self, status: Status, action: &'static str) -> Result<(), EngineError> {
        if self.status == status {
            Ok(())
        } else {
            Err(EngineError::IllegalInState { action, status: self.status })
        }
    }

    fn push(&mut self, payload: Payload) {
        let seq = self.log.len() as u64;
        self.log.push(SessionEvent { seq, ts: (self.clock)(), payload });
    }

    fn qubit_index(&self, id: &str) -> usize {
        self.score.qubit_index(id).expect("checked")
    }

    fn start_movement(&mut self, index: usize, reprepare: bool) -> Result<(), EngineError> {
        if reprepare {
            self.state = prepare(&self.score)?;
        }
        let m = &self.score.movements[index];
        let mut queue: Vec<MeasurementEvent> = m.events().cloned().collect();
        queue.sort_by_key(|e| e.cue);
        self.movement = index;
        self.queue = queue;
        self.cursor = 0;
        self.chosen = None;
        self.status = if self.queue.is_empty() { Status::Collapsed } else { Status::AwaitingChoice };
        let id = m.id.clone();
        self.push(Payload::MovementStarted { movement: index, id, reprepared: reprepare });
        Ok(())
    }

    fn collapse(&mut self, action: &ObserverAction, manual: Option<u8>) -> Result<(), EngineError> {
        let e = self.queue[self.cursor].clone();
        let (colour, phase) = self.chosen.expect("chosen before trigger");
        let basis = basis_for(colour, phase);
        let mi = self.qubit_index(&e.measured);
        let pi = self.qubit_index(&e.influenced);
        // a trial draw on a clone keeps the stream untouched if anything fails
        let mut rng = self.rng.clone();
        let resolve = match manual {
            Some(o) if o > 1 => return Err(EngineError::ImpossibleOutcome(o)),
            Some(o) => Resolve::Forced(o),
            None => Resolve::Sample(&mut rng),
        };
        let (outcome, post) = match sim::measure(&self.state, mi, &basis, resolve) {
            Err(SimError::ImpossibleOutcome) => return Err(EngineError::ImpossibleOutcome(manual.unwrap_or(0))),
            other => other?,
        };
        let partner = self.read_partner(&post, pi, colour)?;

        self.rng = rng;
        self.state = post;
        self.push(Payload::ActionAccepted { action: action.clone() });
        let mq = self.score.qubit(&e.measured).expect("checked").clone();
        let label = mq.label(colour, outcome.index).to_string();
        self.push(Payload::Collapse {
            event: e.id.clone(),
            qubit: mq.id.clone(),
            colour,
            outcome: outcome.index,
            label: label.clone(),
            probability: outcome.probability,
        });
        let lead = Instruction {
            qubit: mq.id.clone(),
            instrument: mq.instrument.clone(),
            directive: self.instructions.get(&mq.id, colour, outcome.index).expect("total").to_string(),
            colour,
            outcome: outcome.index,
            label,
            probability: 1.0,
            measured: true,
            paths: mq.paths.clone(),
        };
        for ins in [lead, partner] {
            self.current.insert(ins.qubit.clone(), ins.clone());
            self.push(Payload::Instruction(ins));
        }

        self.chosen = None;
        self.cursor += 1;
        self.status = if self.cursor < self.queue.len() { Status::AwaitingChoice } else { Status::Collapsed };
        Ok(())
    }

    /// The partner's instruction, read from the post-collapse state: the
    /// eigenstate of the measured colour if it is in one, else of the other
    /// colour, else the likelier outcome of the measured colour.
    fn read_partner(&self, post: &StateVector, pi: usize, colour: Colour) -> Result<Instruction, EngineError> {
        let q = &self.score.qubits[pi];
        let probs = |c: Colour| -> Result<[f64; 2], SimError> {
            let b = MeasurementBasis::of_colour(c);
            Ok([post.probability(pi, b.state(0))?, post.probability(pi, b.state(1))?])
        };
        let other = match colour {
            Colour::Green => Colour::Red,
            Colour::Red => Colour::Green,
        };
        let same = probs(colour)?;
        let cross = probs(other)?;
        const SURE: f64 = 1.0 - 1e-9;
        let (c, k, p) = if let Some(k) = same.iter().position(|&p| p >= SURE) {
            (colour, k, same[k])
        } else if let Some(k) = cross.iter().position(|&p| p >= SURE) {
            (other, k, cross[k])
        } else {
            let k = usize::from(same[1] > same[0]);
            (colour, k, same[k])
        };
        let k = k as u8;
        Ok(Instruction {
            qubit: q.id.clone(),
            instrument: q.instrument.clone(),
            directive: self.instructions.get(&q.id, c, k).expect("total").to_string(),
            colour: c,
            outcome: k,
            label: q.label(c, k).to_string(),
            probability: p.min(1.0),
            measured: false,
            paths: q.paths.clone(),
        })
    }
}

/// All qubits at |0⟩, then each entangled pair `(a, b)` becomes
/// `(I ⊗ U)(|00⟩ + |11⟩)/√2` with `U` its identification gate on `b`.
fn prepare(score: &Score) -> Result<StateVector, SimError> {
    let mut state = StateVector::zero(score.qubits.len().max(1))?;
    for spec in &score.entanglements {
        let a = score.qubit_index(&spec.pair.0).expect("checked");
        let b = score.qubit_index(&spec.pair.1).expect("checked");
        let u = score.identification_unitary(spec).expect("checked");
        state = state.apply(a, &sim::hadamard_gate())?.cnot(a, b)?.apply(b, &u)?;
    }
    Ok(state)
}
