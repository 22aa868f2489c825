use super::{check_score, BasisChoice, Diagnostic, MeasurementEvent, Score};
use crate::zx::{gadgets, Colour, Diagram, Phase, WireKind, ZxError};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CompileError {
    #[error("score has {} diagnostic(s)", .0.len())]
    InvalidScore(Vec<Diagnostic>),
    #[error("event `{0}` leaves the colour open; pass one explicitly")]
    OpenColour(String),
    #[error("event `{0}` is not in the score")]
    UnknownEvent(String),
    #[error(transparent)]
    Zx(#[from] ZxError),
}

/// The unfolded diagram of a scored measurement event.
///
/// Outputs are `[classical outcome, influenced qubit]`.
pub fn to_diagram(e: &MeasurementEvent, s: &Score) -> Result<Diagram, CompileError> {
    let colour = match e.basis {
        BasisChoice::Scored(c) => c,
        BasisChoice::Open => return Err(CompileError::OpenColour(e.id.clone())),
    };
    to_diagram_with(e, s, colour, e.phase)
}

/// Same, with the colour and phase chosen by the observer.
///
/// A Bell cup whose second leg carries the identification gate; the measured
/// leg is rotated by `Z(−phase)` and ends in a bastard spider of `colour`.
pub fn to_diagram_with(
    e: &MeasurementEvent,
    s: &Score,
    colour: Colour,
    phase: Option<f64>,
) -> Result<Diagram, CompileError> {
    let diags = check_score(s);
    if !diags.is_empty() {
        return Err(CompileError::InvalidScore(diags));
    }
    if !s.movements.iter().flat_map(|m| m.events()).any(|x| x.id == e.id) {
        return Err(CompileError::UnknownEvent(e.id.clone()));
    }
    let spec = s.entanglement_for(e).expect("checked score resolves entanglements");
    let u = s.identification_unitary(spec).expect("checked score resolves identification gates");
    let gate = gadgets::unitary(u)?;
    let q = WireKind::Quantum;

    let gate_on_measured = spec.pair.1 == e.measured;
    let mut measured_leg = if gate_on_measured { gate.clone() } else { Diagram::wire(q) };
    if let Some(p) = phase {
        measured_leg = measured_leg.compose(&Diagram::spider(Colour::Green, Phase::new(-p), 1, 1, q))?;
    }
    measured_leg = measured_leg.compose(&gadgets::measure(colour))?;
    let influenced_leg = if gate_on_measured { Diagram::wire(q) } else { gate };

    Ok(gadgets::bell_cup(Colour::Green).compose(&measured_leg.tensor(&influenced_leg))?)
}
