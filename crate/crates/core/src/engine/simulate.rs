//! Headless runs: many auto-driven sessions of one score, with agreement
//! statistics between each collapse and a Born-rule reading of the partner.

use std::collections::BTreeMap;
use std::fmt;
use std::io::{self, Write};
use std::sync::Arc;

use serde::Serialize;

use super::{zero_clock, EngineError, Payload, Session, SessionOptions, Status, Timestamps, LOG_VERSION};
use super::{ActionKind, ObserverAction};
use crate::score::{OutcomeMode, Score};
use crate::sim::{self, ChshAngles, MeasurementBasis, Resolve, RngSeed, RngStream, SimError};
use crate::zx::Colour;

/// Which colour the partner is read in after each collapse.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DrivePolicy {
    Same,
    Cross,
    Both,
}

impl DrivePolicy {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "same" => Some(DrivePolicy::Same),
            "cross" => Some(DrivePolicy::Cross),
            "both" => Some(DrivePolicy::Both),
            _ => None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct SimulateOptions {
    pub seed: RngSeed,
    /// Number of sessions, each driven from the first movement to the end.
    pub trials: usize,
    pub policy: DrivePolicy,
    /// Pairs per CHSH setting; 0 skips the subreport.
    pub chsh_trials: usize,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct AgreementTally {
    pub pairs: u64,
    pub agree: u64,
}

impl AgreementTally {
    pub fn frequency(&self) -> f64 {
        if self.pairs == 0 {
            f64::NAN
        } else {
            self.agree as f64 / self.pairs as f64
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SimulateReport {
    pub seed: RngSeed,
    pub trials: usize,
    pub policy: DrivePolicy,
    pub collapses: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub same_colour: Option<AgreementTally>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cross_colour: Option<AgreementTally>,
    /// qubit → colour → [count of outcome 0, count of outcome 1]
    pub outcome_counts: BTreeMap<String, BTreeMap<String, [u64; 2]>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub chsh: Option<f64>,
    /// Instructions whose indices agreed with the measured outcome, over
    /// collapses where the partner was read in the measured colour.
    pub instruction_agreement: AgreementTally,
}

fn colour_name(c: Colour) -> &'static str {
    match c {
        Colour::Green => "green",
        Colour::Red => "red",
    }
}

fn other(c: Colour) -> Colour {
    match c {
        Colour::Green => Colour::Red,
        Colour::Red => Colour::Green,
    }
}

impl fmt::Display for SimulateReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "seed {}  sessions {}  collapses {}", self.seed.0, self.trials, self.collapses)?;
        for (name, t) in [("same-colour", &self.same_colour), ("cross-colour", &self.cross_colour)] {
            if let Some(t) = t {
                writeln!(f, "{name} agreement: {}/{} = {:.4}", t.agree, t.pairs, t.frequency())?;
            }
        }
        let ia = &self.instruction_agreement;
        writeln!(f, "instruction agreement: {}/{} = {:.4}", ia.agree, ia.pairs, ia.frequency())?;
        for (q, per) in &self.outcome_counts {
            for (c, [a, b]) in per {
                writeln!(f, "  {q} {c}: {a} / {b}")?;
            }
        }
        if let Some(s) = self.chsh {
            writeln!(f, "CHSH at optimal angles: {s:.4} (2√2 = {:.4})", 2.0 * std::f64::consts::SQRT_2)?;
        }
        Ok(())
    }
}

#[derive(Debug, thiserror::Error)]
pub enum SimulateError {
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// Runs `trials` sessions. Session `k` uses seed `seed.derive(2k)`; the
/// partner readings use `seed.derive(2k + 1)`. Measured colours come from
/// the score; open colours alternate with `k`. When `out` is given every
/// session is written as a header line followed by its log, without
/// timestamps.
pub fn simulate(score: &Score, opts: &SimulateOptions, mut out: Option<&mut dyn Write>) -> Result<SimulateReport, SimulateError> {
    let score = Arc::new(score.clone());
    let actor = *score.glossary.policy.first().ok_or_else(|| {
        EngineError::InvalidScore(crate::score::check_score(&score))
    })?;
    let mut report = SimulateReport {
        seed: opts.seed,
        trials: opts.trials,
        policy: opts.policy,
        collapses: 0,
        same_colour: matches!(opts.policy, DrivePolicy::Same | DrivePolicy::Both).then(AgreementTally::default),
        cross_colour: matches!(opts.policy, DrivePolicy::Cross | DrivePolicy::Both).then(AgreementTally::default),
        outcome_counts: BTreeMap::new(),
        chsh: None,
        instruction_agreement: AgreementTally::default(),
    };

    for k in 0..opts.trials {
        let seed = opts.seed.derive(2 * k as u64);
        let mut reader = RngStream::new(opts.seed.derive(2 * k as u64 + 1));
        let mut s = Session::new(score.clone(), seed, SessionOptions::default(), zero_clock())?;
        loop {
            match s.status() {
                Status::Finished => break,
                Status::Collapsed => {
                    s.apply_action(ObserverAction::advance(actor))?;
                }
                Status::AwaitingChoice => {
                    let e = s.pending_event().expect("awaiting choice").clone();
                    let colours = score.allowed_colours(&e);
                    let colour = colours[if colours.len() == 1 { 0 } else { k % 2 }];
                    s.apply_action(ObserverAction::choose(actor, &e.measured, colour))?;
                }
                Status::AwaitingTrigger => {
                    let e = s.pending_event().expect("awaiting trigger").clone();
                    let outcome = match score.glossary.outcomes {
                        OutcomeMode::Seeded => None,
                        // someone in the room decides; here they follow the Born rule
                        OutcomeMode::Manual => {
                            let (colour, phase) = s.chosen.expect("chosen");
                            let qi = score.qubit_index(&e.measured).expect("checked");
                            let (o, _) =
                                sim::measure(s.state(), qi, &super::basis_for(colour, phase), Resolve::Sample(&mut reader))?;
                            Some(o.index)
                        }
                    };
                    let events = s.apply_action(ObserverAction { actor, kind: ActionKind::Trigger { outcome } })?;
                    report.collapses += 1;
                    tally(&score, &s, &e.influenced, &events, &mut reader, &mut report)?;
                }
            }
        }
        if let Some(w) = out.as_deref_mut() {
            writeln!(w, "{{\"v\":{LOG_VERSION},\"type\":\"session\",\"index\":{k},\"seed\":{}}}", seed.0)?;
            w.write_all(s.to_ndjson(Timestamps::Exclude).as_bytes())?;
        }
    }

    if opts.chsh_trials > 0 {
        report.chsh = Some(sim::chsh_value(ChshAngles::optimal(), opts.chsh_trials, opts.seed.derive(u64::MAX))?);
    }
    Ok(report)
}

fn tally(
    score: &Score,
    s: &Session,
    partner: &str,
    events: &[super::SessionEvent],
    reader: &mut RngStream,
    report: &mut SimulateReport,
) -> Result<(), SimError> {
    let Some((qubit, colour, outcome)) = events.iter().find_map(|e| match &e.payload {
        Payload::Collapse { qubit, colour, outcome, .. } => Some((qubit.clone(), *colour, *outcome)),
        _ => None,
    }) else {
        return Ok(());
    };
    report.outcome_counts.entry(qubit).or_default().entry(colour_name(colour).into()).or_default()[outcome as usize] += 1;

    if let Some(ins) = events.iter().find_map(|e| match &e.payload {
        Payload::Instruction(i) if !i.measured => Some(i),
        _ => None,
    }) {
        if ins.colour == colour {
            report.instruction_agreement.pairs += 1;
            report.instruction_agreement.agree += u64::from(ins.outcome == outcome);
        }
    }

    let pi = score.qubit_index(partner).expect("checked");
    for (slot, c) in [(&mut report.same_colour, colour), (&mut report.cross_colour, other(colour))] {
        if let Some(t) = slot {
            let (o, _) = sim::measure(s.state(), pi, &MeasurementBasis::of_colour(c), Resolve::Sample(reader))?;
            t.pairs += 1;
            t.agree += u64::from(o.index == outcome);
        }
    }
    Ok(())
}
