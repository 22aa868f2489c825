use std::f64::consts::PI;
use std::sync::Arc;

use proptest::prelude::*;
use qcm::engine::{
    create_session, parse_log_line, replay, simulate, zero_clock, ActionKind, ActionTemplate, DrivePolicy, EngineError,
    InstructionMap, ObserverAction, Payload, Session, SessionOptions, SimulateOptions, Status, Timestamps,
};
use qcm::score::{bell_score_fixture, Identification, OutcomeMode, Role, Score};
use qcm::sim::RngSeed;
use qcm::zx::Colour;

const AUD: Role = Role::Audience;

fn session(score: Score, seed: u64) -> Session {
    Session::new(Arc::new(score), RngSeed(seed), SessionOptions::default(), zero_clock()).unwrap()
}

fn manual_bell() -> Score {
    let mut s = bell_score_fixture();
    s.glossary.outcomes = OutcomeMode::Manual;
    s
}

fn instructions(events: &[qcm::engine::SessionEvent]) -> Vec<(String, String, u8, Colour)> {
    events
        .iter()
        .filter_map(|e| match &e.payload {
            Payload::Instruction(i) => Some((i.qubit.clone(), i.directive.clone(), i.outcome, i.colour)),
            _ => None,
        })
        .collect()
}

/// Drives `s` to the movement with index `m`.
fn skip_to(s: &mut Session, m: usize) {
    while s.movement() < m {
        if s.status() == Status::Collapsed {
            s.apply_action(ObserverAction::advance(AUD)).unwrap();
            continue;
        }
        let e = s.pending_event().unwrap().clone();
        let c = s.score().allowed_colours(&e)[0];
        s.apply_action(ObserverAction::choose(AUD, &e.measured, c)).unwrap();
        let outcome = (s.score().glossary.outcomes == OutcomeMode::Manual).then_some(0);
        s.apply_action(ObserverAction { actor: AUD, kind: ActionKind::Trigger { outcome } }).unwrap();
        s.apply_action(ObserverAction::advance(AUD)).unwrap();
    }
}

#[test]
fn fresh_bell_session() {
    let s = create_session(bell_score_fixture(), RngSeed(42)).unwrap();
    assert_eq!(s.pending_movements(), 4);
    assert_eq!(s.status(), Status::AwaitingChoice);
    assert!(matches!(s.log()[0].payload, Payload::MovementStarted { movement: 0, .. }));
    assert_eq!(
        s.legal_actions(),
        vec![ActionTemplate::ChooseBasis { qubit: "q1".into(), colour: Colour::Green, phase_range: None }]
    );
}

#[test]
fn empty_score_is_rejected() {
    let mut score = bell_score_fixture();
    score.movements.clear();
    assert!(matches!(create_session(score, RngSeed(1)), Err(EngineError::InvalidScore(_))));
}

#[test]
fn instruction_map_is_total_and_matches_the_fixture() {
    let score = bell_score_fixture();
    let map = InstructionMap::new(&score);
    assert_eq!(map.len(), 8);
    assert_eq!(map.get("q1", Colour::Green, 1), Some("move Actias to the |1⟩ position"));
    assert_eq!(map.get("q2", Colour::Green, 0), Some("play Soft and Slow"));
    assert_eq!(map.get("q2", Colour::Red, 1), Some("play Strong and Slow"));
}

#[test]
fn green_piano_measurement_instructs_both_instruments() {
    for (outcome, guitar, piano) in [
        (1, "move Actias to the |1⟩ position", "play Strong and Fast"),
        (0, "move Actias to the |0⟩ position", "play Soft and Slow"),
    ] {
        let mut s = session(manual_bell(), 7);
        skip_to(&mut s, 3); // m4: piano, green
        s.apply_action(ObserverAction::choose(AUD, "q2", Colour::Green)).unwrap();
        let events = s.apply_action(ObserverAction { actor: AUD, kind: ActionKind::Trigger { outcome: Some(outcome) } }).unwrap();
        let ins = instructions(&events);
        assert_eq!(ins.len(), 2);
        assert_eq!(ins[0], ("q2".into(), piano.into(), outcome, Colour::Green));
        assert_eq!(ins[1], ("q1".into(), guitar.into(), outcome, Colour::Green));
        assert!(matches!(&events[1].payload, Payload::Collapse { probability, .. } if (probability - 0.5).abs() < 1e-12));
    }
}

#[test]
fn red_measurement_uses_the_plus_minus_row() {
    for (outcome, guitar_label, piano) in [(0, "|+⟩", "play Soft and Fast"), (1, "|−⟩", "play Strong and Slow")] {
        let mut s = session(manual_bell(), 7);
        skip_to(&mut s, 1); // m2: piano, red
        s.apply_action(ObserverAction::choose(AUD, "q2", Colour::Red)).unwrap();
        let events = s.apply_action(ObserverAction { actor: AUD, kind: ActionKind::Trigger { outcome: Some(outcome) } }).unwrap();
        let ins = instructions(&events);
        assert_eq!(ins[0].1, piano);
        assert_eq!(ins[1].1, format!("move Actias to the {guitar_label} position"));
        assert_eq!(ins[1].3, Colour::Red);
    }
}

#[test]
fn scored_colour_is_enforced_and_open_colours_offer_both() {
    let mut s = session(bell_score_fixture(), 3);
    let before = s.log().len();
    let err = s.apply_action(ObserverAction::choose(AUD, "q1", Colour::Red)).unwrap_err();
    assert_eq!(err.code(), "colour-not-allowed");
    assert_eq!(s.log().len(), before);

    let mut open = bell_score_fixture();
    open.glossary.open_colours = true;
    let s = session(open, 3);
    let colours: Vec<_> = s
        .legal_actions()
        .into_iter()
        .map(|t| match t {
            ActionTemplate::ChooseBasis { colour, .. } => colour,
            other => panic!("{other:?}"),
        })
        .collect();
    assert_eq!(colours, vec![Colour::Green, Colour::Red]);
}

#[test]
fn state_machine_templates() {
    let mut s = session(bell_score_fixture(), 5);
    assert!(s.apply_action(ObserverAction::trigger(AUD)).is_err());
    s.apply_action(ObserverAction::choose(AUD, "q1", Colour::Green)).unwrap();
    assert_eq!(s.legal_actions(), vec![ActionTemplate::Trigger { outcomes: None }]);
    s.apply_action(ObserverAction::trigger(AUD)).unwrap();
    assert_eq!(s.status(), Status::Collapsed);
    assert_eq!(s.legal_actions(), vec![ActionTemplate::AdvanceMovement]);
    skip_to(&mut s, 3);
    s.apply_action(ObserverAction::choose(AUD, "q2", Colour::Green)).unwrap();
    s.apply_action(ObserverAction::trigger(AUD)).unwrap();
    s.apply_action(ObserverAction::advance(AUD)).unwrap();
    assert_eq!(s.status(), Status::Finished);
    assert!(s.legal_actions().is_empty());
    assert!(matches!(s.log().last().unwrap().payload, Payload::SessionFinished));
    assert_eq!(s.pending_movements(), 0);
}

#[test]
fn unauthorized_actor_leaves_the_log_alone() {
    let mut s = session(bell_score_fixture(), 9);
    let before = s.to_ndjson(Timestamps::Include);
    let err = s.apply_action(ObserverAction::choose(Role::Performer, "q1", Colour::Green)).unwrap_err();
    assert!(matches!(err, EngineError::UnauthorizedActor { .. }));
    assert_eq!(s.to_ndjson(Timestamps::Include), before);
    assert!(s.actions().is_empty());
}

#[test]
fn piano_phases_stay_on_the_half_sphere() {
    let mut s = session(bell_score_fixture(), 11);
    skip_to(&mut s, 1);
    let with_phase = |p| ObserverAction { actor: AUD, kind: ActionKind::ChooseBasis { qubit: "q2".into(), colour: Colour::Red, phase: Some(p) } };
    let err = s.apply_action(with_phase(1.5 * PI)).unwrap_err();
    assert_eq!(err.code(), "phase-out-of-range");
    assert!(!s.legal_actions()[0].accepts(&with_phase(1.5 * PI).kind));
    s.apply_action(with_phase(PI / 2.0)).unwrap();
    s.apply_action(ObserverAction::trigger(AUD)).unwrap();
}

#[test]
fn manual_mode_needs_a_possible_outcome() {
    let mut score = manual_bell();
    score.movements[1].items = score.movements[0].items.clone();
    if let qcm::score::Item::Measure(e) = &mut score.movements[1].items[0] {
        e.id = "m2-1".into();
    }
    let opts = SessionOptions { reprepare: false };
    let mut s = Session::new(Arc::new(score), RngSeed(0), opts, zero_clock()).unwrap();
    s.apply_action(ObserverAction::choose(AUD, "q1", Colour::Green)).unwrap();
    assert_eq!(s.apply_action(ObserverAction::trigger(AUD)).unwrap_err(), EngineError::OutcomeRequired);
    s.apply_action(ObserverAction { actor: AUD, kind: ActionKind::Trigger { outcome: Some(1) } }).unwrap();
    s.apply_action(ObserverAction::advance(AUD)).unwrap();
    // same measurement on the collapsed pair: only outcome 1 is possible
    s.apply_action(ObserverAction::choose(AUD, "q1", Colour::Green)).unwrap();
    assert_eq!(s.legal_actions(), vec![ActionTemplate::Trigger { outcomes: Some(vec![1]) }]);
    let err = s.apply_action(ObserverAction { actor: AUD, kind: ActionKind::Trigger { outcome: Some(0) } }).unwrap_err();
    assert_eq!(err, EngineError::ImpossibleOutcome(0));
}

#[test]
fn hadamard_identification_reads_the_partner_in_the_other_colour() {
    let mut score = bell_score_fixture();
    score.entanglements[0].gate = Identification::Hadamard;
    let mut s = session(score, 2);
    s.apply_action(ObserverAction::choose(AUD, "q1", Colour::Green)).unwrap();
    let events = s.apply_action(ObserverAction::trigger(AUD)).unwrap();
    let ins = instructions(&events);
    assert_eq!(ins[0].3, Colour::Green);
    assert_eq!(ins[1].3, Colour::Red);
    assert_eq!(ins[1].2, ins[0].2);
}

#[test]
fn same_colour_instructions_agree_in_every_run() {
    for seed in 0..10_000u64 {
        let mut s = session(bell_score_fixture(), seed);
        s.apply_action(ObserverAction::choose(AUD, "q1", Colour::Green)).unwrap();
        let ins = instructions(&s.apply_action(ObserverAction::trigger(AUD)).unwrap());
        assert_eq!(ins[0].2, ins[1].2, "seed {seed}");
        assert_eq!(ins[1].3, Colour::Green);
    }
}

fn full_run(score: &Score, seed: u64) -> Session {
    let mut s = session(score.clone(), seed);
    skip_to(&mut s, score.movements.len() - 1);
    let e = s.pending_event().unwrap().clone();
    s.apply_action(ObserverAction::choose(AUD, &e.measured, s.score().allowed_colours(&e)[0])).unwrap();
    s.apply_action(ObserverAction::trigger(AUD)).unwrap();
    s.apply_action(ObserverAction::advance(AUD)).unwrap();
    s
}

#[test]
fn replay_reproduces_logs() {
    let score = bell_score_fixture();
    let a = full_run(&score, 99);
    let b = full_run(&score, 99);
    assert_eq!(a.to_ndjson(Timestamps::Include), b.to_ndjson(Timestamps::Include));
    a.verify_replay().unwrap();

    let r = replay(Arc::new(score.clone()), RngSeed(99), SessionOptions::default(), zero_clock(), a.actions()).unwrap();
    assert_eq!(r.to_ndjson(Timestamps::Exclude), a.to_ndjson(Timestamps::Exclude));

    let short = replay(Arc::new(score.clone()), RngSeed(99), SessionOptions::default(), zero_clock(), &a.actions()[..5]).unwrap();
    let full = a.log_lines(Timestamps::Exclude);
    let prefix = short.log_lines(Timestamps::Exclude);
    assert_eq!(&full[..prefix.len()], &prefix[..]);
}

#[test]
fn another_seed_diverges_at_a_collapse() {
    let score = bell_score_fixture();
    let a = full_run(&score, 1);
    let diverged = (2..200u64).find_map(|seed| {
        let b = replay(Arc::new(score.clone()), RngSeed(seed), SessionOptions::default(), zero_clock(), a.actions()).ok()?;
        let k = a.log().iter().zip(b.log()).position(|(x, y)| x.payload != y.payload)?;
        Some(a.log()[k].payload.clone())
    });
    assert!(matches!(diverged, Some(Payload::Collapse { .. })), "{diverged:?}");
}

#[test]
fn log_lines_parse_back() {
    let s = full_run(&bell_score_fixture(), 17);
    for (line, event) in s.log_lines(Timestamps::Include).iter().zip(s.log()) {
        let rec = parse_log_line(line).unwrap();
        assert_eq!(rec.v, 1);
        assert_eq!(rec.seq, event.seq);
        assert_eq!(rec.ts, Some(event.ts));
        assert_eq!(rec.payload, event.payload);
    }
    let line = &s.log_lines(Timestamps::Exclude)[0];
    assert!(line.starts_with("{\"v\":1,\"seq\":0,\"type\":\"movement-started\""), "{line}");
}

#[test]
fn simulate_reports_agreement() {
    let opts = SimulateOptions { seed: RngSeed(2024), trials: 2_000, policy: DrivePolicy::Both, chsh_trials: 0 };
    let mut out1 = Vec::new();
    let r = simulate(&bell_score_fixture(), &opts, Some(&mut out1)).unwrap();
    assert_eq!(r.collapses, 8_000);
    assert_eq!(r.same_colour.unwrap().frequency(), 1.0);
    let cross = r.cross_colour.unwrap().frequency();
    assert!((0.46..0.54).contains(&cross), "{cross}");
    assert_eq!(r.instruction_agreement.frequency(), 1.0);
    let mut out2 = Vec::new();
    simulate(&bell_score_fixture(), &opts, Some(&mut out2)).unwrap();
    assert_eq!(out1, out2);
}

fn arb_action() -> impl Strategy<Value = ObserverAction> {
    let actor = prop_oneof![Just(Role::Audience), Just(Role::Performer)];
    let kind = prop_oneof![
        (prop_oneof![Just("q1"), Just("q2")], any::<bool>(), prop::option::of(prop_oneof![Just(0.5), Just(4.0)])).prop_map(
            |(q, g, phase)| ActionKind::ChooseBasis {
                qubit: q.into(),
                colour: if g { Colour::Green } else { Colour::Red },
                phase
            }
        ),
        prop::option::of(0u8..2).prop_map(|outcome| ActionKind::Trigger { outcome }),
        Just(ActionKind::AdvanceMovement),
    ];
    (actor, kind).prop_map(|(actor, kind)| ObserverAction { actor, kind })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn legal_actions_are_exactly_the_accepted_ones(seed in any::<u64>(), manual in any::<bool>(), open in any::<bool>(), actions in prop::collection::vec(arb_action(), 0..40)) {
        let mut score = bell_score_fixture();
        score.glossary.open_colours = open;
        if manual {
            score.glossary.outcomes = OutcomeMode::Manual;
        }
        let mut s = session(score, seed);
        for a in actions {
            let legal = s.score().glossary.policy.contains(&a.actor) && s.legal_actions().iter().any(|t| t.accepts(&a.kind));
            let before = s.log().len();
            let result = s.apply_action(a.clone());
            prop_assert_eq!(result.is_ok(), legal, "{:?} -> {:?}", a, result);
            if !legal {
                prop_assert_eq!(s.log().len(), before);
            }
        }
        let seqs: Vec<u64> = s.log().iter().map(|e| e.seq).collect();
        prop_assert_eq!(seqs, (0..s.log().len() as u64).collect::<Vec<_>>());
        prop_assert!(s.verify_replay().is_ok());
    }
}

proptest! {
    #[test]
    fn action_phases_survive_json_exactly(phase in 0.0..PI) {
        let a = ObserverAction { actor: AUD, kind: ActionKind::ChooseBasis { qubit: "q2".into(), colour: Colour::Red, phase: Some(phase) } };
        let back: ObserverAction = serde_json::from_str(&serde_json::to_string(&a).unwrap()).unwrap();
        prop_assert_eq!(back, a);
    }
}
