use std::f64::consts::{FRAC_1_SQRT_2, PI};

use num_complex::Complex64;
use num_rational::Ratio;
use proptest::prelude::*;
use qcm::score::{
    bell_score_fixture, check_score, to_diagram, to_diagram_with, BasisChoice, Blob, BlobContent, DiagnosticCode,
    Endpoint, Fragment, Gate, GateKind, Identification, Item, MeasurementEvent, Note, Relation, SamenessKind,
    SamenessLink, Scope, Score,
};
use qcm::sim::Gate1;
use qcm::zx::{
    equal_up_to_scalar, evaluate_doubled, fuse_spiders, gadgets, Colour, DiagramBuilder, Matrix, WireKind, ZxError,
};

fn codes(s: &Score) -> Vec<DiagnosticCode> {
    check_score(s).into_iter().map(|d| d.code).collect()
}

fn first_event(s: &Score) -> MeasurementEvent {
    s.movements[0].events().next().unwrap().clone()
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// `Σ_k |k⟩ ⊗ vec(w_k w_k†)` where `w_k` is the influenced qubit's
/// unnormalised state after outcome `k`, worked out from
/// `(I ⊗ U)|Φ⁺⟩` with amplitudes `M[a][b] = U[b][a]/√2`.
fn projector_oracle(u: &Gate1, measured_first: bool, colour: Colour, phase: f64) -> Matrix {
    let m = |a: usize, b: usize| u[b][a] * FRAC_1_SQRT_2;
    let base: [[Complex64; 2]; 2] = match colour {
        Colour::Green => [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(1.0, 0.0)]],
        Colour::Red => [[c(FRAC_1_SQRT_2, 0.0), c(FRAC_1_SQRT_2, 0.0)], [c(FRAC_1_SQRT_2, 0.0), c(-FRAC_1_SQRT_2, 0.0)]],
    };
    let rot = Complex64::from_polar(1.0, phase);
    let mut out = vec![c(0.0, 0.0); 8];
    for k in 0..2 {
        let v = [base[k][0], base[k][1] * rot];
        let w: Vec<Complex64> = (0..2)
            .map(|other| {
                (0..2)
                    .map(|x| if measured_first { v[x].conj() * m(x, other) } else { v[x].conj() * m(other, x) })
                    .sum()
            })
            .collect();
        for a in 0..2 {
            for b in 0..2 {
                out[k * 4 + 2 * a + b] = w[a] * w[b].conj();
            }
        }
    }
    Matrix::column(out)
}

fn with_gate(gate: Identification) -> Score {
    let mut s = bell_score_fixture();
    s.entanglements[0].gate = gate;
    s
}

#[test]
fn fixture_is_clean_and_shaped() {
    let s = bell_score_fixture();
    assert!(check_score(&s).is_empty());
    assert_eq!(s.movements.len(), 4);
    let plan: Vec<(String, BasisChoice)> =
        s.movements.iter().map(|m| m.events().next().map(|e| (e.measured.clone(), e.basis)).unwrap()).collect();
    assert_eq!(plan[0], ("q1".to_string(), BasisChoice::Scored(Colour::Green)));
    let mut grid: Vec<_> = plan.iter().map(|(q, b)| format!("{q}{b:?}")).collect();
    grid.sort();
    grid.dedup();
    assert_eq!(grid.len(), 4, "movements cover each (qubit, colour) once");
    assert!(s.movements.iter().flat_map(|m| m.events()).all(|e| e.entanglement.as_deref() == Some("e1")));
    assert_eq!(s.entanglements.len(), 1);
    assert_eq!(s.glossary.policy, vec![qcm::score::Role::Audience]);
}

#[test]
fn empty_score_needs_movements() {
    let mut s = bell_score_fixture();
    s.movements.clear();
    s.glossary.movement_notes.clear();
    assert_eq!(codes(&s), vec![DiagnosticCode::NoMovements]);
}

fn link(from: Endpoint, to: Endpoint, gate: GateKind) -> SamenessLink {
    let wire = SamenessLink::natural_wire(&from, &to);
    SamenessLink { from, to, kind: SamenessKind::Identical, scope: Scope::Full, gate: Gate { kind: gate, lead: None }, wire }
}

#[test]
fn dangling_custom_gate() {
    let mut s = bell_score_fixture();
    s.movements[0].items.push(Item::Link(link(Endpoint::qubit("q1"), Endpoint::qubit("q2"), GateKind::Custom("dual".into()))));
    assert_eq!(codes(&s), vec![DiagnosticCode::UnresolvedGlossaryName]);
    s.glossary.relations.insert("dual".into(), Relation { description: "mirror".into(), unitary: None });
    assert!(codes(&s).is_empty());
}

#[test]
fn hadamard_after_measurement_outcome() {
    let mut s = bell_score_fixture();
    let ev = first_event(&s).id;
    s.movements[0].items.push(Item::Link(link(Endpoint::Outcome(ev), Endpoint::qubit("q2"), GateKind::Hadamard)));
    assert_eq!(codes(&s), vec![DiagnosticCode::ClassicalIntoHadamard]);

    // the same wiring is invalid as a diagram
    let mut b = DiagramBuilder::new();
    let m = b.z(qcm::zx::Phase::ZERO);
    let h = b.hadamard();
    let o = b.output();
    b.connect(m, h, WireKind::Classical).connect(h, o, WireKind::Quantum);
    assert!(matches!(b.build(), Err(ZxError::ClassicalHadamard(_))));
}

#[test]
fn tilt_rules() {
    let mut s = bell_score_fixture();
    let mut l = link(Endpoint::qubit("q1"), Endpoint::qubit("q2"), GateKind::Sharp(3));
    l.gate.lead = Some("q3".into());
    s.movements[0].items.push(Item::Link(l.clone()));
    assert_eq!(codes(&s), vec![DiagnosticCode::TiltNotEndpoint]);

    let mut s = bell_score_fixture();
    for (a, b) in [("q1", "q2"), ("q2", "q1")] {
        let mut l = link(Endpoint::qubit(a), Endpoint::qubit(b), GateKind::Identity);
        l.gate.lead = Some(a.into());
        s.movements[1].items.push(Item::Link(l));
    }
    assert_eq!(codes(&s), vec![DiagnosticCode::LeaderCycle]);

    let mut s = bell_score_fixture();
    for id in ["b1", "b2"] {
        s.movements[0].items.push(Item::Blob(Blob { id: id.into(), qubit: "q1".into(), content: BlobContent::Variable("x".into()) }));
    }
    let mut l = link(
        Endpoint::Qubit { qubit: "q1".into(), blob: Some("b1".into()) },
        Endpoint::Qubit { qubit: "q1".into(), blob: Some("b2".into()) },
        GateKind::Identity,
    );
    assert!(codes(&s).is_empty());
    l.gate.lead = Some("q1".into());
    s.movements[0].items.push(Item::Link(l));
    assert_eq!(codes(&s), vec![DiagnosticCode::LeaderIsFollower]);
}

#[test]
fn event_invariants() {
    let mut s = bell_score_fixture();
    if let Item::Measure(e) = &mut s.movements[0].items[0] {
        e.influenced = "q1".into();
    }
    let cs = codes(&s);
    assert!(cs.contains(&DiagnosticCode::SameQubit));

    let mut s = bell_score_fixture();
    let mut extra = first_event(&s);
    extra.id = "again".into();
    s.movements[0].items.push(Item::Measure(extra));
    assert_eq!(codes(&s), vec![DiagnosticCode::DuplicateCue]);

    let mut s = bell_score_fixture();
    if let Item::Measure(e) = &mut s.movements[1].items[0] {
        e.phase = Some(1.5 * PI); // piano spans only [0, π]
    }
    assert_eq!(codes(&s), vec![DiagnosticCode::PhaseOutOfRange]);
}

#[test]
fn non_unitary_identification() {
    let s = with_gate(Identification::Matrix([[c(1.0, 0.0), c(1.0, 0.0)], [c(0.0, 0.0), c(1.0, 0.0)]]));
    assert_eq!(codes(&s), vec![DiagnosticCode::NonUnitary]);
}

/// Removing anything that is referenced leaves at least one diagnostic.
#[test]
fn reference_closure() {
    let mut s = bell_score_fixture();
    s.glossary.relations.insert("mirror".into(), Relation { description: "swap".into(), unitary: Some(qcm::sim::hadamard_gate()) });
    s.glossary.sameness.insert("echo".into(), qcm::score::SamenessDef { description: "loose".into(), scope: Scope::Rhythm });
    s.entanglements[0].gate = Identification::Relation("mirror".into());
    s.movements[0].items.push(Item::Blob(Blob {
        id: "riff".into(),
        qubit: "q1".into(),
        content: BlobContent::Fragment(Fragment(vec![Note { pitch: 0, duration: Ratio::new(1, 2) }])),
    }));
    let mut l = link(Endpoint::Qubit { qubit: "q1".into(), blob: Some("riff".into()) }, Endpoint::qubit("q2"), GateKind::Identity);
    l.kind = SamenessKind::Custom("echo".into());
    s.movements[0].items.push(Item::Link(l));
    let ev = first_event(&s).id;
    s.movements[0].items.push(Item::Link(link(Endpoint::Outcome(ev), Endpoint::qubit("q2"), GateKind::Identity)));
    assert!(check_score(&s).is_empty(), "{:?}", check_score(&s));

    type Edit = Box<dyn Fn(&mut Score)>;
    let deletions: Vec<Edit> = vec![
        Box::new(|s| {
            s.qubits.remove(0);
        }),
        Box::new(|s| {
            s.qubits.remove(1);
        }),
        Box::new(|s| {
            s.entanglements.clear();
        }),
        Box::new(|s| {
            s.glossary.relations.clear();
        }),
        Box::new(|s| {
            s.glossary.sameness.clear();
        }),
        Box::new(|s| {
            s.glossary.policy.clear();
        }),
        Box::new(|s| {
            s.movements[0].items.retain(|i| !matches!(i, Item::Blob(_)));
        }),
        Box::new(|s| {
            s.movements[0].items.retain(|i| !matches!(i, Item::Measure(_)));
        }),
        Box::new(|s| {
            s.movements.remove(3);
        }),
    ];
    for (k, delete) in deletions.iter().enumerate() {
        let mut t = s.clone();
        delete(&mut t);
        assert!(!check_score(&t).is_empty(), "deletion {k} went unnoticed");
    }
}

#[test]
fn green_identity_event_fuses_to_compact_form() {
    let s = bell_score_fixture();
    let d = to_diagram(&first_event(&s), &s).unwrap();
    assert!(fuse_spiders(&d).isomorphic(&gadgets::compact_measurement(Colour::Green), 1e-12));
}

#[test]
fn red_event_matches_projectors() {
    let s = bell_score_fixture();
    let e = s.movements[2].events().next().unwrap();
    assert_eq!(e.basis, BasisChoice::Scored(Colour::Red));
    let got = evaluate_doubled(&to_diagram(e, &s).unwrap());
    let want = projector_oracle(&qcm::sim::identity_gate(), true, Colour::Red, 0.0);
    assert!(equal_up_to_scalar(&got, &want, 1e-9).unwrap());
    let compact = evaluate_doubled(&gadgets::compact_measurement(Colour::Red));
    assert!(equal_up_to_scalar(&got, &compact, 1e-9).unwrap());
}

#[test]
fn hadamard_identification_is_complementary() {
    let s = with_gate(Identification::Hadamard);
    let got = evaluate_doubled(&to_diagram(&first_event(&s), &s).unwrap());
    // green outcome i sends the partner to |+⟩ or |−⟩
    let want = Matrix::column(
        [[0.5, 0.5, 0.5, 0.5], [0.5, -0.5, -0.5, 0.5]].concat().into_iter().map(|x| c(x, 0.0)).collect(),
    );
    assert!(equal_up_to_scalar(&got, &want, 1e-9).unwrap());
}

#[test]
fn open_event_needs_a_colour() {
    let mut s = bell_score_fixture();
    if let Item::Measure(e) = &mut s.movements[0].items[0] {
        e.basis = BasisChoice::Open;
    }
    let e = first_event(&s);
    assert!(to_diagram(&e, &s).is_err());
    assert!(to_diagram_with(&e, &s, Colour::Red, None).is_ok());
}

fn arb_unitary() -> impl Strategy<Value = Gate1> {
    (0.0..PI, 0.0..2.0 * PI, 0.0..2.0 * PI, 0.0..2.0 * PI).prop_map(|(t, p, l, g)| {
        let (co, si) = ((t / 2.0).cos(), (t / 2.0).sin());
        let gp = Complex64::from_polar(1.0, g);
        [
            [gp * co, -gp * Complex64::from_polar(si, l)],
            [gp * Complex64::from_polar(si, p), gp * Complex64::from_polar(co, p + l)],
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn compilation_matches_projectors(
        u in arb_unitary(),
        movement in 0usize..4,
        red in any::<bool>(),
        phase in prop::option::of(0.0..PI),
    ) {
        let s = with_gate(Identification::Matrix(u));
        let e = s.movements[movement].events().next().unwrap();
        let colour = if red { Colour::Red } else { Colour::Green };
        let got = evaluate_doubled(&to_diagram_with(e, &s, colour, phase).unwrap());
        let want = projector_oracle(&u, e.measured == "q1", colour, phase.unwrap_or(0.0));
        prop_assert!(equal_up_to_scalar(&got, &want, 1e-9).unwrap());
    }

    #[test]
    fn sharps_compose(a in -24i32..24, b in -24i32..24, pitches in prop::collection::vec(-40i32..40, 1..8)) {
        let f = Fragment(pitches.into_iter().map(|p| Note { pitch: p, duration: Ratio::new(1, 4) }).collect());
        prop_assert_eq!(f.transpose(a).transpose(b), f.transpose(a + b));
    }
}
