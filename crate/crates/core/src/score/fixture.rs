use std::f64::consts::PI;

use super::{
    BasisChoice, EntanglementSpec, Identification, Item, MeasurementEvent, MetaGlossary, Movement, MusicalQubit,
    OutcomeMode, Role, Score,
};
use crate::zx::Colour;

/// The two-instrument "Bell" score.
///
/// Movements run over the grid (qubit, colour): guitar green, piano red,
/// guitar red, piano green. The printed panels are pictures, so this
/// assignment is a reconstruction; edit the movements to change it.
pub fn bell_score_fixture() -> Score {
    let mut guitar = MusicalQubit::new("q1", "Actias guitar", ["|0⟩", "|1⟩"], ["|+⟩", "|−⟩"]);
    guitar.directive = "move Actias to the {label} position".into();

    let mut piano =
        MusicalQubit::new("q2", "Grand Piano", ["Soft and Slow", "Strong and Fast"], ["Soft and Fast", "Strong and Slow"]);
    piano.phase_range = (0.0, PI);
    piano.paths = vec!["via Soft and Fast".into(), "via Strong and Slow".into(), "through neither".into()];

    let plan = [("m1", "q1", Colour::Green, "q2"), ("m2", "q2", Colour::Red, "q1"), ("m3", "q1", Colour::Red, "q2"), ("m4", "q2", Colour::Green, "q1")];
    let movements = plan
        .iter()
        .map(|&(id, measured, colour, influenced)| Movement {
            id: id.into(),
            items: vec![Item::Measure(MeasurementEvent {
                id: MeasurementEvent::default_id(id, 1),
                measured: measured.into(),
                basis: BasisChoice::Scored(colour),
                influenced: influenced.into(),
                entanglement: Some("e1".into()),
                cue: 1,
                phase: None,
            })],
        })
        .collect();

    let glossary = MetaGlossary {
        policy: vec![Role::Audience],
        outcomes: OutcomeMode::Seeded,
        open_colours: false,
        movement_notes: [
            ("m1", "The audience measures the guitar; the piano answers."),
            ("m2", "The piano is measured against Soft and Fast / Strong and Slow."),
            ("m3", "The guitar again, now on the |+⟩ / |−⟩ axis."),
            ("m4", "Back to Soft and Slow / Strong and Fast, heard from the piano."),
        ]
        .into_iter()
        .map(|(k, v)| (k.to_string(), v.to_string()))
        .collect(),
        ..MetaGlossary::default()
    };

    Score {
        title: "Bell".into(),
        glossary,
        qubits: vec![guitar, piano],
        entanglements: vec![EntanglementSpec {
            id: "e1".into(),
            pair: ("q1".into(), "q2".into()),
            gate: Identification::Identity,
            description: "corresponding Z- and X-eigenstates are identified".into(),
        }],
        movements,
    }
}
