#![allow(dead_code)]

use proptest::prelude::*;
use qcm::zx::{Diagram, DiagramBuilder, NodeId, Phase, WireKind};

#[derive(Clone, Debug)]
pub struct Recipe {
    spiders: Vec<(bool, Phase)>,
    boundaries: Vec<(bool, usize, bool)>,
    edges: Vec<(usize, usize, bool)>,
    hadamards: Vec<(usize, usize)>,
}

fn arb_phase() -> impl Strategy<Value = Phase> {
    prop_oneof![
        (0i64..8).prop_map(|k| Phase::pi_frac(k, 4)),
        (0.0..std::f64::consts::TAU).prop_map(Phase::new),
    ]
}

/// Random diagrams with at most four boundary wires and at most eight
/// spiders. With `mixed`, wires are classical with probability 1/3, which
/// yields bastard spiders; Hadamards only ever sit on quantum wires.
pub fn arb_recipe() -> impl Strategy<Value = Recipe> {
    (
        prop::collection::vec((any::<bool>(), arb_phase()), 1..=8),
        prop::collection::vec((any::<bool>(), 0usize..8, any::<bool>()), 0..=4),
        prop::collection::vec((0usize..8, 0usize..8, any::<bool>()), 0..=9),
        prop::collection::vec((0usize..8, 0usize..8), 0..=2),
    )
        .prop_map(|(spiders, boundaries, edges, hadamards)| Recipe { spiders, boundaries, edges, hadamards })
}

impl Recipe {
    pub fn build(&self, mixed: bool) -> Diagram {
        let mut b = DiagramBuilder::new();
        let n = self.spiders.len();
        let ids: Vec<NodeId> = self
            .spiders
            .iter()
            .map(|&(green, p)| if green { b.z(p) } else { b.x(p) })
            .collect();
        let kind = |classical: bool, salt: usize| {
            if mixed && classical && salt.is_multiple_of(3) {
                WireKind::Classical
            } else {
                WireKind::Quantum
            }
        };
        let mut inputs = Vec::new();
        let mut outputs = Vec::new();
        for (k, &(is_input, target, classical)) in self.boundaries.iter().enumerate() {
            let w = kind(classical, target + k);
            if is_input {
                inputs.push((ids[target % n], w));
            } else {
                outputs.push((ids[target % n], w));
            }
        }
        for (s, w) in inputs {
            let i = b.input();
            b.connect(i, s, w);
        }
        for (s, w) in outputs {
            let o = b.output();
            b.connect(s, o, w);
        }
        for (k, &(x, y, classical)) in self.edges.iter().enumerate() {
            b.connect(ids[x % n], ids[y % n], kind(classical, x + y + k));
        }
        for &(x, y) in &self.hadamards {
            let h = b.hadamard();
            b.connect(ids[x % n], h, WireKind::Quantum);
            b.connect(h, ids[y % n], WireKind::Quantum);
        }
        b.build().expect("recipes always produce valid diagrams")
    }
}
