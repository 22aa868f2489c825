use super::{Diagram, Edge, NodeId, NodeKind, WireKind};

/// Merges same-colour spiders joined by a wire until none remain adjacent.
///
/// The surviving spider keeps the smaller id and the sum of both phases.
/// Extra parallel wires between the pair become self-loops; legs of both
/// kinds are kept as they are, so bastard spiders fuse like any other.
/// A classical wire that was the pair's only classical connection is kept
/// as a classical self-loop: it still marks the merged spider as decohered.
pub fn fuse_spiders(d: &Diagram) -> Diagram {
    let mut current = d.clone();
    while let Some(next) = fuse_once(&current) {
        current = next;
    }
    current
}

/// Like [`fuse_spiders`] but returns every intermediate diagram, starting
/// with the input and ending with the fixpoint.
pub fn fuse_spiders_traced(d: &Diagram) -> Vec<Diagram> {
    let mut steps = vec![d.clone()];
    while let Some(next) = fuse_once(steps.last().unwrap()) {
        steps.push(next);
    }
    steps
}

/// The first fusable pair in edge order, if any.
pub fn find_fusable(d: &Diagram) -> Option<(usize, NodeId, NodeId)> {
    d.edges().iter().enumerate().find_map(|(i, e)| {
        if e.a == e.b {
            return None;
        }
        let ca = d.node(e.a)?.colour()?;
        let cb = d.node(e.b)?.colour()?;
        (ca == cb).then_some((i, e.a.min(e.b), e.a.max(e.b)))
    })
}

/// Performs a single fusion step, or `None` at the fixpoint.
pub fn fuse_once(d: &Diagram) -> Option<Diagram> {
    let (edge_idx, keep, gone) = find_fusable(d)?;
    let (mut nodes, mut edges) = d.parts();
    let merged_phase = nodes[&keep].phase()? + nodes[&gone].phase()?;
    let merged = NodeKind::spider(nodes[&keep].colour()?, merged_phase);
    nodes.insert(keep, merged);
    nodes.remove(&gone);
    let removed = edges.remove(edge_idx);
    for e in &mut edges {
        if e.a == gone {
            e.a = keep;
        }
        if e.b == gone {
            e.b = keep;
        }
    }
    let classical_left = edges.iter().any(|e| (e.a == keep || e.b == keep) && e.kind == WireKind::Classical);
    if removed.kind == WireKind::Classical && !classical_left {
        edges.push(Edge::new(keep, keep, WireKind::Classical));
    }
    Some(d.with_parts(nodes, edges).expect("fusion preserves validity"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zx::{equal_up_to_scalar, evaluate_doubled, evaluate_pure, DiagramBuilder, Phase};

    const Q: WireKind = WireKind::Quantum;

    #[test]
    fn two_quarter_turns_make_a_half_turn() {
        let mut b = DiagramBuilder::new();
        let i = b.input();
        let s1 = b.z(Phase::pi_frac(1, 2));
        let s2 = b.z(Phase::pi_frac(1, 2));
        let o = b.output();
        b.connect(i, s1, Q).connect(s1, s2, Q).connect(s2, o, Q);
        let d = b.build().unwrap();
        let fused = fuse_spiders(&d);
        assert_eq!(fused.spider_count(), 1);
        let (_, kind) = fused.nodes().find(|(_, k)| k.is_spider()).unwrap();
        assert!(kind.phase().unwrap().approx_eq(Phase::PI, 1e-12));
        assert!(equal_up_to_scalar(&evaluate_pure(&d).unwrap(), &evaluate_pure(&fused).unwrap(), 1e-12).unwrap());
    }

    #[test]
    fn different_colours_never_fuse() {
        let mut b = DiagramBuilder::new();
        let i = b.input();
        let z = b.z(Phase::new(0.3));
        let x = b.x(Phase::new(1.1));
        let o = b.output();
        b.connect(i, z, Q).connect(z, x, Q).connect(x, o, Q);
        let d = b.build().unwrap();
        assert_eq!(fuse_spiders(&d), d);
    }

    #[test]
    fn parallel_wires_become_loops() {
        let mut b = DiagramBuilder::new();
        let i = b.input();
        let s1 = b.x(Phase::new(0.7));
        let s2 = b.x(Phase::new(0.2));
        let o = b.output();
        b.connect(i, s1, Q).connect(s1, s2, Q).connect(s1, s2, Q).connect(s2, o, Q);
        let d = b.build().unwrap();
        let fused = fuse_spiders(&d);
        assert_eq!(fused.spider_count(), 1);
        assert!(fused.edges().iter().any(|e| e.a == e.b));
        assert!(equal_up_to_scalar(&evaluate_pure(&d).unwrap(), &evaluate_pure(&fused).unwrap(), 1e-12).unwrap());
        assert!(equal_up_to_scalar(&evaluate_doubled(&d), &evaluate_doubled(&fused), 1e-12).unwrap());
    }

    #[test]
    fn classical_link_keeps_decoherence() {
        let mut b = DiagramBuilder::new();
        let i = b.input();
        let s1 = b.x(Phase::ZERO);
        let s2 = b.x(Phase::ZERO);
        let o = b.output();
        b.connect(i, s1, Q).connect(s1, s2, WireKind::Classical).connect(s2, o, Q);
        let d = b.build().unwrap();
        let fused = fuse_spiders(&d);
        assert_eq!(fused.spider_count(), 1);
        assert!(fused.has_classical());
        assert!(equal_up_to_scalar(&evaluate_doubled(&d), &evaluate_doubled(&fused), 0.0).unwrap());
    }

    #[test]
    fn trace_ends_at_fixpoint() {
        let d = crate::zx::Diagram::spider(crate::zx::Colour::Green, Phase::ZERO, 1, 1, Q)
            .compose(&crate::zx::Diagram::spider(crate::zx::Colour::Green, Phase::ZERO, 1, 1, Q))
            .unwrap()
            .compose(&crate::zx::Diagram::spider(crate::zx::Colour::Green, Phase::ZERO, 1, 1, Q))
            .unwrap();
        let steps = fuse_spiders_traced(&d);
        assert_eq!(steps.len(), 3);
        assert!(fuse_once(steps.last().unwrap()).is_none());
    }
}
