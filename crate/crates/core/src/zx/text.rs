//! Canonical text form of a diagram.
//!
//! ```text
//! zx 1
//! node 0 in 0
//! node 1 out 0
//! node 2 out 1
//! node 3 z 0
//! node 4 x pi/2
//! node 5 h
//! edge 0 3 q
//! edge 1 3 c
//! ```
//!
//! The first line is the format header and version. Nodes are numbered
//! densely: inputs by position, then outputs by position, then interior
//! nodes in their original order. Each node line is `node <id> <kind>` with
//! kind one of `in <pos>`, `out <pos>`, `z <phase>`, `x <phase>`, `h`.
//! Phases use `format_angle` (`pi`, `3pi/4`, or a decimal). Edge lines are
//! `edge <a> <b> <q|c>` with `a ≤ b`, sorted. Blank lines and lines starting
//! with `#` are ignored when parsing.

use std::collections::BTreeMap;

use super::phase::{format_angle, parse_angle};
use super::{Diagram, Direction, Edge, NodeId, NodeKind, Phase, WireKind, ZxError};

pub const HEADER: &str = "zx 1";

pub fn to_text(d: &Diagram) -> String {
    let mut order: Vec<NodeId> = d.inputs().to_vec();
    order.extend_from_slice(d.outputs());
    order.extend(d.nodes().filter(|(_, k)| !k.is_boundary()).map(|(id, _)| id));
    let renumber: BTreeMap<NodeId, usize> = order.iter().enumerate().map(|(i, &n)| (n, i)).collect();

    let mut out = String::from(HEADER);
    out.push('\n');
    for (new_id, &old) in order.iter().enumerate() {
        let kind = match d.node(old).expect("ordered node exists") {
            NodeKind::Boundary { direction: Direction::Input, position } => format!("in {position}"),
            NodeKind::Boundary { direction: Direction::Output, position } => format!("out {position}"),
            NodeKind::Z(p) => format!("z {}", format_angle(p.radians())),
            NodeKind::X(p) => format!("x {}", format_angle(p.radians())),
            NodeKind::Hadamard => "h".to_string(),
        };
        out.push_str(&format!("node {new_id} {kind}\n"));
    }
    let mut edges: Vec<(usize, usize, WireKind)> = d
        .edges()
        .iter()
        .map(|e| {
            let (a, b) = (renumber[&e.a], renumber[&e.b]);
            (a.min(b), a.max(b), e.kind)
        })
        .collect();
    edges.sort();
    for (a, b, k) in edges {
        out.push_str(&format!("edge {a} {b} {}\n", k.code()));
    }
    out
}

pub fn from_text(text: &str) -> Result<Diagram, ZxError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    match lines.next() {
        Some((_, l)) if l == HEADER => {}
        Some((n, _)) => return Err(ZxError::Syntax { line: n, message: format!("expected header `{HEADER}`") }),
        None => return Err(ZxError::Syntax { line: 1, message: format!("expected header `{HEADER}`") }),
    }
    let mut nodes = BTreeMap::new();
    let mut edges = Vec::new();
    let mut inputs: BTreeMap<usize, NodeId> = BTreeMap::new();
    let mut outputs: BTreeMap<usize, NodeId> = BTreeMap::new();
    for (line, l) in lines {
        let err = |message: &str| ZxError::Syntax { line, message: message.to_string() };
        let words: Vec<&str> = l.split_whitespace().collect();
        match words.as_slice() {
            ["node", id, rest @ ..] => {
                let id: NodeId = id.parse().map_err(|_| err("bad node id"))?;
                let kind = match rest {
                    ["in", p] | ["out", p] => {
                        let position: usize = p.parse().map_err(|_| err("bad boundary position"))?;
                        let direction = if rest[0] == "in" { Direction::Input } else { Direction::Output };
                        let map = if direction == Direction::Input { &mut inputs } else { &mut outputs };
                        if map.insert(position, id).is_some() {
                            return Err(err("duplicate boundary position"));
                        }
                        NodeKind::Boundary { direction, position }
                    }
                    ["z", p] => NodeKind::Z(Phase::new(parse_angle(p).ok_or_else(|| err("bad phase"))?)),
                    ["x", p] => NodeKind::X(Phase::new(parse_angle(p).ok_or_else(|| err("bad phase"))?)),
                    ["h"] => NodeKind::Hadamard,
                    _ => return Err(err("unknown node kind")),
                };
                if nodes.insert(id, kind).is_some() {
                    return Err(err("duplicate node id"));
                }
            }
            ["edge", a, b, k] => {
                let a: NodeId = a.parse().map_err(|_| err("bad edge endpoint"))?;
                let b: NodeId = b.parse().map_err(|_| err("bad edge endpoint"))?;
                let kind = match *k {
                    "q" => WireKind::Quantum,
                    "c" => WireKind::Classical,
                    _ => return Err(err("wire kind must be q or c")),
                };
                edges.push(Edge::new(a, b, kind));
            }
            _ => return Err(err("expected `node` or `edge`")),
        }
    }
    let collect = |m: BTreeMap<usize, NodeId>| -> Result<Vec<NodeId>, ZxError> {
        m.into_iter()
            .enumerate()
            .map(|(i, (pos, id))| if i == pos { Ok(id) } else { Err(ZxError::BoundaryMismatch(id)) })
            .collect()
    };
    Diagram::from_parts(nodes, edges, collect(inputs)?, collect(outputs)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zx::DiagramBuilder;

    #[test]
    fn text_round_trip_is_canonical() {
        let mut b = DiagramBuilder::new();
        let z = b.z(Phase::pi_frac(1, 2));
        let i = b.input();
        let h = b.hadamard();
        let o = b.output();
        let c = b.output();
        b.connect(i, h, WireKind::Quantum)
            .connect(h, z, WireKind::Quantum)
            .connect(z, o, WireKind::Quantum)
            .connect(c, z, WireKind::Classical);
        let d = b.build().unwrap();
        let text = to_text(&d);
        assert!(text.starts_with("zx 1\nnode 0 in 0\nnode 1 out 0\nnode 2 out 1\nnode 3 z pi/2\nnode 4 h\n"));
        let back = from_text(&text).unwrap();
        assert!(back.isomorphic(&d, 0.0));
        assert_eq!(to_text(&back), text);
    }

    #[test]
    fn rejects_garbage() {
        assert!(matches!(from_text(""), Err(ZxError::Syntax { .. })));
        assert!(matches!(from_text("zx 1\nnode 0 y 1"), Err(ZxError::Syntax { line: 2, .. })));
        assert!(matches!(from_text("zx 1\nnode 0 h\nedge 0 0 c\n"), Err(ZxError::ClassicalHadamard(0))));
        assert!(matches!(from_text("zx 1\nnode 0 in 1\nnode 1 z 0\nedge 0 1 q"), Err(ZxError::BoundaryMismatch(0))));
    }
}
