use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::{Phase, ZxError};

pub type NodeId = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WireKind {
    Quantum,
    Classical,
}

impl WireKind {
    pub fn code(self) -> &'static str {
        match self {
            WireKind::Quantum => "q",
            WireKind::Classical => "c",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Input,
    Output,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Colour {
    /// Z spider.
    Green,
    /// X spider.
    Red,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum NodeKind {
    Z(Phase),
    X(Phase),
    Hadamard,
    Boundary { direction: Direction, position: usize },
}

impl NodeKind {
    pub fn spider(colour: Colour, phase: Phase) -> Self {
        match colour {
            Colour::Green => NodeKind::Z(phase),
            Colour::Red => NodeKind::X(phase),
        }
    }

    pub fn colour(&self) -> Option<Colour> {
        match self {
            NodeKind::Z(_) => Some(Colour::Green),
            NodeKind::X(_) => Some(Colour::Red),
            _ => None,
        }
    }

    pub fn phase(&self) -> Option<Phase> {
        match *self {
            NodeKind::Z(p) | NodeKind::X(p) => Some(p),
            _ => None,
        }
    }

    pub fn is_spider(&self) -> bool {
        self.colour().is_some()
    }

    pub fn is_boundary(&self) -> bool {
        matches!(self, NodeKind::Boundary { .. })
    }
}

/// An undirected wire. Self-loops (`a == b`) are allowed on spiders.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Edge {
    pub a: NodeId,
    pub b: NodeId,
    pub kind: WireKind,
}

impl Edge {
    pub fn new(a: NodeId, b: NodeId, kind: WireKind) -> Self {
        Edge { a, b, kind }
    }

    pub fn other(&self, n: NodeId) -> NodeId {
        if self.a == n {
            self.b
        } else {
            self.a
        }
    }

    pub fn touches(&self, n: NodeId) -> bool {
        self.a == n || self.b == n
    }

    fn normalized(self) -> Edge {
        Edge { a: self.a.min(self.b), b: self.a.max(self.b), kind: self.kind }
    }
}

/// An open graph of spiders, Hadamard boxes and boundaries.
///
/// Values are immutable once built: every operation returns a new diagram,
/// and construction always goes through [`Diagram::from_parts`] validation.
#[derive(Clone, Debug, PartialEq)]
pub struct Diagram {
    nodes: BTreeMap<NodeId, NodeKind>,
    edges: Vec<Edge>,
    inputs: Vec<NodeId>,
    outputs: Vec<NodeId>,
}

impl Diagram {
    /// The diagram with no nodes and no boundaries (unit of `tensor`).
    pub fn empty() -> Self {
        Diagram { nodes: BTreeMap::new(), edges: Vec::new(), inputs: Vec::new(), outputs: Vec::new() }
    }

    /// A single bare wire of the given kind.
    pub fn wire(kind: WireKind) -> Self {
        let mut b = DiagramBuilder::new();
        let i = b.input();
        let o = b.output();
        b.connect(i, o, kind);
        b.build().expect("bare wire is valid")
    }

    /// `n` parallel quantum wires.
    pub fn identity(n: usize) -> Self {
        (0..n).fold(Diagram::empty(), |d, _| d.tensor(&Diagram::wire(WireKind::Quantum)))
    }

    /// A lone spider whose legs all have kind `kind`.
    pub fn spider(colour: Colour, phase: Phase, n_in: usize, n_out: usize, kind: WireKind) -> Self {
        let mut b = DiagramBuilder::new();
        let s = b.add(NodeKind::spider(colour, phase));
        for _ in 0..n_in {
            let i = b.input();
            b.connect(i, s, kind);
        }
        for _ in 0..n_out {
            let o = b.output();
            b.connect(s, o, kind);
        }
        b.build().expect("lone spider is valid")
    }

    pub fn hadamard() -> Self {
        let mut b = DiagramBuilder::new();
        let i = b.input();
        let h = b.add(NodeKind::Hadamard);
        let o = b.output();
        b.connect(i, h, WireKind::Quantum);
        b.connect(h, o, WireKind::Quantum);
        b.build().expect("hadamard box is valid")
    }

    /// Assembles a diagram from raw parts and checks every structural invariant.
    pub fn from_parts(
        nodes: BTreeMap<NodeId, NodeKind>,
        edges: Vec<Edge>,
        inputs: Vec<NodeId>,
        outputs: Vec<NodeId>,
    ) -> Result<Self, ZxError> {
        let d = Diagram { nodes, edges, inputs, outputs };
        d.validate()?;
        Ok(d)
    }

    fn validate(&self) -> Result<(), ZxError> {
        for e in &self.edges {
            for n in [e.a, e.b] {
                if !self.nodes.contains_key(&n) {
                    return Err(ZxError::UnknownNode(n));
                }
            }
        }
        let mut seen = BTreeSet::new();
        for (dir, list) in [(Direction::Input, &self.inputs), (Direction::Output, &self.outputs)] {
            for (pos, &n) in list.iter().enumerate() {
                match self.nodes.get(&n) {
                    Some(NodeKind::Boundary { direction, position })
                        if *direction == dir && *position == pos => {}
                    _ => return Err(ZxError::BoundaryMismatch(n)),
                }
                if !seen.insert(n) {
                    return Err(ZxError::BoundaryMismatch(n));
                }
            }
        }
        for (&id, kind) in &self.nodes {
            let legs = self.legs(id);
            match kind {
                NodeKind::Boundary { .. } => {
                    if legs.len() != 1 {
                        return Err(ZxError::BadDegree { node: id, expected: 1, found: legs.len() });
                    }
                    if !seen.contains(&id) {
                        return Err(ZxError::BoundaryMismatch(id));
                    }
                }
                NodeKind::Hadamard => {
                    if legs.len() != 2 {
                        return Err(ZxError::BadDegree { node: id, expected: 2, found: legs.len() });
                    }
                    if legs.iter().any(|e| e.kind == WireKind::Classical) {
                        return Err(ZxError::ClassicalHadamard(id));
                    }
                }
                NodeKind::Z(_) | NodeKind::X(_) => {}
            }
        }
        Ok(())
    }

    pub fn nodes(&self) -> impl Iterator<Item = (NodeId, &NodeKind)> + '_ {
        self.nodes.iter().map(|(&id, k)| (id, k))
    }

    pub fn node(&self, id: NodeId) -> Option<&NodeKind> {
        self.nodes.get(&id)
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn spider_count(&self) -> usize {
        self.nodes.values().filter(|k| k.is_spider()).count()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn inputs(&self) -> &[NodeId] {
        &self.inputs
    }

    pub fn outputs(&self) -> &[NodeId] {
        &self.outputs
    }

    /// Edge ends incident on `n`; a self-loop appears twice.
    pub fn legs(&self, n: NodeId) -> Vec<&Edge> {
        let mut out = Vec::new();
        for e in &self.edges {
            if e.a == n {
                out.push(e);
            }
            if e.b == n {
                out.push(e);
            }
        }
        out
    }

    pub fn degree(&self, n: NodeId) -> usize {
        self.legs(n).len()
    }

    /// Wire kind of each input boundary, in order.
    pub fn input_kinds(&self) -> Vec<WireKind> {
        self.inputs.iter().map(|&n| self.legs(n)[0].kind).collect()
    }

    pub fn output_kinds(&self) -> Vec<WireKind> {
        self.outputs.iter().map(|&n| self.legs(n)[0].kind).collect()
    }

    pub fn has_classical(&self) -> bool {
        self.edges.iter().any(|e| e.kind == WireKind::Classical)
    }

    /// Nodes that are spiders with legs of both kinds.
    pub fn is_bastard(&self, n: NodeId) -> bool {
        let legs = self.legs(n);
        legs.iter().any(|e| e.kind == WireKind::Classical) && legs.iter().any(|e| e.kind == WireKind::Quantum)
    }

    fn next_id(&self) -> NodeId {
        self.nodes.keys().next_back().map_or(0, |k| k + 1)
    }

    /// Disjoint union; boundaries are concatenated left then right.
    pub fn tensor(&self, right: &Diagram) -> Diagram {
        let offset = self.next_id();
        let mut nodes = self.nodes.clone();
        let n_in = self.inputs.len();
        let n_out = self.outputs.len();
        for (&id, &kind) in &right.nodes {
            let kind = match kind {
                NodeKind::Boundary { direction: Direction::Input, position } => {
                    NodeKind::Boundary { direction: Direction::Input, position: position + n_in }
                }
                NodeKind::Boundary { direction: Direction::Output, position } => {
                    NodeKind::Boundary { direction: Direction::Output, position: position + n_out }
                }
                k => k,
            };
            nodes.insert(id + offset, kind);
        }
        let mut edges = self.edges.clone();
        edges.extend(right.edges.iter().map(|e| Edge::new(e.a + offset, e.b + offset, e.kind)));
        let mut inputs = self.inputs.clone();
        inputs.extend(right.inputs.iter().map(|n| n + offset));
        let mut outputs = self.outputs.clone();
        outputs.extend(right.outputs.iter().map(|n| n + offset));
        Diagram { nodes, edges, inputs, outputs }
    }

    /// Sequential composition: `self` first, then `second`, plugging outputs
    /// of `self` into inputs of `second` in order.
    pub fn compose(&self, second: &Diagram) -> Result<Diagram, ZxError> {
        if self.outputs.len() != second.inputs.len() {
            return Err(ZxError::ArityMismatch { outputs: self.outputs.len(), inputs: second.inputs.len() });
        }
        for (pos, (a, b)) in self.output_kinds().into_iter().zip(second.input_kinds()).enumerate() {
            if a != b {
                return Err(ZxError::WireKindMismatch { position: pos, output: a, input: b });
            }
        }
        let offset = self.next_id();
        let mut nodes = self.nodes.clone();
        for (&id, &kind) in &second.nodes {
            nodes.insert(id + offset, kind);
        }
        let mut edges = self.edges.clone();
        edges.extend(second.edges.iter().map(|e| Edge::new(e.a + offset, e.b + offset, e.kind)));
        let mut joints = Vec::new();
        for (&o, &i) in self.outputs.iter().zip(&second.inputs) {
            let kind = self.legs(o)[0].kind;
            edges.push(Edge::new(o, i + offset, kind));
            joints.push(o);
            joints.push(i + offset);
        }
        for j in joints {
            splice_out(&mut nodes, &mut edges, j);
        }
        let inputs = self.inputs.clone();
        let outputs: Vec<NodeId> = second.outputs.iter().map(|n| n + offset).collect();
        Diagram::from_parts(nodes, edges, inputs, outputs)
    }

    /// Rebuilds with new interior parts and the same boundaries; used by rewrites.
    pub(crate) fn with_parts(
        &self,
        nodes: BTreeMap<NodeId, NodeKind>,
        edges: Vec<Edge>,
    ) -> Result<Diagram, ZxError> {
        Diagram::from_parts(nodes, edges, self.inputs.clone(), self.outputs.clone())
    }

    pub(crate) fn parts(&self) -> (BTreeMap<NodeId, NodeKind>, Vec<Edge>) {
        (self.nodes.clone(), self.edges.clone())
    }

    /// Structural equality up to renaming of interior nodes. Boundaries must
    /// match position for position; phases are compared with `tol`.
    pub fn isomorphic(&self, other: &Diagram, tol: f64) -> bool {
        if self.nodes.len() != other.nodes.len()
            || self.edges.len() != other.edges.len()
            || self.inputs.len() != other.inputs.len()
            || self.outputs.len() != other.outputs.len()
        {
            return false;
        }
        let mut map: BTreeMap<NodeId, NodeId> = BTreeMap::new();
        for (a, b) in self.inputs.iter().zip(&other.inputs).chain(self.outputs.iter().zip(&other.outputs)) {
            map.insert(*a, *b);
        }
        let interior_a: Vec<NodeId> =
            self.nodes.iter().filter(|(_, k)| !k.is_boundary()).map(|(&id, _)| id).collect();
        let interior_b: Vec<NodeId> =
            other.nodes.iter().filter(|(_, k)| !k.is_boundary()).map(|(&id, _)| id).collect();
        let mut used = vec![false; interior_b.len()];
        self.extend_iso(other, tol, &interior_a, &interior_b, &mut used, &mut map)
    }

    fn extend_iso(
        &self,
        other: &Diagram,
        tol: f64,
        todo: &[NodeId],
        pool: &[NodeId],
        used: &mut [bool],
        map: &mut BTreeMap<NodeId, NodeId>,
    ) -> bool {
        let Some((&next, rest)) = todo.split_first() else {
            return self.edges_match(other, map);
        };
        let kind = self.nodes[&next];
        for (slot, &cand) in pool.iter().enumerate() {
            if used[slot] || !kinds_match(&kind, &other.nodes[&cand], tol) {
                continue;
            }
            if self.degree(next) != other.degree(cand) {
                continue;
            }
            used[slot] = true;
            map.insert(next, cand);
            if self.extend_iso(other, tol, rest, pool, used, map) {
                return true;
            }
            map.remove(&next);
            used[slot] = false;
        }
        false
    }

    fn edges_match(&self, other: &Diagram, map: &BTreeMap<NodeId, NodeId>) -> bool {
        let mut mine: Vec<Edge> =
            self.edges.iter().map(|e| Edge::new(map[&e.a], map[&e.b], e.kind).normalized()).collect();
        let mut theirs: Vec<Edge> = other.edges.iter().map(|e| e.normalized()).collect();
        mine.sort();
        theirs.sort();
        mine == theirs
    }
}

fn kinds_match(a: &NodeKind, b: &NodeKind, tol: f64) -> bool {
    match (a, b) {
        (NodeKind::Z(p), NodeKind::Z(q)) | (NodeKind::X(p), NodeKind::X(q)) => p.approx_eq(*q, tol),
        (NodeKind::Hadamard, NodeKind::Hadamard) => true,
        _ => false,
    }
}

/// Removes a degree-2 pass-through node, joining its two neighbours. A node
/// whose two legs form a closed loop becomes a phase-free Z spider with a
/// self-loop, which carries the same scalar (the wire dimension).
fn splice_out(nodes: &mut BTreeMap<NodeId, NodeKind>, edges: &mut Vec<Edge>, n: NodeId) {
    let idx: Vec<usize> = edges.iter().enumerate().filter(|(_, e)| e.touches(n)).map(|(i, _)| i).collect();
    match idx.as_slice() {
        [only] if edges[*only].a == n && edges[*only].b == n => {
            nodes.insert(n, NodeKind::Z(Phase::ZERO));
        }
        [first, second] => {
            let (e1, e2) = (edges[*first], edges[*second]);
            let p = e1.other(n);
            let q = e2.other(n);
            edges.remove(*second);
            edges.remove(*first);
            edges.push(Edge::new(p, q, e1.kind));
            nodes.remove(&n);
        }
        _ => unreachable!("joint nodes always have exactly two legs"),
    }
}

/// Incremental construction of a [`Diagram`]. Boundary positions are
/// assigned in the order `input`/`output` are called.
#[derive(Debug, Default)]
pub struct DiagramBuilder {
    nodes: BTreeMap<NodeId, NodeKind>,
    edges: Vec<Edge>,
    inputs: Vec<NodeId>,
    outputs: Vec<NodeId>,
}

impl DiagramBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, kind: NodeKind) -> NodeId {
        let id = self.nodes.len();
        self.nodes.insert(id, kind);
        id
    }

    pub fn z(&mut self, phase: Phase) -> NodeId {
        self.add(NodeKind::Z(phase))
    }

    pub fn x(&mut self, phase: Phase) -> NodeId {
        self.add(NodeKind::X(phase))
    }

    pub fn hadamard(&mut self) -> NodeId {
        self.add(NodeKind::Hadamard)
    }

    pub fn input(&mut self) -> NodeId {
        let id = self.add(NodeKind::Boundary { direction: Direction::Input, position: self.inputs.len() });
        self.inputs.push(id);
        id
    }

    pub fn output(&mut self) -> NodeId {
        let id = self.add(NodeKind::Boundary { direction: Direction::Output, position: self.outputs.len() });
        self.outputs.push(id);
        id
    }

    pub fn connect(&mut self, a: NodeId, b: NodeId, kind: WireKind) -> &mut Self {
        self.edges.push(Edge::new(a, b, kind));
        self
    }

    pub fn build(self) -> Result<Diagram, ZxError> {
        Diagram::from_parts(self.nodes, self.edges, self.inputs, self.outputs)
    }
}

impl fmt::Display for Diagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&super::text::to_text(self))
    }
}
