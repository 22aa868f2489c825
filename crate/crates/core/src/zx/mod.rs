//! Small ZX diagrams with quantum and classical wires.
//!
//! Diagrams are evaluated to matrices in two semantics (pure and doubled)
//! and compared up to a nonzero scalar. Spider fusion is the single rewrite;
//! it is checked against the matrix semantics rather than a normal form.

mod diagram;
mod eval;
mod fusion;
pub mod gadgets;
mod phase;
pub mod text;

pub use diagram::{Colour, Diagram, DiagramBuilder, Direction, Edge, NodeId, NodeKind, WireKind};
pub use eval::{equal_up_to_scalar, evaluate_doubled, evaluate_pure, fit_scalar, Matrix};
pub use fusion::{find_fusable, fuse_once, fuse_spiders, fuse_spiders_traced};
pub use phase::{format_angle, parse_angle, Phase};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ZxError {
    #[error("cannot compose: {outputs} outputs feed {inputs} inputs")]
    ArityMismatch { outputs: usize, inputs: usize },
    #[error("cannot compose: wire {position} is {output:?} on the left but {input:?} on the right")]
    WireKindMismatch { position: usize, output: WireKind, input: WireKind },
    #[error("pure semantics needs quantum wires only")]
    ClassicalWirePresent,
    #[error("matrix shapes differ: {left:?} vs {right:?}")]
    DimensionMismatch { left: (usize, usize), right: (usize, usize) },
    #[error("tolerance must be a non-negative number, got {0}")]
    InvalidTolerance(f64),
    #[error("edge references unknown node {0}")]
    UnknownNode(NodeId),
    #[error("node {node} must have degree {expected}, found {found}")]
    BadDegree { node: NodeId, expected: usize, found: usize },
    #[error("Hadamard node {0} touches a classical wire")]
    ClassicalHadamard(NodeId),
    #[error("boundary node {0} is inconsistent with the boundary lists")]
    BoundaryMismatch(NodeId),
    #[error("matrix is not unitary")]
    NotUnitary,
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    const Q: WireKind = WireKind::Quantum;
    const C: WireKind = WireKind::Classical;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn wire_composes_to_wire() {
        let w = Diagram::wire(Q);
        let ww = w.compose(&w).unwrap();
        assert!(ww.isomorphic(&w, 0.0));
        assert_eq!(evaluate_pure(&ww).unwrap(), Matrix::identity(2));
    }

    #[test]
    fn identity_spiders_compose_to_identity() {
        let z = Diagram::spider(Colour::Green, Phase::ZERO, 1, 1, Q);
        let zz = z.compose(&z).unwrap();
        assert_eq!(evaluate_pure(&zz).unwrap(), Matrix::identity(2));
    }

    #[test]
    fn compose_checks_arity_and_kinds() {
        let cup = Diagram::spider(Colour::Green, Phase::ZERO, 0, 2, Q);
        assert_eq!(
            cup.compose(&Diagram::wire(Q)).unwrap_err(),
            ZxError::ArityMismatch { outputs: 2, inputs: 1 }
        );
        let m = Diagram::spider(Colour::Green, Phase::ZERO, 0, 1, C);
        assert!(matches!(m.compose(&Diagram::wire(Q)), Err(ZxError::WireKindMismatch { position: 0, .. })));
    }

    #[test]
    fn cup_then_cap_leaves_a_loop_scalar() {
        let cup = Diagram::spider(Colour::Green, Phase::ZERO, 0, 2, Q);
        let cap = Diagram::wire(Q).tensor(&Diagram::wire(Q)).compose(&Diagram::spider(Colour::Green, Phase::ZERO, 2, 0, Q)).unwrap();
        let circle = cup.compose(&cap).unwrap();
        // tr(I) = 2 in pure semantics, 4 doubled
        assert_eq!(evaluate_pure(&circle).unwrap(), Matrix::from_real_rows(&[&[2.0]]));
        assert_eq!(evaluate_doubled(&circle), Matrix::from_real_rows(&[&[4.0]]));

        let bare = Diagram::wire(Q).tensor(&Diagram::wire(Q));
        let mut b = DiagramBuilder::new();
        let o0 = b.output();
        let o1 = b.output();
        b.connect(o0, o1, Q);
        let bare_cup = b.build().unwrap();
        let bare_cap = {
            let mut b = DiagramBuilder::new();
            let i0 = b.input();
            let i1 = b.input();
            b.connect(i0, i1, Q);
            b.build().unwrap()
        };
        let loop_only = bare_cup.compose(&bare).unwrap().compose(&bare_cap).unwrap();
        assert_eq!(evaluate_pure(&loop_only).unwrap(), Matrix::from_real_rows(&[&[2.0]]));
    }

    #[test]
    fn tensor_with_empty_is_unit() {
        let d = Diagram::spider(Colour::Red, Phase::new(0.4), 1, 2, Q);
        assert!(Diagram::empty().tensor(&d).isomorphic(&d, 0.0));
        assert!(d.tensor(&Diagram::empty()).isomorphic(&d, 0.0));
    }

    #[test]
    fn two_wires_are_the_four_by_four_identity() {
        let w = Diagram::wire(Q).tensor(&Diagram::wire(Q));
        assert_eq!(evaluate_pure(&w).unwrap(), Matrix::identity(4));
    }

    #[test]
    fn product_state_is_kronecker_product() {
        let z = Diagram::spider(Colour::Green, Phase::ZERO, 0, 1, Q);
        let x = Diagram::spider(Colour::Red, Phase::ZERO, 0, 1, Q);
        let both = evaluate_pure(&z.tensor(&x)).unwrap();
        let expected = evaluate_pure(&z).unwrap().kron(&evaluate_pure(&x).unwrap());
        assert_eq!(both, expected);
        // hand oracle: (1,1) ⊗ √2·(1,0)
        let h = 2.0 * FRAC_1_SQRT_2;
        assert!(equal_up_to_scalar(&both, &Matrix::column(vec![c(h), c(0.0), c(h), c(0.0)]), 1e-12).unwrap());
    }

    #[test]
    fn spider_matrices() {
        assert_eq!(evaluate_pure(&Diagram::spider(Colour::Green, Phase::ZERO, 1, 1, Q)).unwrap(), Matrix::identity(2));
        assert_eq!(
            evaluate_pure(&Diagram::spider(Colour::Green, Phase::ZERO, 0, 2, Q)).unwrap(),
            Matrix::column(vec![c(1.0), c(0.0), c(0.0), c(1.0)])
        );
        // Hadamard-conjugating the Z state (1,1) gives √2·(1,0); the Z state is |+⟩
        let x_state = evaluate_pure(&Diagram::spider(Colour::Red, Phase::ZERO, 0, 1, Q)).unwrap();
        assert!(equal_up_to_scalar(&x_state, &Matrix::column(vec![c(1.0), c(0.0)]), 1e-12).unwrap());
        let z_state = evaluate_pure(&Diagram::spider(Colour::Green, Phase::ZERO, 0, 1, Q)).unwrap();
        assert_eq!(z_state, Matrix::column(vec![c(1.0), c(1.0)]));
        let phased = evaluate_pure(&Diagram::spider(Colour::Green, Phase::pi_frac(1, 2), 1, 1, Q)).unwrap();
        assert!((phased[(1, 1)] - Complex64::new(0.0, 1.0)).norm() < 1e-15);
        assert_eq!(evaluate_pure(&Diagram::hadamard()).unwrap(), Matrix::hadamard());
    }

    #[test]
    fn pure_rejects_classical() {
        let m = Diagram::spider(Colour::Green, Phase::ZERO, 0, 1, C);
        assert_eq!(evaluate_pure(&m), Err(ZxError::ClassicalWirePresent));
    }

    #[test]
    fn measure_and_encode_spiders() {
        let measure = gadgets::measure(Colour::Green);
        let m = evaluate_doubled(&measure);
        // doubled |i><i| (index 0 and 3) to |i>, off-diagonals annihilated
        assert_eq!(m, Matrix::from_real_rows(&[&[1.0, 0.0, 0.0, 0.0], &[0.0, 0.0, 0.0, 1.0]]));
        let e = evaluate_doubled(&gadgets::encode(Colour::Green));
        assert_eq!(e, m.transpose());
        // X measurement: |±><±| go to |0>,|1>
        let mx = evaluate_doubled(&gadgets::measure(Colour::Red));
        let plus = [0.5, 0.5, 0.5, 0.5];
        let minus = [0.5, -0.5, -0.5, 0.5];
        let dot = |row: usize, v: &[f64; 4]| (0..4).map(|k| mx[(row, k)].re * v[k]).sum::<f64>();
        assert!((dot(0, &plus) - 1.0).abs() < 1e-15 && dot(1, &plus).abs() < 1e-15);
        assert!((dot(1, &minus) - 1.0).abs() < 1e-15 && dot(0, &minus).abs() < 1e-15);
    }

    #[test]
    fn doubled_of_pure_is_conjugate_square() {
        let d = Diagram::spider(Colour::Red, Phase::new(0.9), 1, 1, Q);
        let p = evaluate_pure(&d).unwrap();
        let mut conj = p.clone();
        for r in 0..2 {
            for c in 0..2 {
                conj[(r, c)] = p[(r, c)].conj();
            }
        }
        assert!(equal_up_to_scalar(&evaluate_doubled(&d), &p.kron(&conj), 1e-12).unwrap());
    }

    #[test]
    fn hadamard_on_classical_is_rejected() {
        let mut b = DiagramBuilder::new();
        let i = b.input();
        let h = b.hadamard();
        let o = b.output();
        b.connect(i, h, C).connect(h, o, C);
        assert_eq!(b.build().unwrap_err(), ZxError::ClassicalHadamard(1));
    }

    #[test]
    fn boundary_degree_enforced() {
        let mut b = DiagramBuilder::new();
        let i = b.input();
        let z = b.z(Phase::ZERO);
        b.connect(i, z, Q).connect(i, z, Q);
        assert!(matches!(b.build(), Err(ZxError::BadDegree { expected: 1, found: 2, .. })));
    }

    #[test]
    fn scalar_equality() {
        let i = Matrix::identity(2);
        assert!(equal_up_to_scalar(&i, &i.scale(c(3.0)), 1e-9).unwrap());
        assert!(!equal_up_to_scalar(&i, &Matrix::hadamard(), 1e-9).unwrap());
        let z = Matrix::zeros(2, 2);
        assert!(equal_up_to_scalar(&z, &z, 1e-9).unwrap());
        assert!(!equal_up_to_scalar(&z, &i, 1e-9).unwrap());
        assert!(!equal_up_to_scalar(&i, &z, 1e-9).unwrap());
        assert!(matches!(equal_up_to_scalar(&i, &Matrix::identity(4), 1e-9), Err(ZxError::DimensionMismatch { .. })));
        assert!(matches!(equal_up_to_scalar(&i, &i, f64::NAN), Err(ZxError::InvalidTolerance(_))));
        assert!(equal_up_to_scalar(&i, &i.scale(Complex64::from_polar(2.0, PI / 3.0)), 0.0).is_ok());
    }
}
