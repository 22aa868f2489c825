//! Ready-made diagrams: measurement and encoding spiders, Bell cups,
//! single-qubit unitaries, and both sides of the measurement equation.

use num_complex::Complex64;

use super::{Colour, Diagram, DiagramBuilder, NodeKind, Phase, WireKind, ZxError};

const Q: WireKind = WireKind::Quantum;
const C: WireKind = WireKind::Classical;

/// Bastard spider with one quantum input and one classical output.
pub fn measure(colour: Colour) -> Diagram {
    let mut b = DiagramBuilder::new();
    let i = b.input();
    let s = b.add(NodeKind::spider(colour, Phase::ZERO));
    let o = b.output();
    b.connect(i, s, Q).connect(s, o, C);
    b.build().expect("measurement spider is valid")
}

/// Bastard spider with one classical input and one quantum output.
pub fn encode(colour: Colour) -> Diagram {
    let mut b = DiagramBuilder::new();
    let i = b.input();
    let s = b.add(NodeKind::spider(colour, Phase::ZERO));
    let o = b.output();
    b.connect(i, s, C).connect(s, o, Q);
    b.build().expect("encoding spider is valid")
}

/// Two-output phase-free spider: the unnormalised Bell state in either colour.
pub fn bell_cup(colour: Colour) -> Diagram {
    Diagram::spider(colour, Phase::ZERO, 0, 2, Q)
}

/// ZXZ Euler angles `(first, middle, last)` with `u ∝ Z(last)·X(middle)·Z(first)`.
pub fn euler_zxz(u: [[Complex64; 2]; 2]) -> Result<(Phase, Phase, Phase), ZxError> {
    if !is_unitary(u, 1e-9) {
        return Err(ZxError::NotUnitary);
    }
    let eps = 1e-12;
    let c = u[0][0].norm();
    let s = u[0][1].norm();
    let middle = 2.0 * s.atan2(c);
    let minus_i = Complex64::new(0.0, -1.0);
    let i = Complex64::new(0.0, 1.0);
    let (first, last);
    if s < eps {
        let v11 = u[1][1] / (u[0][0] / c);
        first = 0.0;
        last = v11.arg();
    } else if c < eps {
        // anti-diagonal: fix first = 0, so v01 = -i·s
        let g = u[0][1] / (minus_i * s);
        let v10 = u[1][0] / g;
        first = 0.0;
        last = (i * v10).arg();
    } else {
        let g = u[0][0] / c;
        let v01 = u[0][1] / g;
        let v10 = u[1][0] / g;
        first = (i * v01).arg();
        last = (i * v10).arg();
    }
    Ok((Phase::new(first), Phase::new(middle), Phase::new(last)))
}

/// A 1→1 diagram proportional to the given unitary.
pub fn unitary(u: [[Complex64; 2]; 2]) -> Result<Diagram, ZxError> {
    let (first, middle, last) = euler_zxz(u)?;
    let mut b = DiagramBuilder::new();
    let i = b.input();
    let mut prev = i;
    for kind in [NodeKind::Z(first), NodeKind::X(middle), NodeKind::Z(last)] {
        if kind.phase().is_some_and(Phase::is_zero) {
            continue;
        }
        let n = b.add(kind);
        b.connect(prev, n, Q);
        prev = n;
    }
    let o = b.output();
    b.connect(prev, o, Q);
    b.build()
}

pub fn is_unitary(u: [[Complex64; 2]; 2], tol: f64) -> bool {
    for r in 0..2 {
        for c in 0..2 {
            let dot: Complex64 = (0..2).map(|k| u[k][r].conj() * u[k][c]).sum();
            let expected = if r == c { 1.0 } else { 0.0 };
            if (dot - Complex64::new(expected, 0.0)).norm() > tol {
                return false;
            }
        }
    }
    true
}

/// Entangled pair with the first qubit measured, sameness gate left as a bare
/// wire: outputs are `[classical outcome, partner qubit]`.
pub fn unfolded_measurement_plain(colour: Colour) -> Diagram {
    bell_cup(Colour::Green)
        .compose(&measure(colour).tensor(&Diagram::wire(Q)))
        .expect("arity matches")
}

/// The same diagram with the sameness gate and the cup drawn as spiders of
/// the measurement's colour, ready for fusion.
pub fn unfolded_measurement(colour: Colour) -> Diagram {
    let gate = Diagram::spider(colour, Phase::ZERO, 1, 1, Q);
    bell_cup(colour)
        .compose(&gate.tensor(&Diagram::wire(Q)))
        .and_then(|d| d.compose(&measure(colour).tensor(&Diagram::wire(Q))))
        .expect("arity matches")
}

/// Compact form: one bastard spider emitting the classical outcome and the
/// partner qubit prepared in the matching eigenstate.
pub fn compact_measurement(colour: Colour) -> Diagram {
    let mut b = DiagramBuilder::new();
    let s = b.add(NodeKind::spider(colour, Phase::ZERO));
    let oc = b.output();
    let oq = b.output();
    b.connect(s, oc, C).connect(s, oq, Q);
    b.build().expect("compact measurement is valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zx::{equal_up_to_scalar, evaluate_pure, Matrix};
    use std::f64::consts::FRAC_1_SQRT_2;

    fn to_matrix(u: [[Complex64; 2]; 2]) -> Matrix {
        Matrix::from_rows(vec![u[0].to_vec(), u[1].to_vec()])
    }

    fn rotation(theta: f64, phi: f64, lambda: f64) -> [[Complex64; 2]; 2] {
        let (c, s) = ((theta / 2.0).cos(), (theta / 2.0).sin());
        [
            [Complex64::new(c, 0.0), -Complex64::from_polar(s, lambda)],
            [Complex64::from_polar(s, phi), Complex64::from_polar(c, phi + lambda)],
        ]
    }

    #[test]
    fn euler_reconstructs_unitaries() {
        let h = FRAC_1_SQRT_2;
        let mut cases = vec![
            [[Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)], [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)]],
            [[Complex64::new(h, 0.0), Complex64::new(h, 0.0)], [Complex64::new(h, 0.0), Complex64::new(-h, 0.0)]],
            [[Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)], [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)]],
            [[Complex64::new(0.0, 0.0), Complex64::new(0.0, -1.0)], [Complex64::new(0.0, 1.0), Complex64::new(0.0, 0.0)]],
        ];
        for k in 0..20 {
            let t = k as f64 * 0.37;
            cases.push(rotation(t, 1.3 * t + 0.2, -0.7 * t));
        }
        for u in cases {
            let d = unitary(u).unwrap();
            let m = evaluate_pure(&d).unwrap();
            assert!(equal_up_to_scalar(&m, &to_matrix(u), 1e-9).unwrap(), "{u:?}");
        }
    }

    #[test]
    fn non_unitary_rejected() {
        let z = Complex64::new(0.0, 0.0);
        let one = Complex64::new(1.0, 0.0);
        assert_eq!(unitary([[one, one], [z, one]]).unwrap_err(), ZxError::NotUnitary);
    }
}
