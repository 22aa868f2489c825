use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use super::SimError;
use crate::zx::Colour;

const ORTHO_TOL: f64 = 1e-12;

/// Two orthonormal single-qubit eigenstates with outcome labels.
#[derive(Clone, Debug, PartialEq)]
pub struct MeasurementBasis {
    label: String,
    states: [[Complex64; 2]; 2],
    outcome_labels: [String; 2],
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

impl MeasurementBasis {
    pub fn new(
        label: impl Into<String>,
        states: [[Complex64; 2]; 2],
        outcome_labels: [String; 2],
    ) -> Result<Self, SimError> {
        let dot = |a: &[Complex64; 2], b: &[Complex64; 2]| a[0].conj() * b[0] + a[1].conj() * b[1];
        let [s0, s1] = &states;
        if (dot(s0, s0).re - 1.0).abs() > ORTHO_TOL
            || (dot(s1, s1).re - 1.0).abs() > ORTHO_TOL
            || dot(s0, s1).norm() > ORTHO_TOL
        {
            return Err(SimError::NonOrthonormal);
        }
        Ok(MeasurementBasis { label: label.into(), states, outcome_labels })
    }

    pub fn z() -> Self {
        MeasurementBasis {
            label: "Z".into(),
            states: [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(1.0, 0.0)]],
            outcome_labels: ["0".into(), "1".into()],
        }
    }

    pub fn x() -> Self {
        let h = FRAC_1_SQRT_2;
        MeasurementBasis {
            label: "X".into(),
            states: [[c(h, 0.0), c(h, 0.0)], [c(h, 0.0), c(-h, 0.0)]],
            outcome_labels: ["+".into(), "-".into()],
        }
    }

    pub fn of_colour(colour: Colour) -> Self {
        match colour {
            Colour::Green => Self::z(),
            Colour::Red => Self::x(),
        }
    }

    /// Eigenstates `cos θ|0⟩ + sin θ|1⟩` and `−sin θ|0⟩ + cos θ|1⟩`: a
    /// polariser at angle θ, i.e. Bloch angle 2θ in the X–Z plane.
    pub fn real_plane(theta: f64) -> Self {
        let (s, co) = theta.sin_cos();
        MeasurementBasis {
            label: format!("real({theta})"),
            states: [[c(co, 0.0), c(s, 0.0)], [c(-s, 0.0), c(co, 0.0)]],
            outcome_labels: ["0".into(), "1".into()],
        }
    }

    /// Eigenstates `(|0⟩ ± e^{iφ}|1⟩)/√2` on the Bloch equator.
    pub fn equatorial(phi: f64) -> Self {
        let h = FRAC_1_SQRT_2;
        let e = Complex64::from_polar(h, phi);
        MeasurementBasis {
            label: format!("equator({phi})"),
            states: [[c(h, 0.0), e], [c(h, 0.0), -e]],
            outcome_labels: ["+".into(), "-".into()],
        }
    }

    pub fn with_outcome_labels(mut self, labels: [String; 2]) -> Self {
        self.outcome_labels = labels;
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn state(&self, index: usize) -> &[Complex64; 2] {
        &self.states[index]
    }

    pub fn outcome_label(&self, index: usize) -> &str {
        &self.outcome_labels[index]
    }
}
