//! Seeded statevector simulation for a handful of qubits.
//!
//! Measurement is a full projection onto one eigenstate of the chosen basis,
//! so whatever was entangled with the measured qubit collapses with it; no
//! lookup tables for "the corresponding state".
//!
//! Sampling rule: one uniform `u` per measurement; outcome 0 iff `u < p₀`.

mod basis;
mod rng;
mod state;

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub use basis::MeasurementBasis;
pub use rng::{RngSeed, RngStream};
pub use state::StateVector;

pub const MAX_QUBITS: usize = 8;

/// Single-qubit gate, row-major.
pub type Gate1 = [[Complex64; 2]; 2];

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SimError {
    #[error("qubit {qubit} out of range for {n} qubits")]
    InvalidQubitIndex { qubit: usize, n: usize },
    #[error("qubit count must be 1..={MAX_QUBITS}, got {0}")]
    QubitCount(usize),
    #[error("amplitude count {0} is not a power of two ≥ 2")]
    BadLength(usize),
    #[error("state norm is {0}, expected 1")]
    NotNormalized(f64),
    #[error("basis states are not orthonormal")]
    NonOrthonormal,
    #[error("gate needs two different qubits, got {0} twice")]
    SameQubit(usize),
    #[error("forced outcome has probability zero")]
    ImpossibleOutcome,
    #[error("trials must be at least 1")]
    NoTrials,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Outcome {
    pub index: u8,
    pub label: String,
    pub probability: f64,
}

/// Where a measurement's outcome comes from.
pub enum Resolve<'a> {
    Sample(&'a mut RngStream),
    /// Manual mode: someone in the room decided. Must have nonzero probability.
    Forced(u8),
}

/// Measures `qubit` in `basis` and returns the outcome with the collapsed state.
pub fn measure(
    state: &StateVector,
    qubit: usize,
    basis: &MeasurementBasis,
    resolve: Resolve<'_>,
) -> Result<(Outcome, StateVector), SimError> {
    let p0 = state.probability(qubit, basis.state(0))?.clamp(0.0, 1.0);
    let index: u8 = match resolve {
        Resolve::Sample(rng) => u8::from(rng.uniform() >= p0),
        Resolve::Forced(i) => i.min(1),
    };
    let probability = if index == 0 { p0 } else { 1.0 - p0 };
    if probability <= 0.0 {
        return Err(SimError::ImpossibleOutcome);
    }
    let post = state.collapse(qubit, basis.state(index as usize))?;
    let outcome = Outcome { index, label: basis.outcome_label(index as usize).to_string(), probability };
    Ok((outcome, post))
}

/// `(|00⟩ + |11⟩)/√2`.
pub fn make_bell_pair() -> StateVector {
    let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
    let z = Complex64::new(0.0, 0.0);
    StateVector::from_amplitudes(vec![h, z, z, h]).expect("normalised")
}

/// The Bell pair with `u` applied to qubit 1: `(I ⊗ u)|Φ⁺⟩`.
pub fn bell_pair_through(u: &Gate1) -> StateVector {
    make_bell_pair().apply(1, u).expect("two qubits")
}

pub fn hadamard_gate() -> Gate1 {
    let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
    [[h, h], [h, -h]]
}

pub fn identity_gate() -> Gate1 {
    let (o, z) = (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0));
    [[o, z], [z, o]]
}

/// Fraction of `trials` fresh Bell pairs whose two outcomes share an index,
/// measuring qubit 0 in `b0` first and then qubit 1 in `b1`.
pub fn correlation_experiment(
    b0: &MeasurementBasis,
    b1: &MeasurementBasis,
    trials: usize,
    seed: RngSeed,
) -> Result<f64, SimError> {
    let (agree, _) = run_pairs(b0, b1, trials, seed)?;
    Ok(agree as f64 / trials as f64)
}

/// Returns (agreements, correlation sum Σ(±1)(±1)).
fn run_pairs(b0: &MeasurementBasis, b1: &MeasurementBasis, trials: usize, seed: RngSeed) -> Result<(u64, i64), SimError> {
    if trials == 0 {
        return Err(SimError::NoTrials);
    }
    let mut rng = RngStream::new(seed);
    let pair = make_bell_pair();
    let mut agree = 0;
    for _ in 0..trials {
        let (o0, s) = measure(&pair, 0, b0, Resolve::Sample(&mut rng))?;
        let (o1, _) = measure(&s, 1, b1, Resolve::Sample(&mut rng))?;
        agree += u64::from(o0.index == o1.index);
    }
    let trials = trials as i64;
    Ok((agree, 2 * agree as i64 - trials))
}

/// Polariser angles `(a, a′, b, b′)` for the two sides, see
/// [`MeasurementBasis::real_plane`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChshAngles {
    pub a: f64,
    pub a_prime: f64,
    pub b: f64,
    pub b_prime: f64,
}

impl ChshAngles {
    /// `(0, π/4, π/8, 3π/8)`; for Φ⁺ these reach 2√2.
    pub fn optimal() -> Self {
        use std::f64::consts::PI;
        ChshAngles { a: 0.0, a_prime: PI / 4.0, b: PI / 8.0, b_prime: 3.0 * PI / 8.0 }
    }
}

/// `S = E(a,b) − E(a,b′) + E(a′,b) + E(a′,b′)`, each correlator estimated
/// from `trials` pairs on its own derived stream.
pub fn chsh_value(angles: ChshAngles, trials: usize, seed: RngSeed) -> Result<f64, SimError> {
    let settings = [(angles.a, angles.b, 1.0), (angles.a, angles.b_prime, -1.0), (angles.a_prime, angles.b, 1.0), (angles.a_prime, angles.b_prime, 1.0)];
    let mut s = 0.0;
    for (k, (x, y, sign)) in settings.into_iter().enumerate() {
        let (_, corr) =
            run_pairs(&MeasurementBasis::real_plane(x), &MeasurementBasis::real_plane(y), trials, seed.derive(k as u64))?;
        s += sign * corr as f64 / trials as f64;
    }
    Ok(s)
}
