use num_complex::Complex64;

use super::{Gate1, SimError, MAX_QUBITS};

const NORM_TOL: f64 = 1e-12;

/// Pure state of `n` qubits. Qubit 0 is the most significant bit of the
/// amplitude index.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    n: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// `|0…0⟩`.
    pub fn zero(n: usize) -> Result<Self, SimError> {
        check_count(n)?;
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
        amps[0] = Complex64::new(1.0, 0.0);
        Ok(StateVector { n, amps })
    }

    /// Takes amplitudes as given; they must already have unit norm.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self, SimError> {
        let len = amps.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(SimError::BadLength(len));
        }
        let n = len.trailing_zeros() as usize;
        check_count(n)?;
        let norm = norm_sqr(&amps).sqrt();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(SimError::NotNormalized(norm));
        }
        Ok(StateVector { n, amps })
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        norm_sqr(&self.amps).sqrt()
    }

    fn check(&self, q: usize) -> Result<(), SimError> {
        if q >= self.n {
            return Err(SimError::InvalidQubitIndex { qubit: q, n: self.n });
        }
        Ok(())
    }

    fn mask(&self, q: usize) -> usize {
        1 << (self.n - 1 - q)
    }

    pub fn apply(&self, q: usize, u: &Gate1) -> Result<StateVector, SimError> {
        self.check(q)?;
        let m = self.mask(q);
        let mut amps = self.amps.clone();
        for i in (0..amps.len()).filter(|i| i & m == 0) {
            let (a0, a1) = (self.amps[i], self.amps[i | m]);
            amps[i] = u[0][0] * a0 + u[0][1] * a1;
            amps[i | m] = u[1][0] * a0 + u[1][1] * a1;
        }
        Ok(StateVector { n: self.n, amps })
    }

    pub fn cnot(&self, control: usize, target: usize) -> Result<StateVector, SimError> {
        self.check(control)?;
        self.check(target)?;
        if control == target {
            return Err(SimError::SameQubit(control));
        }
        let (c, t) = (self.mask(control), self.mask(target));
        let mut amps = self.amps.clone();
        for i in (0..amps.len()).filter(|i| i & c != 0 && i & t == 0) {
            amps.swap(i, i | t);
        }
        Ok(StateVector { n: self.n, amps })
    }

    /// `⟨v|` applied to qubit `q`: the unnormalised state of the others,
    /// still laid out over all `n` qubits with `q` forced to `|0⟩`.
    fn project(&self, q: usize, v: &[Complex64; 2]) -> Vec<Complex64> {
        let m = self.mask(q);
        let mut out = vec![Complex64::new(0.0, 0.0); self.amps.len()];
        for i in (0..self.amps.len()).filter(|i| i & m == 0) {
            out[i] = v[0].conj() * self.amps[i] + v[1].conj() * self.amps[i | m];
        }
        out
    }

    /// Born probability of finding qubit `q` in the single-qubit state `v`.
    pub fn probability(&self, q: usize, v: &[Complex64; 2]) -> Result<f64, SimError> {
        self.check(q)?;
        Ok(norm_sqr(&self.project(q, v)))
    }

    /// Renormalised state after qubit `q` is found in `v`; that qubit is left
    /// in `v` itself.
    pub fn collapse(&self, q: usize, v: &[Complex64; 2]) -> Result<StateVector, SimError> {
        self.check(q)?;
        let rest = self.project(q, v);
        let p = norm_sqr(&rest);
        if p <= 0.0 {
            return Err(SimError::ImpossibleOutcome);
        }
        let scale = 1.0 / p.sqrt();
        let m = self.mask(q);
        let mut amps = vec![Complex64::new(0.0, 0.0); self.amps.len()];
        for i in (0..amps.len()).filter(|i| i & m == 0) {
            amps[i] = rest[i] * v[0] * scale;
            amps[i | m] = rest[i] * v[1] * scale;
        }
        Ok(StateVector { n: self.n, amps })
    }
}

fn check_count(n: usize) -> Result<(), SimError> {
    if n == 0 || n > MAX_QUBITS {
        return Err(SimError::QubitCount(n));
    }
    Ok(())
}

fn norm_sqr(v: &[Complex64]) -> f64 {
    v.iter().map(Complex64::norm_sqr).sum()
}
