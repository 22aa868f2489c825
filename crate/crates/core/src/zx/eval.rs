//! Matrix semantics of diagrams.
//!
//! Every edge is an index variable and every spider owns one more "hub"
//! variable for the basis element it copies. The factors are contracted by
//! variable elimination and the open variables attached to boundaries are
//! read out as a matrix with outputs on rows and inputs on columns, first
//! boundary most significant.
//!
//! In doubled semantics a quantum wire carries an index `2a + b` standing for
//! `|a⟩⟨b|`, so a pure tensor `T` becomes `T(a)·conj(T(b))`. Classical wires
//! carry a single bit. A spider with at least one classical leg forces every
//! leg onto the same basis element `i` of its colour and is phase-free.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;

use num_complex::Complex64;

use super::{Diagram, NodeId, NodeKind, Phase, WireKind, ZxError};

/// Dense complex matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![Complex64::new(0.0, 0.0); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Complex64>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Self {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&v| Complex64::new(v, 0.0)).collect()).collect())
    }

    pub fn column(values: Vec<Complex64>) -> Self {
        let n = values.len();
        Matrix { rows: n, cols: 1, data: values }
    }

    pub fn hadamard() -> Self {
        let h = FRAC_1_SQRT_2;
        Matrix::from_real_rows(&[&[h, h], &[h, -h]])
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn scale(&self, s: Complex64) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|z| z * s).collect() }
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t[(c, r)] = self[(r, c)];
            }
        }
        t
    }

    /// Same entries, read with a different shape.
    pub fn reshape(&self, rows: usize, cols: usize) -> Option<Matrix> {
        (rows * cols == self.data.len()).then(|| Matrix { rows, cols, data: self.data.clone() })
    }

    pub fn matmul(&self, rhs: &Matrix) -> Option<Matrix> {
        if self.cols != rhs.rows {
            return None;
        }
        let mut out = Matrix::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(r, k)];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for c in 0..rhs.cols {
                    out[(r, c)] += a * rhs[(k, c)];
                }
            }
        }
        Some(out)
    }

    pub fn kron(&self, rhs: &Matrix) -> Matrix {
        let mut out = Matrix::zeros(self.rows * rhs.rows, self.cols * rhs.cols);
        for r1 in 0..self.rows {
            for c1 in 0..self.cols {
                let a = self[(r1, c1)];
                for r2 in 0..rhs.rows {
                    for c2 in 0..rhs.cols {
                        out[(r1 * rhs.rows + r2, c1 * rhs.cols + c2)] = a * rhs[(r2, c2)];
                    }
                }
            }
        }
        out
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = Complex64;
    fn index(&self, (r, c): (usize, usize)) -> &Complex64 {
        &self.data[r * self.cols + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex64 {
        &mut self.data[r * self.cols + c]
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols)
                .map(|c| {
                    let z = self[(r, c)];
                    if z.im == 0.0 {
                        format!("{:.4}", z.re)
                    } else {
                        format!("{:.4}{:+.4}i", z.re, z.im)
                    }
                })
                .collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// True iff some nonzero `λ` has `‖a − λ·b‖_max ≤ tol`.
///
/// `λ` is read off the entry where `b` is largest. A matrix whose entries are
/// all within `tol` of zero is only equal to another such matrix.
pub fn equal_up_to_scalar(a: &Matrix, b: &Matrix, tol: f64) -> Result<bool, ZxError> {
    if tol.is_nan() || tol < 0.0 {
        return Err(ZxError::InvalidTolerance(tol));
    }
    check_shapes(a, b)?;
    let za = a.max_abs() <= tol;
    let zb = b.max_abs() <= tol;
    if za || zb {
        return Ok(za && zb);
    }
    let (_, residual) = fit_scalar(a, b)?.expect("b is nonzero");
    Ok(residual <= tol)
}

/// The scalar `λ` used by [`equal_up_to_scalar`] and the residual
/// `‖a − λ·b‖_max`, or `None` when `b` is exactly zero.
pub fn fit_scalar(a: &Matrix, b: &Matrix) -> Result<Option<(Complex64, f64)>, ZxError> {
    check_shapes(a, b)?;
    let (k, largest) = b
        .data
        .iter()
        .enumerate()
        .fold((0, -1.0), |(bk, bv), (i, z)| if z.norm() > bv { (i, z.norm()) } else { (bk, bv) });
    if largest <= 0.0 {
        return Ok(None);
    }
    let lambda = a.data[k] / b.data[k];
    let residual = a.data.iter().zip(&b.data).map(|(x, y)| (x - lambda * y).norm()).fold(0.0, f64::max);
    Ok(Some((lambda, residual)))
}

fn check_shapes(a: &Matrix, b: &Matrix) -> Result<(), ZxError> {
    if a.rows != b.rows || a.cols != b.cols {
        return Err(ZxError::DimensionMismatch { left: (a.rows, a.cols), right: (b.rows, b.cols) });
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Semantics {
    Pure,
    Doubled,
}

/// Pure (Hilbert-space) semantics; every wire must be quantum.
pub fn evaluate_pure(d: &Diagram) -> Result<Matrix, ZxError> {
    if d.has_classical() {
        return Err(ZxError::ClassicalWirePresent);
    }
    Ok(evaluate(d, Semantics::Pure))
}

/// Doubled semantics: quantum wires have dimension 4, classical wires 2.
pub fn evaluate_doubled(d: &Diagram) -> Matrix {
    evaluate(d, Semantics::Doubled)
}

fn wire_dim(kind: WireKind, sem: Semantics) -> usize {
    match (kind, sem) {
        (WireKind::Quantum, Semantics::Doubled) => 4,
        _ => 2,
    }
}

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Dense tensor over named variables, row-major in `vars` order.
#[derive(Clone, Debug)]
struct Tensor {
    vars: Vec<usize>,
    dims: Vec<usize>,
    data: Vec<Complex64>,
}

fn strides(dims: &[usize]) -> Vec<usize> {
    let mut s = vec![1; dims.len()];
    for i in (0..dims.len().saturating_sub(1)).rev() {
        s[i] = s[i + 1] * dims[i + 1];
    }
    s
}

impl Tensor {
    fn scalar(v: Complex64) -> Self {
        Tensor { vars: Vec::new(), dims: Vec::new(), data: vec![v] }
    }

    /// Tabulates `f` over the distinct variables in `vars`; a repeated
    /// variable feeds the same value to every position it occupies.
    fn tabulate(vars: &[usize], dims_of: impl Fn(usize) -> usize, f: impl Fn(&[usize]) -> Complex64) -> Self {
        let mut unique: Vec<usize> = Vec::new();
        for &v in vars {
            if !unique.contains(&v) {
                unique.push(v);
            }
        }
        let dims: Vec<usize> = unique.iter().map(|&v| dims_of(v)).collect();
        let st = strides(&dims);
        let len: usize = dims.iter().product();
        let slot: Vec<usize> = vars.iter().map(|v| unique.iter().position(|u| u == v).unwrap()).collect();
        let mut vals = vec![0usize; vars.len()];
        let data = (0..len)
            .map(|flat| {
                for (p, &s) in slot.iter().enumerate() {
                    vals[p] = (flat / st[s]) % dims[s];
                }
                f(&vals)
            })
            .collect();
        Tensor { vars: unique, dims, data }
    }

    fn sum_out(&self, var: usize) -> Tensor {
        let Some(pos) = self.vars.iter().position(|&v| v == var) else {
            return self.clone();
        };
        let mut vars = self.vars.clone();
        let mut dims = self.dims.clone();
        vars.remove(pos);
        let d = dims.remove(pos);
        let old = strides(&self.dims);
        let new = strides(&dims);
        let len: usize = dims.iter().product();
        let mut data = vec![ZERO; len];
        for (flat, out) in data.iter_mut().enumerate() {
            let mut base = 0;
            for (i, s) in new.iter().enumerate() {
                let idx = (flat / s) % dims[i];
                base += idx * old[if i < pos { i } else { i + 1 }];
            }
            for k in 0..d {
                *out += self.data[base + k * old[pos]];
            }
        }
        Tensor { vars, dims, data }
    }

    /// Pointwise product over the union of variables.
    fn product(&self, other: &Tensor) -> Tensor {
        let mut vars = self.vars.clone();
        let mut dims = self.dims.clone();
        for (v, d) in other.vars.iter().zip(&other.dims) {
            if !vars.contains(v) {
                vars.push(*v);
                dims.push(*d);
            }
        }
        let st = strides(&dims);
        let sa = strides(&self.dims);
        let sb = strides(&other.dims);
        let map_a: Vec<(usize, usize)> = self
            .vars
            .iter()
            .enumerate()
            .map(|(i, v)| (vars.iter().position(|x| x == v).unwrap(), sa[i]))
            .collect();
        let map_b: Vec<(usize, usize)> = other
            .vars
            .iter()
            .enumerate()
            .map(|(i, v)| (vars.iter().position(|x| x == v).unwrap(), sb[i]))
            .collect();
        let len: usize = dims.iter().product();
        let data = (0..len)
            .map(|flat| {
                let idx = |k: usize| (flat / st[k]) % dims[k];
                let ia: usize = map_a.iter().map(|&(k, s)| idx(k) * s).sum();
                let ib: usize = map_b.iter().map(|&(k, s)| idx(k) * s).sum();
                self.data[ia] * other.data[ib]
            })
            .collect();
        Tensor { vars, dims, data }
    }
}

fn phase_factor(p: Phase) -> Complex64 {
    if p.is_zero() {
        ONE
    } else if p == Phase::PI {
        -ONE
    } else {
        Complex64::from_polar(1.0, p.radians())
    }
}

fn sign(bit: usize) -> f64 {
    if bit & 1 == 1 {
        -1.0
    } else {
        1.0
    }
}

/// Builds the factor graph of `d` and contracts it by variable elimination.
///
/// Edge `k` of the diagram is variable `k`. Each spider additionally gets a
/// hub variable ranging over the basis elements it copies: dimension 2 in
/// pure semantics and for decohered (classical-legged) spiders, dimension 4
/// (a ket index and a bra index) for quantum-only spiders in doubled
/// semantics. The spider becomes a weight on its hub plus one two-variable
/// factor per leg, which keeps every factor small however many legs it has.
fn evaluate(d: &Diagram, sem: Semantics) -> Matrix {
    let edges = d.edges();
    let mut dims: Vec<usize> = edges.iter().map(|e| wire_dim(e.kind, sem)).collect();
    let mut open: BTreeMap<NodeId, usize> = BTreeMap::new();
    for (k, e) in edges.iter().enumerate() {
        for n in [e.a, e.b] {
            if d.node(n).is_some_and(NodeKind::is_boundary) {
                open.insert(n, k);
            }
        }
    }

    let mut factors: Vec<Tensor> = Vec::new();
    for (id, kind) in d.nodes() {
        let legs: Vec<usize> = edges
            .iter()
            .enumerate()
            .flat_map(|(k, e)| std::iter::repeat_n(k, usize::from(e.a == id) + usize::from(e.b == id)))
            .collect();
        match *kind {
            NodeKind::Boundary { .. } => {}
            NodeKind::Hadamard => {
                let t = Tensor::tabulate(&legs, |v| dims[v], |vals| match sem {
                    Semantics::Pure => Complex64::new(FRAC_1_SQRT_2 * sign(vals[0] & vals[1]), 0.0),
                    Semantics::Doubled => {
                        let (a0, b0) = (vals[0] >> 1, vals[0] & 1);
                        let (a1, b1) = (vals[1] >> 1, vals[1] & 1);
                        Complex64::new(0.5 * sign(a0 & a1) * sign(b0 & b1), 0.0)
                    }
                });
                factors.push(t);
            }
            NodeKind::Z(p) | NodeKind::X(p) => {
                let green = matches!(kind, NodeKind::Z(_));
                let decohered = sem == Semantics::Doubled && legs.iter().any(|&k| edges[k].kind == WireKind::Classical);
                let hub = dims.len();
                let f = [ONE, phase_factor(p)];
                let (hub_dim, weight): (usize, Vec<Complex64>) = match (sem, decohered) {
                    (Semantics::Pure, _) => (2, f.to_vec()),
                    (Semantics::Doubled, true) => (2, vec![ONE, ONE]),
                    (Semantics::Doubled, false) => (4, (0..4).map(|h| f[h >> 1] * f[h & 1].conj()).collect()),
                };
                dims.push(hub_dim);
                factors.push(Tensor { vars: vec![hub], dims: vec![hub_dim], data: weight });
                for &k in &legs {
                    let classical = edges[k].kind == WireKind::Classical;
                    let leg = Tensor::tabulate(&[hub, k], |v| dims[v], |vals| {
                        let (h, v) = (vals[0], vals[1]);
                        let real = match (sem, decohered, classical, green) {
                            (_, _, true, _) => f64::from(u8::from(v == h)),
                            (Semantics::Pure, _, _, true) => f64::from(u8::from(v == h)),
                            (Semantics::Pure, _, _, false) => FRAC_1_SQRT_2 * sign(v & h),
                            (Semantics::Doubled, false, _, true) => f64::from(u8::from(v == h)),
                            (Semantics::Doubled, false, _, false) => 0.5 * sign((v >> 1) & (h >> 1)) * sign(v & h & 1),
                            (Semantics::Doubled, true, _, true) => f64::from(u8::from(v >> 1 == h && v & 1 == h)),
                            (Semantics::Doubled, true, _, false) => 0.5 * sign((v >> 1) & h) * sign(v & h),
                        };
                        Complex64::new(real, 0.0)
                    });
                    factors.push(leg);
                }
            }
        }
    }

    let open_vars: Vec<usize> = open.values().copied().collect();
    let result = eliminate(factors, &dims, &open_vars);
    read_out(d, &result, &open, &dims)
}

/// Sums out every non-open variable, cheapest bucket first, then multiplies
/// what is left.
fn eliminate(mut factors: Vec<Tensor>, dims: &[usize], open: &[usize]) -> Tensor {
    loop {
        let mut best: Option<(usize, usize)> = None;
        let mut candidates: Vec<usize> = factors.iter().flat_map(|t| t.vars.iter().copied()).collect();
        candidates.sort_unstable();
        candidates.dedup();
        for v in candidates.into_iter().filter(|v| !open.contains(v)) {
            let mut scope: Vec<usize> = Vec::new();
            for t in factors.iter().filter(|t| t.vars.contains(&v)) {
                for u in &t.vars {
                    if !scope.contains(u) {
                        scope.push(*u);
                    }
                }
            }
            let cost = scope.iter().map(|&u| dims[u]).fold(1usize, usize::saturating_mul);
            if best.is_none_or(|(_, c)| cost < c) {
                best = Some((v, cost));
            }
        }
        let Some((var, _)) = best else { break };
        let (bucket, rest): (Vec<Tensor>, Vec<Tensor>) = factors.into_iter().partition(|t| t.vars.contains(&var));
        let merged = bucket.iter().skip(1).fold(bucket[0].clone(), |acc, t| acc.product(t));
        factors = rest;
        factors.push(merged.sum_out(var));
    }
    factors.iter().fold(Tensor::scalar(ONE), |acc, t| acc.product(t))
}

fn read_out(d: &Diagram, t: &Tensor, open: &BTreeMap<NodeId, usize>, dims: &[usize]) -> Matrix {
    let row_vars: Vec<usize> = d.outputs().iter().map(|n| open[n]).collect();
    let col_vars: Vec<usize> = d.inputs().iter().map(|n| open[n]).collect();
    let positions: Vec<usize> = row_vars.iter().chain(&col_vars).copied().collect();
    let pos_dims: Vec<usize> = positions.iter().map(|&v| dims[v]).collect();
    let rows: usize = row_vars.iter().map(|&v| dims[v]).product();
    let cols: usize = col_vars.iter().map(|&v| dims[v]).product();
    let pos_strides = strides(&pos_dims);
    let t_strides = strides(&t.dims);

    let mut m = Matrix::zeros(rows, cols);
    let mut values: BTreeMap<usize, usize> = BTreeMap::new();
    'entries: for flat in 0..rows * cols {
        values.clear();
        for (i, s) in pos_strides.iter().enumerate() {
            let val = (flat / s) % pos_dims[i];
            // a bare boundary-to-boundary wire shows up twice and must agree
            if values.insert(positions[i], val).is_some_and(|prev| prev != val) {
                continue 'entries;
            }
        }
        let idx: usize = t.vars.iter().zip(&t_strides).map(|(v, s)| values[v] * s).sum();
        m.data[flat] = t.data[idx];
    }
    m
}
