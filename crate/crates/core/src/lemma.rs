//! Mechanical check of the measurement equation.
//!
//! Left side: an entangled pair drawn as a cup, a "the same" gate on the
//! measured leg, and a bastard measurement spider turning that leg into a
//! classical outcome. Right side: a single bastard spider emitting the
//! outcome and the partner qubit. Both are evaluated in doubled semantics
//! and compared up to scalar; the fusion chain from left to right is kept
//! so the intermediate diagrams can be printed.

use std::fmt;

use num_complex::Complex64;
use serde::Serialize;

use crate::zx::{
    equal_up_to_scalar, evaluate_doubled, fit_scalar, fuse_spiders_traced, gadgets, text, Colour, Diagram,
    DiagramBuilder, NodeKind, Phase, WireKind, ZxError,
};

#[derive(Clone, Debug, Serialize)]
pub struct VariantReport {
    pub colour: Colour,
    /// Doubled matrices of both sides agree up to scalar.
    pub equal: bool,
    /// Fusing the left side lands on a diagram isomorphic to the right side.
    pub fusion_reaches_rhs: bool,
    /// The fusion chain keeps the doubled matrix fixed at every step.
    pub chain_sound: bool,
    /// `λ` with LHS = λ·RHS, when the right side is nonzero.
    pub scalar: Option<[f64; 2]>,
    pub residual: Option<f64>,
    /// Canonical text of each diagram in the chain: the plain left side,
    /// the recoloured left side, each fusion step, the right side last.
    pub chain: Vec<String>,
    pub rhs: String,
}

impl VariantReport {
    pub fn pass(&self) -> bool {
        self.equal && self.fusion_reaches_rhs && self.chain_sound
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LemmaReport {
    pub tolerance: f64,
    pub variants: Vec<VariantReport>,
}

impl LemmaReport {
    pub fn pass(&self) -> bool {
        self.variants.iter().all(VariantReport::pass)
    }
}

/// Which side to corrupt, for negative controls.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Corruption {
    #[default]
    None,
    /// A π phase of the complementary colour on the right side's quantum
    /// output: the partner lands on the opposite eigenstate.
    PiOnRhs,
}

pub fn verify_lemma(tolerance: f64) -> Result<LemmaReport, ZxError> {
    verify_lemma_with(tolerance, Corruption::None)
}

pub fn verify_lemma_with(tolerance: f64, corruption: Corruption) -> Result<LemmaReport, ZxError> {
    let variants = [Colour::Green, Colour::Red]
        .into_iter()
        .map(|c| verify_variant(c, tolerance, corruption))
        .collect::<Result<_, _>>()?;
    Ok(LemmaReport { tolerance, variants })
}

fn verify_variant(colour: Colour, tol: f64, corruption: Corruption) -> Result<VariantReport, ZxError> {
    let plain = gadgets::unfolded_measurement_plain(colour);
    let unfolded = gadgets::unfolded_measurement(colour);
    let mut rhs = gadgets::compact_measurement(colour);
    if corruption == Corruption::PiOnRhs {
        rhs = rhs.compose(&Diagram::wire(WireKind::Classical).tensor(&flip(colour)))?;
    }

    let steps = fuse_spiders_traced(&unfolded);
    let fused = steps.last().expect("trace is never empty");
    let rhs_m = evaluate_doubled(&rhs);
    let lhs_m = evaluate_doubled(&plain);

    let equal = equal_up_to_scalar(&lhs_m, &rhs_m, tol)?;
    let mut chain_sound = true;
    for d in std::iter::once(&unfolded).chain(&steps) {
        chain_sound &= equal_up_to_scalar(&lhs_m, &evaluate_doubled(d), tol)?;
    }
    let fit = fit_scalar(&lhs_m, &rhs_m)?;

    let mut chain = vec![text::to_text(&plain)];
    chain.extend(steps.iter().map(text::to_text));
    Ok(VariantReport {
        colour,
        equal,
        fusion_reaches_rhs: fused.isomorphic(&rhs, 1e-12),
        chain_sound,
        scalar: fit.map(|(l, _)| [l.re, l.im]),
        residual: fit.map(|(_, r)| r),
        chain,
        rhs: text::to_text(&rhs),
    })
}

fn flip(colour: Colour) -> Diagram {
    let other = match colour {
        Colour::Green => Colour::Red,
        Colour::Red => Colour::Green,
    };
    let mut b = DiagramBuilder::new();
    let i = b.input();
    let s = b.add(NodeKind::spider(other, Phase::PI));
    let o = b.output();
    b.connect(i, s, WireKind::Quantum).connect(s, o, WireKind::Quantum);
    b.build().expect("phase gate is valid")
}

impl fmt::Display for LemmaReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "measurement equation, doubled semantics, tolerance {:e}", self.tolerance)?;
        if self.tolerance == 0.0 {
            writeln!(f, "note: tolerance 0 asks for exact equality; all entries here are dyadic rationals")?;
        }
        for v in &self.variants {
            let verdict = if v.pass() { "PASS" } else { "FAIL" };
            writeln!(f, "\n[{verdict}] {:?} variant", v.colour)?;
            writeln!(f, "  matrices equal up to scalar: {}", v.equal)?;
            if let (Some([re, im]), Some(r)) = (v.scalar, v.residual) {
                writeln!(f, "  scalar {}, residual {r:e}", Complex64::new(re, im))?;
            }
            writeln!(f, "  fusion chain sound: {}", v.chain_sound)?;
            writeln!(f, "  fusion reaches right side: {}", v.fusion_reaches_rhs)?;
            for (k, step) in v.chain.iter().enumerate() {
                writeln!(f, "  -- step {k}")?;
                for line in step.lines().skip(1) {
                    writeln!(f, "     {line}")?;
                }
            }
            writeln!(f, "  -- right side")?;
            for line in v.rhs.lines().skip(1) {
                writeln!(f, "     {line}")?;
            }
        }
        write!(f, "\n{}", if self.pass() { "PASS" } else { "FAIL" })
    }
}
