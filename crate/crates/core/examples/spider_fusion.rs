//! Builds a small diagram with a bastard spider, fuses it step by step and
//! compares the matrices of every step in both semantics.
//!
//! cargo run --example spider_fusion

use qcm::zx::text::to_text;
use qcm::zx::{equal_up_to_scalar, evaluate_doubled, fuse_spiders_traced, DiagramBuilder, Phase, WireKind};

fn main() {
    let mut b = DiagramBuilder::new();
    let i = b.input();
    let z1 = b.z(Phase::pi_frac(1, 4));
    let z2 = b.z(Phase::pi_frac(1, 2));
    let x = b.x(Phase::ZERO);
    let o1 = b.output();
    let o2 = b.output();
    b.connect(i, z1, WireKind::Quantum)
        .connect(z1, z2, WireKind::Quantum)
        .connect(z2, x, WireKind::Quantum)
        .connect(z2, o1, WireKind::Classical)
        .connect(x, o2, WireKind::Quantum);
    let d = b.build().expect("valid diagram");

    let chain = fuse_spiders_traced(&d);
    let reference = evaluate_doubled(&d);
    for (k, step) in chain.iter().enumerate() {
        let same = equal_up_to_scalar(&reference, &evaluate_doubled(step), 1e-9).unwrap();
        println!("-- step {k}: {} spiders, doubled matrix preserved: {same}", step.spider_count());
        print!("{}", to_text(step));
    }
}
