//! Checks the measurement equation in both colours and prints the fusion
//! chain from the left side to the right side.
//!
//! cargo run --example verify_lemma

use qcm::lemma::{verify_lemma_with, Corruption};

fn main() {
    let corrupt = std::env::args().any(|a| a == "--corrupt");
    let corruption = if corrupt { Corruption::PiOnRhs } else { Corruption::None };
    let report = verify_lemma_with(1e-9, corruption).expect("lemma diagrams evaluate");
    for v in &report.variants {
        println!(
            "{:?}: equal={} chain_sound={} reaches_rhs={} steps={}",
            v.colour,
            v.equal,
            v.chain_sound,
            v.fusion_reaches_rhs,
            v.chain.len()
        );
    }
    println!("{}", if report.pass() { "PASS" } else { "FAIL" });
}
