//! Compiles every measurement of a score to its ZX diagram and prints the
//! diagram text next to its doubled matrix size.
//!
//! cargo run --example score_diagram -- corpus/duet_hadamard.qcm

use qcm::lang::check_text;
use qcm::score::{bell_score_fixture, to_diagram};
use qcm::zx::{evaluate_doubled, text::to_text};

fn main() {
    let score = match std::env::args().nth(1) {
        Some(path) => {
            let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"));
            let (score, diags) = check_text(&text);
            for d in &diags {
                eprintln!("{d}");
            }
            score.expect("score parses")
        }
        None => bell_score_fixture(),
    };
    for m in &score.movements {
        for e in m.events() {
            let d = to_diagram(e, &score).expect("event compiles");
            let mat = evaluate_doubled(&d);
            println!("-- {} ({}x{} doubled)", e.id, mat.rows(), mat.cols());
            print!("{}", to_text(&d));
        }
    }
}
