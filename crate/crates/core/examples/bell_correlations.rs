//! Same-colour and cross-colour agreement on a Bell pair, and the CHSH value
//! at the optimal angles.
//!
//! cargo run --release --example bell_correlations -- 7

use qcm::sim::{chsh_value, correlation_experiment, ChshAngles, MeasurementBasis, RngSeed};

fn main() {
    let seed = RngSeed(std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(7));
    let (z, x) = (MeasurementBasis::z(), MeasurementBasis::x());
    let trials = 10_000;
    let settings = [("Z/Z", &z, &z), ("X/X", &x, &x), ("Z/X", &z, &x), ("X/Z", &x, &z)];
    for (k, (name, a, b)) in settings.into_iter().enumerate() {
        let f = correlation_experiment(a, b, trials, seed.derive(k as u64)).unwrap();
        println!("{name}: agreement {f:.4} over {trials} pairs");
    }
    let s = chsh_value(ChshAngles::optimal(), 100_000, seed).unwrap();
    println!("CHSH: {s:.4} (2√2 = {:.4})", 2.0 * std::f64::consts::SQRT_2);
}
