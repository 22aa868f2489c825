//! Plays the four movements of the Bell score as the audience would and
//! prints each collapse with the instructions it hands out.
//!
//! cargo run --example live_session -- 42

use qcm::engine::{create_session, ObserverAction, Payload, Status};
use qcm::score::{bell_score_fixture, Role};
use qcm::sim::RngSeed;

fn main() {
    let seed = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(42);
    let mut s = create_session(bell_score_fixture(), RngSeed(seed)).expect("fixture is valid");
    while s.status() != Status::Finished {
        let Some(e) = s.pending_event().cloned() else {
            s.apply_action(ObserverAction::advance(Role::Audience)).unwrap();
            continue;
        };
        let colour = s.score().allowed_colours(&e)[0];
        s.apply_action(ObserverAction::choose(Role::Audience, &e.measured, colour)).unwrap();
        for ev in s.apply_action(ObserverAction::trigger(Role::Audience)).unwrap() {
            match ev.payload {
                Payload::Collapse { qubit, colour, label, probability, .. } => {
                    println!("{qubit} collapses in {colour:?} to {label} (p = {probability:.2})")
                }
                Payload::Instruction(i) => println!("  {}: {}", i.instrument, i.directive),
                _ => {}
            }
        }
        s.apply_action(ObserverAction::advance(Role::Audience)).unwrap();
    }
    println!("{} log entries", s.log().len());
}
