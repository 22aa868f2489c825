//! Records a session, writes its log as NDJSON, replays the accepted actions
//! and compares the two logs byte for byte.
//!
//! cargo run --example replay_log

use std::sync::Arc;

use qcm::engine::{replay, zero_clock, ObserverAction, Session, SessionOptions, Status, Timestamps};
use qcm::score::{bell_score_fixture, Role};
use qcm::sim::RngSeed;

fn main() {
    let score = Arc::new(bell_score_fixture());
    let seed = RngSeed(2024);
    let mut s = Session::new(score.clone(), seed, SessionOptions::default(), zero_clock()).unwrap();
    while s.status() != Status::Finished {
        let action = match s.pending_event() {
            Some(e) if s.status() == Status::AwaitingChoice => {
                ObserverAction::choose(Role::Audience, &e.measured.clone(), s.score().allowed_colours(e)[0])
            }
            Some(_) if s.status() == Status::AwaitingTrigger => ObserverAction::trigger(Role::Audience),
            _ => ObserverAction::advance(Role::Audience),
        };
        s.apply_action(action).unwrap();
    }
    let original = s.to_ndjson(Timestamps::Exclude);
    print!("{original}");

    let again = replay(score, seed, SessionOptions::default(), zero_clock(), s.actions()).expect("replay");
    let same = again.to_ndjson(Timestamps::Exclude) == original;
    eprintln!("{} actions replayed, logs identical: {same}", s.actions().len());
}
