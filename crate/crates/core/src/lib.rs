pub mod zx;
pub mod lemma;
pub mod sim;
pub mod score;
pub mod lang;
pub mod engine;
pub mod service;
pub mod cli;
