//! Real-time Turing machine laboratory.

pub mod counter;
pub mod guess;
pub mod oracles;
pub mod recognizer;
pub mod tm;
pub mod zoo;
