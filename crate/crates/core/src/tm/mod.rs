//! Multi-tape machine model, step semantics, exploration and tracing.

mod engine;
mod explore;
mod spec;
mod tape;
pub mod trace;

pub use engine::{
    applicable_rules, run_clocked, run_deterministic, run_deterministic_observed, space_used, step, step_in_place,
    validate_real_time, Configuration, Event, GuessKind, RealTimeReport, RealTimeVerdict, RunError, RunRecord,
    StepObserver, StepOutcome, Successor, Verdict,
};
pub use explore::{explore, explore_branches, Bounds, Branching, Expansion, Exploration, Truncation};
pub use spec::{AcceptanceMode, MachineBuilder, MachineSpec, Move, RuleDef, SpecError, StateId, TransitionRule};
pub use tape::{Tape, TapeSymbol};

/// Tape symbols of ordinary machines.
pub type Symbol = char;

/// The blank symbol, spelled `#` in machine files.
pub const BLANK: Symbol = '#';
