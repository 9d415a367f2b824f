//! The guess-and-check length counter.

mod bits;
mod ext;
mod machine;
mod run;
mod steps;

use thiserror::Error;

pub use bits::{binary_add, binary_subtract, double_by_append0, sum_proper_prefixes, Bits, BitsError};
pub use ext::ExtendedSymbol;
pub use machine::{
    Counter, CounterChoice, CounterConfig, CounterState, GuessEvent, KillReason, Pending, Phase, DEFAULT_PHASE2_RATE,
    TAPE_NAMES,
};
pub use run::{
    explore_counter_range, md_final_config, run_counter, trace_counter, walk, BranchOutcome, CounterRun,
    CounterSummary, GuidedCounterSource,
};
pub use steps::{steps_to_config, steps_to_config_bits};

/// Cells per tape allowed per bit of `n + 2`. Fitted once against exhaustive
/// runs up to 48 and guided runs up to 2048 (worst measured ratio 2.5).
pub const SPACE_CONSTANT: usize = 3;

/// `SPACE_CONSTANT * ceil(log2(n + 2))`.
pub fn space_envelope(n: u64) -> usize {
    SPACE_CONSTANT * (n + 2).next_power_of_two().trailing_zeros() as usize
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CounterError {
    #[error("{0}")]
    Domain(String),
}
