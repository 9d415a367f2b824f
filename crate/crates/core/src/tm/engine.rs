use serde::Serialize;
use thiserror::Error;

use super::{MachineSpec, Move, StateId, Symbol, Tape};

/// Snapshot of a running machine: control state, input tape, work tapes, step count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Configuration {
    pub state: StateId,
    pub input: Tape,
    pub input_len: usize,
    pub work: Vec<Tape>,
    pub steps: u64,
}

impl Configuration {
    pub fn initial(spec: &MachineSpec, input: &[Symbol]) -> Self {
        Configuration {
            state: spec.initial(),
            input: Tape::with_word(input),
            input_len: input.len(),
            work: vec![Tape::new(); spec.num_work_tapes()],
            steps: 0,
        }
    }

    pub fn input_pos(&self) -> i64 {
        self.input.head()
    }

    /// Symbols currently under the work heads.
    pub fn scanned_work(&self) -> Vec<Symbol> {
        self.work.iter().map(|t| t.read()).collect()
    }

    pub fn space(&self) -> Vec<usize> {
        self.work.iter().map(|t| t.space_used()).collect()
    }

    fn input_symbol(&self, spec: &MachineSpec) -> Option<Symbol> {
        spec.has_input_tape().then(|| self.input.read())
    }

    fn apply(&mut self, spec: &MachineSpec, rule: usize) {
        let r = &spec.rules()[rule];
        if let (Some(w), Some(m)) = (r.write_input, r.move_input) {
            self.input.write(w);
            self.input.shift(m);
        }
        for ((tape, &w), &m) in self.work.iter_mut().zip(&r.write_work).zip(&r.move_work) {
            tape.write(w);
            tape.shift(m);
        }
        self.state = r.to;
        self.steps += 1;
    }
}

/// Indices of the rules applicable in `c`, in declaration order.
pub fn applicable_rules(spec: &MachineSpec, c: &Configuration) -> Vec<usize> {
    let scanned = c.scanned_work();
    spec.matching_rules(c.state, c.input_symbol(spec), &scanned).collect()
}

/// A successor configuration together with the rule that produced it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Successor {
    pub rule: usize,
    pub config: Configuration,
}

/// All one-step successors of `c`: one per matching rule, writes applied before
/// moves on every tape. An empty result means the machine is stuck (or halted).
pub fn step(spec: &MachineSpec, c: &Configuration) -> Vec<Successor> {
    if spec.is_halt(c.state) {
        return Vec::new();
    }
    applicable_rules(spec, c)
        .into_iter()
        .map(|rule| {
            let mut next = c.clone();
            next.apply(spec, rule);
            Successor { rule, config: next }
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepOutcome {
    Fired(usize),
    Stuck,
    Halted,
}

/// Deterministic in-place step. Fails if more than one rule applies.
pub fn step_in_place(spec: &MachineSpec, c: &mut Configuration) -> Result<StepOutcome, RunError> {
    if spec.is_halt(c.state) {
        return Ok(StepOutcome::Halted);
    }
    let scanned = c.scanned_work();
    let mut matches = spec.matching_rules(c.state, c.input_symbol(spec), &scanned);
    let Some(rule) = matches.next() else {
        return Ok(StepOutcome::Stuck);
    };
    if let Some(other) = matches.next() {
        return Err(RunError::Nondeterministic {
            triple: describe_source(spec, c),
            rules: vec![rule, other],
        });
    }
    c.apply(spec, rule);
    Ok(StepOutcome::Fired(rule))
}

fn describe_source(spec: &MachineSpec, c: &Configuration) -> String {
    let mut parts = vec![spec.state_name(c.state).to_string()];
    if spec.has_input_tape() {
        parts.push(c.input.read().to_string());
    }
    parts.extend(c.scanned_work().iter().map(|s| s.to_string()));
    format!("({})", parts.join(", "))
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RunError {
    #[error("nondeterministic fan-out at source {triple}: rules {rules:?} both apply")]
    Nondeterministic { triple: String, rules: Vec<usize> },
    #[error("machine `{0}` is not real-time: rules {1:?} do not move the input head right")]
    NotRealTime(String, Vec<usize>),
    #[error("machine `{0}` has no input tape")]
    NoInputTape(String),
    #[error("input symbol `{0}` is not in the input alphabet")]
    BadInput(Symbol),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Accept,
    Reject,
    /// No rule applied; judged as a rejection.
    Stuck,
}

impl Verdict {
    pub fn is_accept(self) -> bool {
        self == Verdict::Accept
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Accept => "accept",
            Verdict::Reject => "reject",
            Verdict::Stuck => "stuck",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GuessKind {
    CellGuess,
    PhaseTrigger,
    MsbGuess,
}

/// Something worth logging during a run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "tag", rename_all = "kebab-case")]
pub enum Event {
    Rule {
        step: u64,
        rule: usize,
    },
    Halt {
        step: u64,
    },
    Stuck {
        step: u64,
    },
    Guess {
        tick: u64,
        cell: i64,
        symbol: String,
        kind: GuessKind,
    },
    PhaseSwitch {
        tick: u64,
        state_guess: String,
    },
    LengthComplete {
        tick: u64,
        bits: String,
    },
    Special {
        tick: u64,
    },
    Killed {
        tick: u64,
        reason: String,
    },
    Decider {
        verdict: String,
        steps: u64,
        budget: u64,
    },
    Certificate {
        detail: String,
    },
}

impl Event {
    pub fn tag(&self) -> &'static str {
        match self {
            Event::Rule { .. } => "rule",
            Event::Halt { .. } => "halt",
            Event::Stuck { .. } => "stuck",
            Event::Guess { .. } => "guess",
            Event::PhaseSwitch { .. } => "phase-switch",
            Event::LengthComplete { .. } => "length-complete",
            Event::Special { .. } => "special",
            Event::Killed { .. } => "killed",
            Event::Decider { .. } => "decider",
            Event::Certificate { .. } => "certificate",
        }
    }
}

/// Result of one maximal run or branch.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RunRecord {
    pub verdict: Verdict,
    pub steps: u64,
    /// Cells used per work tape.
    pub space: Vec<usize>,
    pub events: Vec<Event>,
}

impl RunRecord {
    pub fn accepted(&self) -> bool {
        self.verdict.is_accept()
    }
}

/// Per-tape space of a finished run.
pub fn space_used(r: &RunRecord) -> Vec<usize> {
    r.space.clone()
}

/// Judges a configuration in which the run has ended.
pub(crate) fn judge(spec: &MachineSpec, c: &Configuration, stuck: bool) -> Verdict {
    use super::AcceptanceMode::*;
    let halted = spec.is_halt(c.state);
    match spec.mode() {
        HaltState if halted => Verdict::Accept,
        HaltState if stuck => Verdict::Stuck,
        HaltState => Verdict::Reject,
        FinalStateEmptyStorage => {
            let finished = c.steps as usize == c.input_len;
            if finished && !halted && spec.is_accepting(c.state) && c.work.iter().all(|t| t.is_blank()) {
                Verdict::Accept
            } else if stuck {
                Verdict::Stuck
            } else {
                Verdict::Reject
            }
        }
    }
}

pub(crate) fn check_runnable(spec: &MachineSpec, input: &[Symbol]) -> Result<(), RunError> {
    let Some(alpha) = spec.input_alphabet() else {
        return Err(RunError::NoInputTape(spec.name().to_string()));
    };
    if let RealTimeVerdict::Fail(bad) = validate_real_time(spec).verdict {
        return Err(RunError::NotRealTime(spec.name().to_string(), bad));
    }
    if let Some(&bad) = input.iter().find(|c| !alpha.contains(c)) {
        return Err(RunError::BadInput(bad));
    }
    Ok(())
}

/// Observer hook for traced runs: called after the initial configuration and after every step.
pub type StepObserver<'a> = dyn FnMut(&MachineSpec, &Configuration, Option<&Event>) + 'a;

/// Runs a deterministic real-time machine until it halts, gets stuck, or has
/// consumed the whole input (there is no end marker).
pub fn run_deterministic(spec: &MachineSpec, input: &[Symbol]) -> Result<RunRecord, RunError> {
    run_deterministic_observed(spec, input, &mut |_, _, _| {})
}

pub fn run_deterministic_observed(
    spec: &MachineSpec,
    input: &[Symbol],
    observe: &mut StepObserver<'_>,
) -> Result<RunRecord, RunError> {
    check_runnable(spec, input)?;
    let mut c = Configuration::initial(spec, input);
    let mut events = Vec::new();
    observe(spec, &c, None);
    let mut stuck = false;
    while (c.steps as usize) < input.len() {
        match step_in_place(spec, &mut c)? {
            StepOutcome::Fired(rule) => {
                events.push(Event::Rule { step: c.steps, rule });
                if spec.is_halt(c.state) {
                    events.push(Event::Halt { step: c.steps });
                }
            }
            StepOutcome::Stuck => {
                stuck = true;
                events.push(Event::Stuck { step: c.steps });
            }
            StepOutcome::Halted => {}
        }
        observe(spec, &c, events.last());
        if stuck || spec.is_halt(c.state) {
            break;
        }
    }
    Ok(RunRecord {
        verdict: judge(spec, &c, stuck),
        steps: c.steps,
        space: c.space(),
        events,
    })
}

/// Runs an input-free machine for exactly `ticks` steps (or until stuck/halted).
pub fn run_clocked(spec: &MachineSpec, ticks: u64) -> Result<Configuration, RunError> {
    let mut c = Configuration::initial(spec, &[]);
    for _ in 0..ticks {
        match step_in_place(spec, &mut c)? {
            StepOutcome::Fired(_) => {}
            StepOutcome::Stuck | StepOutcome::Halted => break,
        }
    }
    Ok(c)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RealTimeVerdict {
    Pass,
    /// Indices of rules whose input move is not `R`.
    Fail(Vec<usize>),
    /// The machine has no input tape.
    NotApplicable,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RealTimeReport {
    pub verdict: RealTimeVerdict,
    /// Rules that overwrite the input symbol with a different one.
    pub warnings: Vec<String>,
}

impl RealTimeReport {
    pub fn passed(&self) -> bool {
        self.verdict == RealTimeVerdict::Pass
    }
}

/// A machine is real-time iff every rule advances the input head.
pub fn validate_real_time(spec: &MachineSpec) -> RealTimeReport {
    if !spec.has_input_tape() {
        return RealTimeReport {
            verdict: RealTimeVerdict::NotApplicable,
            warnings: Vec::new(),
        };
    }
    let mut bad = Vec::new();
    let mut warnings = Vec::new();
    for (i, r) in spec.rules().iter().enumerate() {
        if r.move_input != Some(Move::R) {
            bad.push(i);
        }
        if r.write_input != r.read_input {
            warnings.push(format!(
                "rule {i} ({}) rewrites the input symbol; it can never be re-read",
                spec.describe_rule(i)
            ));
        }
    }
    RealTimeReport {
        verdict: if bad.is_empty() {
            RealTimeVerdict::Pass
        } else {
            RealTimeVerdict::Fail(bad)
        },
        warnings,
    }
}
