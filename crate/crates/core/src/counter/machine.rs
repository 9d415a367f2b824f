use crate::tm::{step_in_place, Configuration, Event, GuessKind, MachineSpec, StateId, StepOutcome, Tape};
use crate::zoo::build_md;

use super::bits::{binary_add, binary_subtract, double_by_append0, Bits};
use super::ext::ExtendedSymbol;

/// Phase-two micro-operations executed per input symbol.
pub const DEFAULT_PHASE2_RATE: u32 = 8;

/// Tape names, in the order used by per-tape space vectors.
pub const TAPE_NAMES: [&str; 5] = ["current", "final", "work", "length", "diff"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CounterConfig {
    /// Micro-operations per tick once the second phase has started
    /// (a counter-machine step on WORK, or one whole add, double or subtract).
    pub phase2_rate: u32,
}

impl Default for CounterConfig {
    fn default() -> Self {
        CounterConfig {
            phase2_rate: DEFAULT_PHASE2_RATE,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phase {
    One,
    Two,
}

/// Why a branch was abandoned. Only the true branch is guaranteed to survive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum KillReason {
    /// Guessed a blank where the counter just wrote a digit.
    BlankOnDigit,
    /// Guessed a second marked cell.
    SecondMark,
    /// WORK did not hold exactly one marked cell when the second phase began.
    Malformed,
    /// The counter grew past the guessed most significant cell.
    Overflow,
    /// The continued simulation stopped with no digits to its left.
    NoDigits,
    /// The length formula went negative.
    NegativeLength,
}

impl KillReason {
    pub fn as_str(self) -> &'static str {
        match self {
            KillReason::BlankOnDigit => "blank-on-digit",
            KillReason::SecondMark => "second-mark",
            KillReason::Malformed => "malformed-work",
            KillReason::Overflow => "overflow",
            KillReason::NoDigits => "no-digits",
            KillReason::NegativeLength => "negative-length",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GuessEvent {
    pub tick: u64,
    pub cell: i64,
    pub alpha: ExtendedSymbol,
    pub kind: GuessKind,
}

/// One alternative offered when the counter writes a fresh cell in phase one.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CounterChoice {
    /// Guess the final content of the cell being written.
    Cell { cell: i64, alpha: ExtendedSymbol },
    /// Declare the cell being written the second most significant one: guess its
    /// final content, the content of the cell to its left, and the final control state.
    Trigger {
        cell: i64,
        second: ExtendedSymbol,
        msb: ExtendedSymbol,
        state: StateId,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Stage {
    Simulate { head: i64, state: StateId },
    AddPrefixes { v: Bits, next: usize },
    Double,
    Subtract,
    Done,
}

/// All tapes and finite-control registers of one branch.
#[derive(Debug, Clone)]
pub struct CounterState {
    /// The live counter machine.
    pub current: Configuration,
    /// Guessed end configuration; never receives the most significant cell.
    pub final_tape: Tape<ExtendedSymbol>,
    /// Copy of the guess, later rewritten by the continued simulation.
    pub work: Tape<ExtendedSymbol>,
    pub length: Bits,
    /// Number of written cells where CURRENT and FINAL disagree.
    pub diff: u32,
    pub phase: Phase,
    pub ticks: u64,
    /// Leftmost cell the counter has written (cells are written right to left).
    pub written_min: Option<i64>,
    pub marks_used: u8,
    pub msb_pos: Option<i64>,
    pub msb_guess: Option<ExtendedSymbol>,
    pub state_guess: Option<StateId>,
    /// Number held on WORK during the length arithmetic.
    pub acc: Option<Bits>,
    pub length_done: Option<u64>,
    pub killed: Option<(u64, KillReason)>,
    pub guess_log: Vec<GuessEvent>,
    /// Running maximum of cells used, per tape in [`TAPE_NAMES`] order.
    pub space: [usize; 5],
    stage: Stage,
}

impl CounterState {
    pub fn alive(&self) -> bool {
        self.killed.is_none()
    }

    pub fn max_space(&self) -> usize {
        self.space.iter().copied().max().unwrap_or(0)
    }

    pub fn phase2_done(&self) -> bool {
        self.stage == Stage::Done
    }

    pub fn trigger_tick(&self) -> Option<u64> {
        self.guess_log
            .iter()
            .find(|g| g.kind == GuessKind::PhaseTrigger)
            .map(|g| g.tick)
    }

    fn kill(&mut self, reason: KillReason) {
        self.killed.get_or_insert((self.ticks, reason));
    }

    /// The counter's symbol at `c` paired with "its head is here".
    pub fn ext_current(&self, c: i64) -> ExtendedSymbol {
        let t = &self.current.work[0];
        ExtendedSymbol::new(t.get(c), t.head() == c)
    }

    fn mismatch(&self, c: i64) -> bool {
        let written = self.written_min.is_some_and(|m| c >= m && c <= 0);
        written && Some(c) != self.msb_pos && self.final_tape.get(c) != self.ext_current(c)
    }

    fn window_mismatch(&self, head: i64) -> u32 {
        (head - 1..=head + 1).map(|c| u32::from(self.mismatch(c))).sum()
    }

    /// DIFF recomputed from scratch over every written cell.
    pub fn recount_diff(&self) -> u32 {
        match self.written_min {
            Some(m) => (m..=0).map(|c| u32::from(self.mismatch(c))).sum(),
            None => 0,
        }
    }

    fn measure(&mut self) {
        let work = self.work.space_used().max(self.acc.as_ref().map_or(0, Bits::len));
        let now = [
            self.current.work[0].space_used(),
            self.final_tape.space_used(),
            work,
            self.length.len(),
            (self.diff as usize).max(1),
        ];
        for (m, v) in self.space.iter_mut().zip(now) {
            *m = (*m).max(v);
        }
    }

    /// Events of this branch so far, for records and traces.
    pub fn events(&self, md: &MachineSpec) -> Vec<Event> {
        let mut out = Vec::new();
        for g in &self.guess_log {
            out.push(Event::Guess {
                tick: g.tick,
                cell: g.cell,
                symbol: g.alpha.to_string(),
                kind: g.kind,
            });
            if g.kind == GuessKind::MsbGuess {
                out.push(Event::PhaseSwitch {
                    tick: g.tick,
                    state_guess: self
                        .state_guess
                        .map(|s| md.state_name(s).to_string())
                        .unwrap_or_default(),
                });
            }
        }
        if let Some(t) = self.length_done {
            out.push(Event::LengthComplete {
                tick: t,
                bits: self.length.to_string(),
            });
        }
        if let Some((t, why)) = self.killed {
            out.push(Event::Killed {
                tick: t,
                reason: why.as_str().to_string(),
            });
        }
        out
    }
}

/// What a tick did before its nondeterministic choice was resolved.
#[derive(Debug, Clone, Copy)]
pub struct Pending {
    old_head: i64,
    before: u32,
    /// Cell written for the first time this tick.
    pub fresh: Option<i64>,
    wrote_digit: bool,
}

/// The guess-and-check length counter: drives CURRENT with the counter machine
/// and runs the FINAL / WORK / LENGTH / DIFF processes alongside it.
#[derive(Debug, Clone)]
pub struct Counter {
    md: MachineSpec,
    cfg: CounterConfig,
    q0: StateId,
}

impl Default for Counter {
    fn default() -> Self {
        Self::new(CounterConfig::default())
    }
}

impl Counter {
    pub fn new(cfg: CounterConfig) -> Self {
        let md = build_md();
        let q0 = md.state_id("q0").expect("md has q0");
        Counter { md, cfg, q0 }
    }

    pub fn config(&self) -> CounterConfig {
        self.cfg
    }

    pub fn md(&self) -> &MachineSpec {
        &self.md
    }

    pub fn start(&self) -> CounterState {
        CounterState {
            current: Configuration::initial(&self.md, &[]),
            final_tape: Tape::new(),
            work: Tape::new(),
            length: Bits::zero(),
            diff: 0,
            phase: Phase::One,
            ticks: 0,
            written_min: None,
            marks_used: 0,
            msb_pos: None,
            msb_guess: None,
            state_guess: None,
            acc: None,
            length_done: None,
            killed: None,
            guess_log: Vec::new(),
            space: [1; 5],
            stage: Stage::Done,
        }
    }

    /// First half of a tick: one counter-machine step on CURRENT, with the
    /// mirrored heads following it.
    pub fn advance(&self, s: &mut CounterState) -> Pending {
        let old_head = s.current.work[0].head();
        let before = s.window_mismatch(old_head);
        let rule = match step_in_place(&self.md, &mut s.current) {
            Ok(StepOutcome::Fired(r)) => r,
            other => unreachable!("the counter machine is total and never halts: {other:?}"),
        };
        let wrote_digit = self.md.rules()[rule].write_work[0] != '#';
        let fresh = s.written_min.is_none_or(|m| old_head < m);
        if fresh {
            s.written_min = Some(old_head);
        }
        s.ticks += 1;
        let head = s.current.work[0].head();
        s.final_tape.move_to(head);
        if s.phase == Phase::One {
            s.work.move_to(head);
        }
        Pending {
            old_head,
            before,
            fresh: fresh.then_some(old_head),
            wrote_digit,
        }
    }

    /// The alternatives this tick must choose between (empty when deterministic).
    pub fn choices(&self, s: &CounterState, p: &Pending) -> Vec<CounterChoice> {
        match p.fresh {
            Some(cell) if s.phase == Phase::One && s.alive() => {
                let mut out = Vec::with_capacity(78);
                out.extend(
                    ExtendedSymbol::ALL
                        .iter()
                        .map(|&alpha| CounterChoice::Cell { cell, alpha }),
                );
                for second in ExtendedSymbol::ALL {
                    for msb in ExtendedSymbol::ALL {
                        for state in [self.q0, 1 - self.q0] {
                            out.push(CounterChoice::Trigger {
                                cell,
                                second,
                                msb,
                                state,
                            });
                        }
                    }
                }
                out
            }
            _ => Vec::new(),
        }
    }

    /// Second half of a tick: applies the chosen guess, runs phase-two work and
    /// settles DIFF.
    pub fn resolve(&self, s: &mut CounterState, p: Pending, choice: Option<CounterChoice>) {
        let tick = s.ticks;
        match (s.phase, p.fresh, choice) {
            (Phase::One, Some(_), Some(CounterChoice::Cell { cell, alpha })) => {
                if p.wrote_digit && !alpha.is_digit() {
                    s.kill(KillReason::BlankOnDigit);
                } else if alpha.marked && s.marks_used > 0 {
                    s.kill(KillReason::SecondMark);
                } else {
                    s.final_tape.set(cell, alpha);
                    s.work.set(cell, alpha);
                    s.marks_used += u8::from(alpha.marked);
                    s.guess_log.push(GuessEvent {
                        tick,
                        cell,
                        alpha,
                        kind: GuessKind::CellGuess,
                    });
                }
            }
            (
                Phase::One,
                Some(_),
                Some(CounterChoice::Trigger {
                    cell,
                    second,
                    msb,
                    state,
                }),
            ) => self.trigger(s, &p, cell, second, msb, state),
            (Phase::One, Some(_), None) => panic!("fresh write at tick {tick} needs a choice"),
            (Phase::Two, Some(cell), _) if Some(cell) != s.msb_pos => s.kill(KillReason::Overflow),
            _ => {}
        }
        if s.alive() && s.phase == Phase::Two {
            self.phase2_work(s);
        }
        let after = s.window_mismatch(p.old_head);
        s.diff = (i64::from(s.diff) + i64::from(after) - i64::from(p.before)) as u32;
        s.measure();
    }

    fn trigger(
        &self,
        s: &mut CounterState,
        p: &Pending,
        cell: i64,
        second: ExtendedSymbol,
        msb: ExtendedSymbol,
        state: StateId,
    ) {
        if p.wrote_digit && !second.is_digit() {
            return s.kill(KillReason::BlankOnDigit);
        }
        if s.marks_used + u8::from(second.marked) + u8::from(msb.marked) != 1 {
            return s.kill(KillReason::Malformed);
        }
        let tick = s.ticks;
        s.final_tape.set(cell, second);
        s.work.set(cell, second);
        s.work.set(cell - 1, msb);
        s.msb_pos = Some(cell - 1);
        s.msb_guess = Some(msb);
        s.state_guess = Some(state);
        s.phase = Phase::Two;
        s.guess_log.push(GuessEvent {
            tick,
            cell,
            alpha: second,
            kind: GuessKind::PhaseTrigger,
        });
        s.guess_log.push(GuessEvent {
            tick,
            cell: cell - 1,
            alpha: msb,
            kind: GuessKind::MsbGuess,
        });
        let mark = (cell - 1..=0)
            .find(|&c| s.work.get(c).marked)
            .expect("exactly one mark was checked");
        s.work.move_to(mark);
        s.length = Bits::zero();
        s.stage = Stage::Simulate { head: mark, state };
    }

    /// Runs up to `phase2_rate` micro-operations of the length computation.
    fn phase2_work(&self, s: &mut CounterState) {
        let mut budget = self.cfg.phase2_rate;
        while budget > 0 {
            match std::mem::replace(&mut s.stage, Stage::Done) {
                Stage::Done => return,
                Stage::Simulate { head, state } => {
                    let sym = s.work.get(head).base;
                    if state == self.q0 && sym == '#' {
                        // Normal form reached: read the number left of the head.
                        let mut digits = Vec::new();
                        let mut c = head - 1;
                        while s.work.get(c).is_digit() {
                            digits.push(s.work.get(c).base == '1');
                            c -= 1;
                        }
                        if digits.is_empty() {
                            return s.kill(KillReason::NoDigits);
                        }
                        digits.reverse();
                        let v = Bits::from_digits(digits);
                        s.acc = Some(v.clone());
                        s.stage = Stage::AddPrefixes { v, next: 1 };
                        continue;
                    }
                    let scanned = [sym];
                    let rule = self
                        .md
                        .matching_rules(state, None, &scanned)
                        .next()
                        .expect("the counter machine is total");
                    let r = &self.md.rules()[rule];
                    s.work.set(head, ExtendedSymbol::new(r.write_work[0], false));
                    let next = head + r.move_work[0].delta();
                    s.work.move_to(next);
                    s.length = s.length.increment();
                    s.stage = Stage::Simulate {
                        head: next,
                        state: r.to,
                    };
                }
                Stage::AddPrefixes { v, next } => {
                    if next >= v.len() {
                        s.stage = Stage::Double;
                        continue;
                    }
                    let acc = s.acc.take().expect("set at normal form");
                    s.acc = Some(binary_add(&acc, &v.prefix(next)));
                    s.stage = Stage::AddPrefixes { v, next: next + 1 };
                }
                Stage::Double => {
                    s.acc = s.acc.as_ref().map(double_by_append0);
                    s.stage = Stage::Subtract;
                }
                Stage::Subtract => {
                    let acc = s.acc.as_ref().expect("set at normal form");
                    match binary_subtract(acc, &s.length) {
                        Ok(len) => {
                            s.length = len;
                            s.length_done = Some(s.ticks);
                        }
                        Err(_) => return s.kill(KillReason::NegativeLength),
                    }
                }
            }
            budget -= 1;
        }
    }

    /// Whether a branch that has consumed its whole input ends in the special state.
    pub fn is_special(&self, s: &CounterState) -> bool {
        let Some(msb) = s.msb_pos else {
            return false;
        };
        s.alive()
            && s.phase == Phase::Two
            && s.phase2_done()
            && s.diff == 0
            && Some(s.ext_current(msb)) == s.msb_guess
            && s.state_guess == Some(s.current.state)
    }

    /// All successors of a phase-one state after one tick, with the choice that produced each.
    pub fn tick_phase1(&self, s: &CounterState) -> Vec<(Option<CounterChoice>, CounterState)> {
        let mut base = s.clone();
        let p = self.advance(&mut base);
        let opts = self.choices(&base, &p);
        if opts.is_empty() {
            self.resolve(&mut base, p, None);
            return vec![(None, base)];
        }
        opts.into_iter()
            .map(|c| {
                let mut next = base.clone();
                self.resolve(&mut next, p, Some(c));
                (Some(c), next)
            })
            .collect()
    }

    /// The unique successor of a phase-two state.
    pub fn tick_phase2(&self, s: &CounterState) -> CounterState {
        let mut next = s.clone();
        let p = self.advance(&mut next);
        self.resolve(&mut next, p, None);
        next
    }

    /// Successor states of one tick, in choice order.
    pub fn successors(&self, s: &CounterState) -> Vec<CounterState> {
        match s.phase {
            Phase::One => self.tick_phase1(s).into_iter().map(|(_, st)| st).collect(),
            Phase::Two => vec![self.tick_phase2(s)],
        }
    }
}
