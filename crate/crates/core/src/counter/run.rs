use crate::guess::{GuessSource, RandomSource, Strategy};
use crate::oracles::{md_reference, MdSnapshot, MdState};
use crate::tm::trace::{TapeView, TraceRecord};
use crate::tm::{explore_branches, Bounds, Branching, Event, Expansion, RunRecord, Tape, Truncation, Verdict};

use super::bits::Bits;
use super::ext::ExtendedSymbol;
use super::machine::{Counter, CounterChoice, CounterState, KillReason, Phase};
use super::CounterError;

/// The counter machine's configuration after `n` steps, with the head cell marked.
pub fn md_final_config(n: u64) -> Tape<ExtendedSymbol> {
    let (_, snap) = md_reference(n);
    let mut t = Tape::new();
    for c in snapshot_min(&snap)..=0 {
        t.set(c, snapshot_ext(&snap, c));
    }
    t.move_to(snap.head);
    t
}

fn snapshot_min(s: &MdSnapshot) -> i64 {
    (-(s.cells.len() as i64 - 1)).min(s.head)
}

fn snapshot_ext(s: &MdSnapshot, c: i64) -> ExtendedSymbol {
    ExtendedSymbol::new(s.cell(c), s.head == c)
}

/// Picks the alternative that agrees with the true configuration after `n` steps.
pub struct GuidedCounterSource {
    truth: MdSnapshot,
    second_msb: i64,
    state: usize,
}

impl GuidedCounterSource {
    pub fn new(n: u64) -> Self {
        let (_, truth) = md_reference(n);
        let second_msb = snapshot_min(&truth) + 1;
        let state = match truth.state {
            MdState::Q0 => 0,
            MdState::Q1 => 1,
        };
        GuidedCounterSource {
            truth,
            second_msb,
            state,
        }
    }

    fn expected(&self, cell: i64) -> CounterChoice {
        let here = snapshot_ext(&self.truth, cell);
        if cell == self.second_msb {
            CounterChoice::Trigger {
                cell,
                second: here,
                msb: snapshot_ext(&self.truth, cell - 1),
                state: self.state,
            }
        } else {
            CounterChoice::Cell { cell, alpha: here }
        }
    }
}

impl GuessSource<CounterChoice> for GuidedCounterSource {
    fn choose(&mut self, options: &[CounterChoice]) -> usize {
        let cell = match options.first() {
            Some(CounterChoice::Cell { cell, .. } | CounterChoice::Trigger { cell, .. }) => *cell,
            None => return 0,
        };
        let want = self.expected(cell);
        options.iter().position(|o| *o == want).unwrap_or(0)
    }
}

/// End-of-input result of one branch.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BranchOutcome {
    pub special: bool,
    pub length: Bits,
    pub completion_tick: Option<u64>,
    pub trigger_tick: Option<u64>,
    pub space: [usize; 5],
    pub killed: Option<(u64, KillReason)>,
    pub ticks: u64,
}

impl BranchOutcome {
    fn of(counter: &Counter, s: &CounterState) -> Self {
        BranchOutcome {
            special: counter.is_special(s),
            length: s.length.clone(),
            completion_tick: s.length_done,
            trigger_tick: s.trigger_tick(),
            space: s.space,
            killed: s.killed,
            ticks: s.ticks,
        }
    }

    pub fn max_space(&self) -> usize {
        self.space.iter().copied().max().unwrap_or(0)
    }
}

fn record_of(counter: &Counter, s: &CounterState) -> RunRecord {
    let special = counter.is_special(s);
    let mut events = s.events(counter.md());
    if special {
        events.push(Event::Special { tick: s.ticks });
    }
    RunRecord {
        verdict: if special { Verdict::Accept } else { Verdict::Reject },
        steps: s.ticks,
        space: s.space.to_vec(),
        events,
    }
}

/// Aggregate over the branches of one input length.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CounterSummary {
    pub n: u64,
    pub strategy: String,
    pub branches: u64,
    pub special_branches: u64,
    /// Some branch ends special with LENGTH equal to `n`.
    pub witness_exists: bool,
    /// Every special branch has LENGTH equal to `n`.
    pub all_special_correct: bool,
    /// Tick at which LENGTH was finished on the witness branch (the earliest,
    /// when several special branches are correct).
    pub completion_tick: Option<u64>,
    pub witness_length: Option<Bits>,
    /// Most cells used on any tape of any branch.
    pub max_space: usize,
    pub truncated: Option<Truncation>,
    /// Outcomes of the special branches, in exploration order.
    pub specials: Vec<BranchOutcome>,
}

impl CounterSummary {
    fn empty(n: u64, strategy: &str) -> Self {
        CounterSummary {
            n,
            strategy: strategy.to_string(),
            branches: 0,
            special_branches: 0,
            witness_exists: false,
            all_special_correct: true,
            completion_tick: None,
            witness_length: None,
            max_space: 0,
            truncated: None,
            specials: Vec::new(),
        }
    }

    fn add(&mut self, o: &BranchOutcome) {
        self.branches += 1;
        self.max_space = self.max_space.max(o.max_space());
        self.add_special(o);
    }

    fn add_special(&mut self, o: &BranchOutcome) {
        if o.special {
            self.special_branches += 1;
            self.specials.push(o.clone());
            let correct = o.length.value() == Some(self.n);
            self.all_special_correct &= correct;
            let earlier = match (o.completion_tick, self.completion_tick) {
                (Some(t), Some(best)) => t < best,
                _ => !self.witness_exists,
            };
            if correct && earlier {
                self.witness_exists = true;
                self.completion_tick = o.completion_tick;
                self.witness_length = Some(o.length.clone());
            }
        }
    }

    /// Soundness and completeness both hold and nothing was cut off.
    pub fn passed(&self) -> bool {
        self.witness_exists && self.all_special_correct && self.truncated.is_none()
    }
}

#[derive(Debug, Clone)]
pub struct CounterRun {
    pub summary: CounterSummary,
    /// Records of the special branches (all walks for the guided and random strategies).
    pub records: Vec<RunRecord>,
}

struct FixedLength<'a> {
    counter: &'a Counter,
    n: u64,
}

impl Branching for FixedLength<'_> {
    type State = CounterState;
    type Outcome = (BranchOutcome, Option<RunRecord>);

    fn expand(&self, s: CounterState) -> Expansion<CounterState, Self::Outcome> {
        if !s.alive() || s.ticks == self.n {
            let o = BranchOutcome::of(self.counter, &s);
            let rec = o.special.then(|| record_of(self.counter, &s));
            return Expansion::Leaf((o, rec));
        }
        Expansion::Children(self.counter.successors(&s))
    }

    fn space(&self, s: &CounterState) -> usize {
        s.max_space()
    }
}

/// Drives one branch for `n` ticks, taking every choice from `src`.
pub fn walk(counter: &Counter, n: u64, src: &mut dyn GuessSource<CounterChoice>) -> CounterState {
    let mut s = counter.start();
    while s.alive() && s.ticks < n {
        let p = counter.advance(&mut s);
        let opts = counter.choices(&s, &p);
        let choice = (!opts.is_empty()).then(|| opts[src.choose(&opts)]);
        counter.resolve(&mut s, p, choice);
    }
    s
}

/// Runs the counter on an input of length `n` under `strategy`.
pub fn run_counter(counter: &Counter, n: u64, strategy: Strategy, bounds: Bounds) -> Result<CounterRun, CounterError> {
    if n == 0 {
        return Err(CounterError::Domain("input length must be at least 1".into()));
    }
    let mut summary = CounterSummary::empty(n, &strategy.to_string());
    let mut records = Vec::new();
    match strategy {
        Strategy::Exhaustive => {
            let ex = explore_branches(&FixedLength { counter, n }, counter.start(), bounds);
            for (o, rec) in &ex.records {
                summary.add(o);
                records.extend(rec.clone());
            }
            summary.truncated = ex.truncated;
        }
        Strategy::Guided => {
            let s = walk(counter, n, &mut GuidedCounterSource::new(n));
            summary.add(&BranchOutcome::of(counter, &s));
            records.push(record_of(counter, &s));
        }
        Strategy::Random { seed, samples } => {
            let mut src = RandomSource::new(seed);
            for _ in 0..samples {
                let s = walk(counter, n, &mut src);
                summary.add(&BranchOutcome::of(counter, &s));
                records.push(record_of(counter, &s));
            }
        }
    }
    Ok(CounterRun { summary, records })
}

/// Exhaustive summaries for every length `1..=max_n` from a single depth-first
/// pass: the branches for length `n` are the tree cut at depth `n`.
pub fn explore_counter_range(counter: &Counter, max_n: u64, bounds: Bounds) -> Vec<CounterSummary> {
    let top = max_n as usize;
    let mut sums: Vec<CounterSummary> = (0..=max_n).map(|n| CounterSummary::empty(n, "exhaustive")).collect();
    let mut alive_at = vec![0u64; top + 1];
    let mut alive_space = vec![0usize; top + 1];
    let mut killed_at = vec![0u64; top + 1];
    let mut killed_space = vec![0usize; top + 1];
    let mut space_cut: Option<u64> = None;
    let mut leaves = 0u64;
    let mut branch_cut = false;
    let mut stack = vec![counter.start()];
    while let Some(s) = stack.pop() {
        let t = s.ticks as usize;
        if s.max_space() > bounds.max_space {
            space_cut = Some(space_cut.map_or(s.ticks, |c| c.min(s.ticks)));
            leaves += 1;
            continue;
        }
        if !s.alive() {
            killed_at[t] += 1;
            killed_space[t] = killed_space[t].max(s.max_space());
            leaves += 1;
        } else if t > 0 {
            alive_at[t] += 1;
            alive_space[t] = alive_space[t].max(s.max_space());
            if counter.is_special(&s) {
                sums[t].add_special(&BranchOutcome::of(counter, &s));
            }
        }
        if s.alive() && t < top {
            stack.extend(counter.successors(&s).into_iter().rev());
        } else if s.alive() {
            leaves += 1;
        }
        if leaves > bounds.max_branches as u64 {
            branch_cut = true;
            break;
        }
    }
    let (mut kills, mut kspace) = (0u64, 0usize);
    for n in 1..=top {
        kills += killed_at[n];
        kspace = kspace.max(killed_space[n]);
        let sum = &mut sums[n];
        sum.branches = alive_at[n] + kills;
        sum.max_space = alive_space[n].max(kspace);
        if branch_cut {
            sum.truncated = Some(Truncation::Branches);
        } else if space_cut.is_some_and(|c| c <= n as u64) {
            sum.truncated = Some(Truncation::Space);
        }
    }
    sums.remove(0);
    sums
}

/// One trace record per tick of a single walk.
pub fn trace_counter(counter: &Counter, n: u64, src: &mut dyn GuessSource<CounterChoice>) -> Vec<TraceRecord> {
    let mut s = counter.start();
    let mut out = vec![trace_record(counter, &s, None)];
    while s.alive() && s.ticks < n {
        let seen = s.events(counter.md()).len();
        let p = counter.advance(&mut s);
        let opts = counter.choices(&s, &p);
        let choice = (!opts.is_empty()).then(|| opts[src.choose(&opts)]);
        counter.resolve(&mut s, p, choice);
        let mut events = s.events(counter.md());
        if s.ticks == n && counter.is_special(&s) {
            events.push(Event::Special { tick: s.ticks });
        }
        let new = events.get(seen..).unwrap_or(&[]);
        if new.is_empty() {
            out.push(trace_record(counter, &s, None));
        }
        for e in new {
            out.push(trace_record(counter, &s, Some(e)));
        }
    }
    out
}

fn trace_record(counter: &Counter, s: &CounterState, event: Option<&Event>) -> TraceRecord {
    let phase = match s.phase {
        Phase::One => "one",
        Phase::Two => "two",
    };
    let bits = |name: &str, text: String| TapeView {
        name: name.to_string(),
        head: 0,
        window: text,
    };
    TraceRecord {
        step: s.ticks,
        state: format!("{}/{phase}", counter.md().state_name(s.current.state)),
        input_pos: s.ticks as i64,
        tapes: vec![
            TapeView::of("current", &s.current.work[0]),
            TapeView::of("final", &s.final_tape),
            TapeView::of("work", &s.work),
            bits("length", s.length.to_string()),
            bits("diff", "1".repeat(s.diff as usize)),
        ],
        event: event.map(|e| e.tag().to_string()),
        detail: event.cloned(),
    }
}
