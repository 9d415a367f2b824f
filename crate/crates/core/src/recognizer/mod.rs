//! Unary recognizers: guess the input length in binary, then decide the binary word
//! within what is left of the real-time step budget.

mod decider;

use std::sync::Arc;

use thiserror::Error;

pub use decider::{AlwaysAccept, BudgetedDecider, Decision, DecisionVerdict, PrattDecider, Singleton};

use crate::counter::{explore_counter_range, run_counter, BranchOutcome, Counter, CounterSummary};
use crate::guess::{RandomSource, Strategy};
use crate::tm::{Bounds, Event, RunRecord, Truncation, Verdict};
use crate::zoo::{unpad, BinaryWord, PadError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RecognizerError {
    #[error("input length must be at least 1")]
    EmptyInput,
    #[error("unknown decider `{0}` (primes, always or singleton:WORD)")]
    UnknownDecider(String),
    #[error(transparent)]
    Pad(#[from] PadError),
}

/// Share of the guessed length reserved for the decider: `length * numerator / denominator`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BudgetPolicy {
    pub numerator: u64,
    pub denominator: u64,
}

impl Default for BudgetPolicy {
    fn default() -> Self {
        BudgetPolicy {
            numerator: 1,
            denominator: 2,
        }
    }
}

impl BudgetPolicy {
    pub fn reserve(&self, length: u64) -> u64 {
        length * self.numerator / self.denominator
    }
}

#[derive(Clone)]
pub struct PaddedRecognizer {
    decider: Arc<dyn BudgetedDecider>,
    counter: Counter,
    policy: BudgetPolicy,
}

pub fn make_padded_recognizer(d: impl BudgetedDecider + 'static, policy: BudgetPolicy) -> PaddedRecognizer {
    PaddedRecognizer {
        decider: Arc::new(d),
        counter: Counter::default(),
        policy,
    }
}

pub fn make_shared_recognizer(d: Arc<dyn BudgetedDecider>, policy: BudgetPolicy) -> PaddedRecognizer {
    PaddedRecognizer {
        decider: d,
        counter: Counter::default(),
        policy,
    }
}

/// Recognizer for `{ a^p : p prime }` with certificate guessing as the decider.
pub fn primes_unary() -> PaddedRecognizer {
    make_padded_recognizer(PrattDecider, BudgetPolicy::default())
}

/// Parses `primes`, `always` or `singleton:WORD`.
pub fn decider_from_name(name: &str) -> Result<Arc<dyn BudgetedDecider>, RecognizerError> {
    match name {
        "primes" | "pratt" => Ok(Arc::new(PrattDecider)),
        "always" => Ok(Arc::new(AlwaysAccept)),
        _ => match name.strip_prefix("singleton:") {
            Some(word) => Ok(Arc::new(Singleton(BinaryWord::parse(word)?))),
            None => Err(RecognizerError::UnknownDecider(name.to_string())),
        },
    }
}

/// Decider run on one special branch of the counter.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BranchVerdict {
    pub length: u64,
    pub completion_tick: u64,
    pub budget: u64,
    pub decision: Decision,
}

#[derive(Debug, Clone)]
pub struct Recognition {
    pub n: u64,
    pub accepted: bool,
    pub counter: CounterSummary,
    pub branches: Vec<BranchVerdict>,
    pub records: Vec<RunRecord>,
}

impl Recognition {
    pub fn truncated(&self) -> Option<Truncation> {
        self.counter.truncated
    }

    /// The accepting branch if there is one, else the first special branch.
    pub fn witness(&self) -> Option<&BranchVerdict> {
        self.branches
            .iter()
            .find(|b| b.decision.accepted())
            .or_else(|| self.branches.first())
    }
}

#[derive(Debug, Clone, Copy)]
enum Mode {
    Exhaustive,
    Guided,
    Random(u64),
}

impl PaddedRecognizer {
    pub fn with_counter(mut self, counter: Counter) -> Self {
        self.counter = counter;
        self
    }

    pub fn decider(&self) -> &dyn BudgetedDecider {
        self.decider.as_ref()
    }

    pub fn policy(&self) -> BudgetPolicy {
        self.policy
    }

    fn judge(&self, n: u64, o: &BranchOutcome, mode: Mode) -> BranchVerdict {
        let length = o.length.value().unwrap_or(0);
        let completion_tick = o.completion_tick.unwrap_or(n);
        // The decider gets its reserve, but must also finish before the input ends.
        let budget = self.policy.reserve(length).min(n.saturating_sub(completion_tick));
        let decision = match unpad(length) {
            Err(_) => Decision {
                verdict: DecisionVerdict::Reject,
                steps: 0,
                detail: None,
            },
            Ok(w) => match mode {
                Mode::Exhaustive => self.decider.decide_exhaustive(&w, budget),
                Mode::Guided => self.decider.decide_guided(&w, budget),
                Mode::Random(seed) => self.decider.decide(&w, budget, &mut RandomSource::new(seed)),
            },
        };
        BranchVerdict {
            length,
            completion_tick,
            budget,
            decision,
        }
    }

    fn conclude(&self, counter: CounterSummary, mode: Mode, counter_records: Vec<RunRecord>) -> Recognition {
        let n = counter.n;
        let branches: Vec<BranchVerdict> = counter.specials.iter().map(|o| self.judge(n, o, mode)).collect();
        let records = counter_records
            .into_iter()
            .filter(|r| r.verdict == Verdict::Accept)
            .zip(&branches)
            .map(|(mut rec, b)| {
                rec.events.push(Event::Decider {
                    verdict: b.decision.verdict.as_str().to_string(),
                    steps: b.decision.steps,
                    budget: b.budget,
                });
                if let Some(detail) = &b.decision.detail {
                    rec.events.push(Event::Certificate { detail: detail.clone() });
                }
                rec.verdict = if b.decision.accepted() {
                    Verdict::Accept
                } else {
                    Verdict::Reject
                };
                rec
            })
            .collect();
        Recognition {
            n,
            accepted: branches.iter().any(|b| b.decision.accepted()),
            counter,
            branches,
            records,
        }
    }

    /// Whether some branch accepts `a^n`: the counter ends special with LENGTH = `m`
    /// and the decider accepts the binary word of `m` within budget.
    pub fn accepts_unary(&self, n: u64, strategy: Strategy, bounds: Bounds) -> Result<Recognition, RecognizerError> {
        if n == 0 {
            return Err(RecognizerError::EmptyInput);
        }
        let run = run_counter(&self.counter, n, strategy, bounds).map_err(|_| RecognizerError::EmptyInput)?;
        let mode = match strategy {
            Strategy::Exhaustive => Mode::Exhaustive,
            Strategy::Guided => Mode::Guided,
            Strategy::Random { seed, .. } => Mode::Random(seed.wrapping_add(1)),
        };
        Ok(self.conclude(run.summary, mode, run.records))
    }

    /// Exhaustive recognition of every length `1..=max_n` in one pass over the counter's branches.
    pub fn recognize_range(&self, max_n: u64, bounds: Bounds) -> Vec<Recognition> {
        explore_counter_range(&self.counter, max_n, bounds)
            .into_iter()
            .map(|sum| self.conclude(sum, Mode::Exhaustive, Vec::new()))
            .collect()
    }
}

/// Free function form of [`PaddedRecognizer::accepts_unary`].
pub fn accepts_unary(
    r: &PaddedRecognizer,
    n: u64,
    strategy: Strategy,
    bounds: Bounds,
) -> Result<Recognition, RecognizerError> {
    r.accepts_unary(n, strategy, bounds)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BudgetRow {
    pub n: u64,
    /// Tick at which LENGTH was complete.
    pub s: Option<u64>,
    /// Decider steps.
    pub d: Option<u64>,
    /// `n - s - d`.
    pub slack: Option<i64>,
    pub accepted: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BudgetReport {
    pub rows: Vec<BudgetRow>,
    /// Smallest tested length from which every row has non-negative slack.
    pub n0: Option<u64>,
}

pub fn budget_row(rec: &Recognition) -> BudgetRow {
    let w = rec.witness();
    let s = w.map(|b| b.completion_tick);
    let d = w.map(|b| b.decision.steps);
    BudgetRow {
        n: rec.n,
        s,
        d,
        slack: s.zip(d).map(|(s, d)| rec.n as i64 - s as i64 - d as i64),
        accepted: rec.accepted,
    }
}

/// Smallest `n0` such that every row with `n >= n0` satisfies `ok`.
pub fn threshold<T>(rows: &[T], key: impl Fn(&T) -> u64, ok: impl Fn(&T) -> bool) -> Option<u64> {
    let mut n0 = None;
    for r in rows.iter().rev() {
        if !ok(r) {
            break;
        }
        n0 = Some(key(r));
    }
    n0
}

pub fn budget_report(rows: Vec<BudgetRow>) -> BudgetReport {
    let n0 = threshold(&rows, |r| r.n, |r| r.slack.is_some_and(|s| s >= 0));
    BudgetReport { rows, n0 }
}

/// Budget table for `ns` under `strategy`.
pub fn budget_report_for(
    r: &PaddedRecognizer,
    ns: impl IntoIterator<Item = u64>,
    strategy: Strategy,
    bounds: Bounds,
) -> Result<BudgetReport, RecognizerError> {
    let rows = ns
        .into_iter()
        .map(|n| r.accepts_unary(n, strategy, bounds).map(|rec| budget_row(&rec)))
        .collect::<Result<_, _>>()?;
    Ok(budget_report(rows))
}
