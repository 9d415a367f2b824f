//! Verification suites and reports behind the `rtlab` binary.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use rayon::prelude::*;
use rtlab_core::counter::{
    explore_counter_range, run_counter, space_envelope, steps_to_config, Counter, CounterSummary,
};
use rtlab_core::guess::Strategy;
use rtlab_core::oracles::{
    is_perfect_square, md_reference, nerode_lower_bound, square_language_member, trial_division_is_prime,
};
use rtlab_core::recognizer::{budget_report, budget_row, primes_unary, Recognition};
use rtlab_core::tm::{run_clocked, run_deterministic, step_in_place, Bounds, Configuration, MachineSpec};
use rtlab_core::zoo::{build_md, build_ms};

/// How a run ended, mapped onto the process exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Inconclusive => "inconclusive",
        }
    }

    pub fn exit_code(self) -> ExitCode {
        match self {
            Status::Pass => ExitCode::SUCCESS,
            Status::Fail => ExitCode::from(1),
            Status::Inconclusive => ExitCode::from(3),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Case {
    /// Ordering key; cases are reported sorted by it.
    pub key: u64,
    pub name: String,
    pub status: Status,
    pub detail: String,
}

impl Case {
    fn new(key: u64, name: impl Into<String>, ok: bool, detail: String) -> Self {
        Case {
            key,
            name: name.into(),
            status: if ok { Status::Pass } else { Status::Fail },
            detail,
        }
    }
}

/// Outcome of one suite. Rendering is deterministic: parameters and cases are sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationReport {
    pub suite: String,
    pub params: BTreeMap<String, String>,
    pub cases: Vec<Case>,
    /// Summary lines that are not per-case (thresholds, fitted constants).
    pub notes: Vec<String>,
    /// Where the implementation settles a point the construction leaves open.
    pub deviations: Vec<String>,
}

impl VerificationReport {
    pub fn new(suite: &str) -> Self {
        VerificationReport {
            suite: suite.to_string(),
            params: BTreeMap::new(),
            cases: Vec::new(),
            notes: Vec::new(),
            deviations: Vec::new(),
        }
    }

    pub fn param(mut self, k: &str, v: impl ToString) -> Self {
        self.params.insert(k.to_string(), v.to_string());
        self
    }

    fn sort(&mut self) {
        self.cases.sort_by(|a, b| (a.key, &a.name).cmp(&(b.key, &b.name)));
    }

    /// Inconclusive beats fail beats pass.
    pub fn status(&self) -> Status {
        self.cases.iter().map(|c| c.status).max().unwrap_or(Status::Pass)
    }

    pub fn passed(&self) -> usize {
        self.cases.iter().filter(|c| c.status == Status::Pass).count()
    }

    pub fn render(&self) -> String {
        let mut out = format!("suite {}\n", self.suite);
        for (k, v) in &self.params {
            let _ = writeln!(out, "param {k}={v}");
        }
        for c in &self.cases {
            let _ = writeln!(out, "case {} {} {}", c.name, c.status.as_str(), c.detail);
        }
        for n in &self.notes {
            let _ = writeln!(out, "note {n}");
        }
        for d in &self.deviations {
            let _ = writeln!(out, "deviation {d}");
        }
        let _ = writeln!(
            out,
            "summary {} {}/{}",
            self.status().as_str(),
            self.passed(),
            self.cases.len()
        );
        out
    }

    /// One JSON object per line: a header, the cases, then a summary.
    pub fn to_json_lines(&self) -> String {
        let mut lines = vec![serde_json::json!({
            "record": "header",
            "suite": self.suite,
            "params": self.params,
        })];
        lines.extend(self.cases.iter().map(|c| {
            serde_json::json!({
                "record": "case",
                "name": c.name,
                "status": c.status.as_str(),
                "detail": c.detail,
            })
        }));
        lines.push(serde_json::json!({
            "record": "summary",
            "status": self.status().as_str(),
            "passed": self.passed(),
            "cases": self.cases.len(),
            "notes": self.notes,
            "deviations": self.deviations,
        }));
        lines.iter().map(|l| format!("{l}\n")).collect()
    }
}

/// Reads a word in which any symbol may carry a repeat count: `a^16b` is sixteen
/// `a`s and a `b`. Words without `^` are taken literally.
pub fn parse_input(s: &str) -> Result<Vec<char>> {
    let mut out = Vec::new();
    let mut chars = s.chars().peekable();
    while let Some(c) = chars.next() {
        if c == '^' {
            bail!("`^` in `{s}` must follow a symbol");
        }
        if chars.peek() != Some(&'^') {
            out.push(c);
            continue;
        }
        chars.next();
        let mut digits = String::new();
        while let Some(d) = chars.next_if(char::is_ascii_digit) {
            digits.push(d);
        }
        let n: usize = digits
            .parse()
            .with_context(|| format!("`{c}^` needs a repeat count in `{s}`"))?;
        out.extend(std::iter::repeat_n(c, n));
    }
    Ok(out)
}

/// The shipped machines by name, or a machine file.
pub fn load_machine_arg(arg: &str) -> Result<MachineSpec> {
    match arg {
        "ms" => Ok(build_ms()),
        "md" => Ok(build_md()),
        path => {
            let text = std::fs::read_to_string(path).with_context(|| format!("cannot read machine file `{path}`"))?;
            rtlab_core::zoo::load_machine(&text).with_context(|| format!("in `{path}`"))
        }
    }
}

pub fn unary_label(n: u64) -> String {
    format!("a^{n}")
}

fn isqrt_ceil(n: u64) -> u64 {
    (0..).find(|k| k * k >= n).unwrap()
}

/// The square machine's language and space laws for `n <= max_n` and tails of length at most 2.
pub fn verify_squares(max_n: u64) -> VerificationReport {
    let ms = build_ms();
    let tails = ["", "a", "b", "aa", "ab", "ba", "bb"];
    let mut rep = VerificationReport::new("squares").param("max-n", max_n);
    rep.cases = (0..=max_n)
        .into_par_iter()
        .map(|n| {
            let mut wrong = Vec::new();
            let mut space = 0;
            for x in tails {
                let w: String = "a".repeat(n as usize) + "b" + x;
                let rec = run_deterministic(&ms, &w.chars().collect::<Vec<_>>()).expect("ms runs");
                if rec.accepted() != square_language_member(&w) {
                    wrong.push(format!("b{x}"));
                }
                if x.is_empty() {
                    space = rec.space[0];
                }
            }
            let bound = 2 * isqrt_ceil(n) as usize + 1;
            let member = n >= 1 && is_perfect_square(n);
            Case::new(
                n,
                unary_label(n),
                wrong.is_empty() && space <= bound,
                format!("square={member} space={space} bound={bound} wrong-tails={wrong:?}"),
            )
        })
        .collect();
    rep.sort();
    rep
}

/// The counter's soundness, completeness, space and timing laws for `1..=max_n`.
pub fn verify_counter(counter: &Counter, max_n: u64, strategy: Strategy, bounds: Bounds) -> VerificationReport {
    let summaries: Vec<CounterSummary> = match strategy {
        Strategy::Exhaustive => explore_counter_range(counter, max_n, bounds),
        _ => (1..=max_n)
            .into_par_iter()
            .map(|n| run_counter(counter, n, strategy, bounds).expect("n >= 1").summary)
            .collect(),
    };
    let mut rep = VerificationReport::new("counter")
        .param("max-n", max_n)
        .param("strategy", strategy)
        .param("phase2-rate", counter.config().phase2_rate)
        .param("max-branches", bounds.max_branches);
    // Random sampling cannot be expected to find the witness; it only checks soundness.
    let complete_required = !matches!(strategy, Strategy::Random { .. });
    let half = |n: u64| n.div_ceil(2);
    let timely = |s: &CounterSummary| s.completion_tick.is_some_and(|t| t <= half(s.n));
    let n0 = rtlab_core::recognizer::threshold(&summaries, |s| s.n, timely);
    for s in &summaries {
        let bound = space_envelope(s.n);
        let ok = s.all_special_correct && (!complete_required || s.witness_exists) && s.max_space <= bound;
        let tick = s.completion_tick.map_or("-".to_string(), |t| t.to_string());
        let mut case = Case::new(
            s.n,
            unary_label(s.n),
            ok && (!complete_required || n0.is_some_and(|n0| s.n < n0 || timely(s))),
            format!(
                "s={tick} half={} branches={} special={} space={} bound={bound}",
                half(s.n),
                s.branches,
                s.special_branches,
                s.max_space
            ),
        );
        if let Some(t) = s.truncated {
            case.status = Status::Inconclusive;
            case.detail += &format!(" truncated={t:?}");
        }
        rep.cases.push(case);
    }
    rep.notes.push(format!(
        "timing n0={} (s(n) <= ceil(n/2) for every tested n >= n0)",
        n0.map_or("none".to_string(), |v| v.to_string())
    ));
    rep.deviations = vec![
        "the counter machine's final control state is guessed in finite control at the trigger".to_string(),
        format!(
            "second-phase work runs at {} micro-operations per input symbol",
            counter.config().phase2_rate
        ),
        "LENGTH = 2 * (v' + sum of proper prefixes of v') - t0".to_string(),
    ];
    rep.sort();
    rep
}

/// Language agreement of the unary primes recognizer with trial division.
pub fn verify_primes(max_n: u64, strategy: Strategy, bounds: Bounds) -> VerificationReport {
    let r = primes_unary();
    let recs: Vec<Recognition> = match strategy {
        Strategy::Exhaustive => r.recognize_range(max_n, bounds),
        _ => (1..=max_n)
            .into_par_iter()
            .map(|n| r.accepts_unary(n, strategy, bounds).expect("n >= 1"))
            .collect(),
    };
    let mut rep = VerificationReport::new("primes")
        .param("max-n", max_n)
        .param("strategy", strategy)
        .param("max-branches", bounds.max_branches);
    for rec in &recs {
        let prime = trial_division_is_prime(rec.n);
        // A random walk may miss the witness; then only a false accept is a failure.
        let ok = match strategy {
            Strategy::Random { .. } => !rec.accepted || prime,
            _ => rec.accepted == prime,
        };
        let row = budget_row(rec);
        let mut case = Case::new(
            rec.n,
            unary_label(rec.n),
            ok,
            format!(
                "accepted={} prime={prime} s={} d={}",
                rec.accepted,
                row.s.map_or("-".into(), |v| v.to_string()),
                row.d.map_or("-".into(), |v| v.to_string())
            ),
        );
        if rec.truncated().is_some() {
            case.status = Status::Inconclusive;
        }
        rep.cases.push(case);
    }
    let budget = budget_report(recs.iter().map(budget_row).collect());
    rep.notes.push(format!(
        "budget n0={} (counter ticks + decider steps <= n from here on)",
        budget.n0.map_or("none".to_string(), |v| v.to_string())
    ));
    rep.deviations = vec![
        "one decider step verifies one certificate node".to_string(),
        "decider budget is min(floor(LENGTH/2), n - s(n))".to_string(),
    ];
    rep.sort();
    rep
}

/// Pairwise distinguishable prefixes `a^0 .. a^max_prefix` of the square language.
pub fn verify_nerode(max_prefix: u64, min_classes: usize) -> VerificationReport {
    let prefixes: Vec<String> = (0..=max_prefix).map(|i| "a".repeat(i as usize)).collect();
    let tests: Vec<String> = (0..=max_prefix)
        .map(|j| format!("{}b", "a".repeat(j as usize)))
        .collect();
    let nr = nerode_lower_bound(square_language_member, &prefixes, &tests);
    let ms = build_ms();
    let verified = nr.verify(|w| {
        run_deterministic(&ms, &w.chars().collect::<Vec<_>>())
            .expect("ms runs")
            .accepted()
    });
    let mut rep = VerificationReport::new("nerode")
        .param("max-prefix", max_prefix)
        .param("min-classes", min_classes);
    rep.cases.push(Case::new(
        0,
        "classes",
        verified && nr.count >= min_classes,
        format!("count={} witnesses={} verified={verified}", nr.count, nr.witness.len()),
    ));
    rep.notes.push(format!(
        "no automaton with fewer than {} states accepts the language",
        nr.count
    ));
    rep
}

/// Step formula and binary law of the input-free counter for `t <= max_t`.
pub fn verify_md(max_t: u64) -> VerificationReport {
    let md = build_md();
    let mut rep = VerificationReport::new("md").param("max-t", max_t);
    let end = run_clocked(&md, max_t).expect("md is deterministic");
    let (value, snap) = md_reference(max_t);
    let tape = &end.work[0];
    let same = (tape.min_touched().min(-(snap.cells.len() as i64))..=0).all(|i| tape.get(i) == snap.cell(i));
    rep.cases.push(Case::new(
        0,
        "final-config",
        same && tape.head() == snap.head,
        format!("value={value} digits={}", snap.digits()),
    ));
    let q0 = md.state_id("q0").expect("md has q0");
    let mut c = Configuration::initial(&md, &[]);
    let mut v = 0;
    while c.steps < max_t {
        step_in_place(&md, &mut c).expect("md is deterministic");
        let t = &c.work[0];
        if c.state == q0 && t.head() == 0 {
            v += 1;
            let digits: String = (t.min_touched()..0).map(|i| t.get(i)).filter(|&s| s != '#').collect();
            let formula = steps_to_config(v).ok();
            rep.cases.push(Case::new(
                v,
                format!("v={v}"),
                digits == format!("{v:b}") && formula == Some(c.steps),
                format!("steps={} digits={digits}", c.steps),
            ));
        }
    }
    rep.sort();
    rep
}
