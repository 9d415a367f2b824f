use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rtlab_cli::{
    load_machine_arg, parse_input, unary_label, verify_counter, verify_md, verify_nerode, verify_primes,
    verify_squares, Status, VerificationReport,
};
use rtlab_core::counter::{
    run_counter, trace_counter, Counter, CounterConfig, GuidedCounterSource, DEFAULT_PHASE2_RATE, TAPE_NAMES,
};
use rtlab_core::guess::{RandomSource, Strategy};
use rtlab_core::oracles::{is_perfect_square, isqrt, nerode_lower_bound, pratt_generate, square_language_member};
use rtlab_core::recognizer::{budget_row, decider_from_name, make_shared_recognizer, BudgetPolicy};
use rtlab_core::tm::trace::{TraceRecord, TraceWriter};
use rtlab_core::tm::{explore, run_clocked, run_deterministic_observed, AcceptanceMode, Bounds};
use rtlab_core::zoo::{pad_len, unpad, BinaryWord};

#[derive(Parser)]
#[command(name = "rtlab", version, about = "Real-time Turing machine laboratory")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a machine (`ms`, `md` or a machine file) on one input.
    Run(RunArgs),
    /// Run a verification suite and report pass/fail.
    Verify(VerifyArgs),
    /// Unary padding of a binary word, or its inverse.
    Pad(PadArgs),
    /// The nondeterministic length counter.
    #[command(subcommand)]
    Counter(CounterCmd),
    /// Brute-force reference checks.
    #[command(subcommand)]
    Oracle(OracleCmd),
    /// Primes in unary for every length up to a bound.
    Primes(PrimesArgs),
    /// Run a padded recognizer on one unary input.
    Recognize(RecognizeArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Halt,
    FinalEmpty,
}

#[derive(Args)]
struct Search {
    /// exhaustive, guided or random
    #[arg(long, default_value = "exhaustive")]
    strategy: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = Bounds::default().max_branches)]
    max_branches: usize,
}

impl Search {
    fn strategy(&self) -> Result<Strategy> {
        Strategy::parse(&self.strategy, self.seed)
            .ok_or_else(|| anyhow!("unknown strategy `{}` (exhaustive, guided or random)", self.strategy))
    }

    fn bounds(&self) -> Bounds {
        Bounds {
            max_branches: self.max_branches,
            ..Bounds::default()
        }
    }
}

#[derive(Args)]
struct RunArgs {
    #[arg(long = "machine", value_name = "MACHINE", required_unless_present = "machine_pos")]
    machine_flag: Option<String>,
    #[arg(value_name = "MACHINE")]
    machine_pos: Option<String>,
    /// Literal word or `a^N`.
    #[arg(long = "input", value_name = "INPUT", allow_hyphen_values = true)]
    input_flag: Option<String>,
    #[arg(value_name = "INPUT")]
    input_pos: Option<String>,
    /// Override the machine's acceptance mode.
    #[arg(long)]
    mode: Option<ModeArg>,
    /// Write one JSON record per step.
    #[arg(long)]
    trace: Option<PathBuf>,
    #[arg(long, default_value_t = Bounds::default().max_branches)]
    max_branches: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    Squares,
    #[value(alias = "lemma1")]
    Counter,
    Primes,
    Nerode,
    Md,
}

#[derive(Args)]
struct VerifyArgs {
    suite: Suite,
    /// Largest input length (largest prefix for nerode, step count for md).
    #[arg(long, visible_alias = "n")]
    max_n: Option<u64>,
    #[command(flatten)]
    search: Search,
    /// Second-phase micro-operations per input symbol (counter suite).
    #[arg(long, default_value_t = DEFAULT_PHASE2_RATE)]
    rate: u32,
    /// Write the report as JSON lines.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct PadArgs {
    /// A binary word starting with 1, or a length with --inverse.
    value: String,
    #[arg(long)]
    inverse: bool,
    /// Print the padded word in full rather than as `a^N`.
    #[arg(long)]
    expand: bool,
}

#[derive(Subcommand)]
enum CounterCmd {
    /// Run the counter on `a^N` and summarise its branches.
    Run {
        #[arg(long)]
        n: u64,
        #[command(flatten)]
        search: Search,
        #[arg(long, default_value_t = DEFAULT_PHASE2_RATE)]
        rate: u32,
        /// Per-tick trace of one walk (guided or random strategy).
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Same as `verify counter`.
    Verify(VerifyCounterArgs),
}

#[derive(Args)]
struct VerifyCounterArgs {
    #[arg(long, default_value_t = 48)]
    max_n: u64,
    #[command(flatten)]
    search: Search,
    #[arg(long, default_value_t = DEFAULT_PHASE2_RATE)]
    rate: u32,
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Subcommand)]
enum OracleCmd {
    /// Whether N is a perfect square, by sums of odd numbers.
    Squares { n: u64 },
    /// A primality certificate for P.
    Pratt { p: u64 },
    /// Distinguishable prefixes of the square language.
    Nerode {
        #[arg(long, default_value_t = 500)]
        max_prefix: u64,
    },
}

#[derive(Args)]
struct PrimesArgs {
    #[arg(long, default_value_t = 128)]
    max_n: u64,
    #[command(flatten)]
    search: Search,
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct RecognizeArgs {
    /// primes, always or singleton:WORD
    #[arg(long, default_value = "primes")]
    decider: String,
    #[arg(long, required_unless_present = "input")]
    n: Option<u64>,
    /// Unary input, literal or `a^N`.
    #[arg(long)]
    input: Option<String>,
    #[arg(long, default_value = "guided")]
    strategy: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = Bounds::default().max_branches)]
    max_branches: usize,
    /// Write the branch records as JSON lines.
    #[arg(long)]
    trace: Option<PathBuf>,
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(
        File::create(path).with_context(|| format!("cannot create `{}`", path.display()))?,
    ))
}

fn finish(rep: VerificationReport, report: Option<&Path>) -> Result<Status> {
    print!("{}", rep.render());
    if let Some(path) = report {
        let mut out = create(path)?;
        out.write_all(rep.to_json_lines().as_bytes())?;
        out.flush()?;
    }
    Ok(rep.status())
}

fn counter_with_rate(rate: u32) -> Result<Counter> {
    if rate == 0 {
        bail!("--rate must be at least 1");
    }
    Ok(Counter::new(CounterConfig { phase2_rate: rate }))
}

fn cmd_run(a: RunArgs) -> Result<Status> {
    let (machine, input) = match (a.machine_flag, a.machine_pos, a.input_flag, a.input_pos) {
        (Some(m), pos, None, inp) => (m, inp.or(pos)),
        (Some(m), None, Some(i), None) => (m, Some(i)),
        (None, Some(m), flag, pos) => (m, flag.or(pos)),
        _ => bail!("give the machine and the input once each"),
    };
    let mut spec = load_machine_arg(&machine)?;
    if let Some(mode) = a.mode {
        spec = spec.with_mode(match mode {
            ModeArg::Halt => AcceptanceMode::HaltState,
            ModeArg::FinalEmpty => AcceptanceMode::FinalStateEmptyStorage,
        });
    }
    let input = parse_input(input.as_deref().unwrap_or(""))?;
    println!("machine {}", spec.name());
    println!("input-length {}", input.len());
    if !spec.has_input_tape() {
        // Input-free machines are clocked for as many steps as the input is long.
        let c = run_clocked(&spec, input.len() as u64)?;
        if let Some(path) = &a.trace {
            let mut w = TraceWriter::new(create(path)?);
            w.write(&TraceRecord::of_config(&spec, &c, None))?;
            w.into_inner().flush()?;
        }
        println!("steps {}", c.steps);
        println!("state {}", spec.state_name(c.state));
        println!("tape {}", c.work[0].window(c.work[0].space_used() as i64));
        return Ok(Status::Pass);
    }
    if spec.is_deterministic() {
        let mut trace = a.trace.as_deref().map(create).transpose()?.map(TraceWriter::new);
        let mut io_err = None;
        let rec = run_deterministic_observed(&spec, &input, &mut |spec, c, e| {
            if let Some(w) = trace.as_mut() {
                if let Err(err) = w.write(&TraceRecord::of_config(spec, c, e)) {
                    io_err.get_or_insert(err);
                }
            }
        })?;
        if let Some(err) = io_err {
            return Err(err.into());
        }
        if let Some(w) = trace {
            w.into_inner().flush()?;
        }
        println!("verdict {}", rec.verdict.as_str());
        println!("steps {}", rec.steps);
        println!("space {:?}", rec.space);
        return Ok(Status::Pass);
    }
    let bounds = Bounds {
        max_branches: a.max_branches,
        ..Bounds::default()
    };
    let ex = explore(&spec, &input, bounds)?;
    if let Some(path) = &a.trace {
        let mut out = create(path)?;
        for r in &ex.records {
            serde_json::to_writer(&mut out, r)?;
            out.write_all(b"\n")?;
        }
        out.flush()?;
    }
    let accepting = ex.records.iter().filter(|r| r.accepted()).count();
    println!("branches {}", ex.records.len());
    println!("accepting-branches {accepting}");
    println!("verdict {}", if accepting > 0 { "accept" } else { "reject" });
    match ex.truncated {
        Some(t) if accepting == 0 => {
            println!("truncated {t:?}");
            Ok(Status::Inconclusive)
        }
        _ => Ok(Status::Pass),
    }
}

fn cmd_verify(a: VerifyArgs) -> Result<Status> {
    let strategy = a.search.strategy()?;
    let bounds = a.search.bounds();
    let rep = match a.suite {
        Suite::Squares => verify_squares(a.max_n.unwrap_or(400)),
        Suite::Counter => verify_counter(
            &counter_with_rate(a.rate)?,
            a.max_n.unwrap_or(48).max(1),
            strategy,
            bounds,
        ),
        Suite::Primes => verify_primes(a.max_n.unwrap_or(128).max(1), strategy, bounds),
        Suite::Nerode => verify_nerode(a.max_n.unwrap_or(500), 20),
        Suite::Md => verify_md(a.max_n.unwrap_or(100_000)),
    };
    finish(rep, a.report.as_deref())
}

fn cmd_pad(a: PadArgs) -> Result<Status> {
    if a.inverse {
        let n: u64 = a
            .value
            .parse()
            .with_context(|| format!("`{}` is not a length", a.value))?;
        println!("{}", unpad(n)?);
    } else {
        let w = BinaryWord::parse(&a.value)?;
        let n = pad_len(&w);
        if a.expand {
            println!("{}", rtlab_core::zoo::pad(&w));
        } else {
            println!("{}", unary_label(n));
        }
    }
    Ok(Status::Pass)
}

fn cmd_counter(c: CounterCmd) -> Result<Status> {
    match c {
        CounterCmd::Run { n, search, rate, trace } => {
            if n == 0 {
                bail!("--n must be at least 1");
            }
            let counter = counter_with_rate(rate)?;
            let strategy = search.strategy()?;
            if let Some(path) = &trace {
                let recs = match strategy {
                    Strategy::Guided => trace_counter(&counter, n, &mut GuidedCounterSource::new(n)),
                    Strategy::Random { seed, .. } => trace_counter(&counter, n, &mut RandomSource::new(seed)),
                    Strategy::Exhaustive => bail!("--trace follows one walk; use --strategy guided or random"),
                };
                let mut w = TraceWriter::new(create(path)?);
                for r in &recs {
                    w.write(r)?;
                }
                w.into_inner().flush()?;
            }
            let s = run_counter(&counter, n, strategy, search.bounds())?.summary;
            println!("n {n}");
            println!("strategy {}", s.strategy);
            println!("branches {}", s.branches);
            println!("special-branches {}", s.special_branches);
            println!("witness {}", s.witness_exists);
            println!("all-special-correct {}", s.all_special_correct);
            if let Some(len) = &s.witness_length {
                println!("length {len}");
            }
            println!(
                "completion-tick {}",
                s.completion_tick.map_or("-".to_string(), |t| t.to_string())
            );
            println!("max-space {} ({})", s.max_space, TAPE_NAMES.join(","));
            if let Some(t) = s.truncated {
                println!("truncated {t:?}");
                return Ok(Status::Inconclusive);
            }
            let complete = s.witness_exists || matches!(strategy, Strategy::Random { .. });
            Ok(if s.all_special_correct && complete {
                Status::Pass
            } else {
                Status::Fail
            })
        }
        CounterCmd::Verify(a) => {
            let rep = verify_counter(
                &counter_with_rate(a.rate)?,
                a.max_n.max(1),
                a.search.strategy()?,
                a.search.bounds(),
            );
            finish(rep, a.report.as_deref())
        }
    }
}

fn cmd_oracle(o: OracleCmd) -> Result<Status> {
    match o {
        OracleCmd::Squares { n } => {
            let sq = is_perfect_square(n);
            println!(
                "{n} {} a perfect square (floor sqrt {})",
                if sq { "is" } else { "is not" },
                isqrt(n)
            );
            Ok(Status::Pass)
        }
        OracleCmd::Pratt { p } => match pratt_generate(p) {
            Ok(c) => {
                println!("{}", c.render());
                Ok(Status::Pass)
            }
            Err(e) => {
                println!("{e}");
                Ok(Status::Fail)
            }
        },
        OracleCmd::Nerode { max_prefix } => {
            let prefixes: Vec<String> = (0..=max_prefix).map(|i| "a".repeat(i as usize)).collect();
            let tests: Vec<String> = (0..=max_prefix)
                .map(|j| format!("{}b", "a".repeat(j as usize)))
                .collect();
            let r = nerode_lower_bound(square_language_member, &prefixes, &tests);
            println!("distinguished-prefixes {}", r.count);
            println!("witnesses {}", r.witness.len());
            let ok = r.verify(square_language_member);
            println!("verified {ok}");
            Ok(if ok { Status::Pass } else { Status::Fail })
        }
    }
}

fn cmd_primes(a: PrimesArgs) -> Result<Status> {
    let rep = verify_primes(a.max_n.max(1), a.search.strategy()?, a.search.bounds());
    let accepted: Vec<String> = rep
        .cases
        .iter()
        .filter(|c| c.detail.starts_with("accepted=true"))
        .map(|c| c.key.to_string())
        .collect();
    println!("accepted {}", accepted.join(" "));
    finish(rep, a.report.as_deref())
}

fn cmd_recognize(a: RecognizeArgs) -> Result<Status> {
    let n = match (&a.input, a.n) {
        (Some(s), None) => {
            let w = parse_input(s)?;
            if w.iter().any(|&c| c != 'a') {
                bail!("recognizers read unary input over `a`");
            }
            w.len() as u64
        }
        (None, Some(n)) => n,
        _ => bail!("give either --n or --input"),
    };
    let r = make_shared_recognizer(decider_from_name(&a.decider)?, BudgetPolicy::default());
    let strategy = Strategy::parse(&a.strategy, a.seed).ok_or_else(|| anyhow!("unknown strategy `{}`", a.strategy))?;
    let bounds = Bounds {
        max_branches: a.max_branches,
        ..Bounds::default()
    };
    let rec = r.accepts_unary(n, strategy, bounds)?;
    if let Some(path) = &a.trace {
        let mut out = create(path)?;
        for r in &rec.records {
            serde_json::to_writer(&mut out, r)?;
            out.write_all(b"\n")?;
        }
        out.flush()?;
    }
    let row = budget_row(&rec);
    println!("decider {}", r.decider().name());
    println!("n {n}");
    println!("verdict {}", if rec.accepted { "accept" } else { "reject" });
    println!("s {}", row.s.map_or("-".to_string(), |v| v.to_string()));
    println!("d {}", row.d.map_or("-".to_string(), |v| v.to_string()));
    if let Some(b) = rec.witness() {
        println!("budget {}", b.budget);
        if let Some(detail) = &b.decision.detail {
            println!("certificate {detail}");
        }
    }
    if rec.truncated().is_some() && !rec.accepted {
        return Ok(Status::Inconclusive);
    }
    Ok(Status::Pass)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.cmd {
        Cmd::Run(a) => cmd_run(a),
        Cmd::Verify(a) => cmd_verify(a),
        Cmd::Pad(a) => cmd_pad(a),
        Cmd::Counter(c) => cmd_counter(c),
        Cmd::Oracle(o) => cmd_oracle(o),
        Cmd::Primes(a) => cmd_primes(a),
        Cmd::Recognize(a) => cmd_recognize(a),
    };
    match result {
        Ok(status) => status.exit_code(),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
