//! The acceptance suite. Each test prints one `criterion N: PASS|FAIL` line to
//! stderr (written directly, so it shows even when output is captured) and then
//! asserts. Scales and tolerances are pinned below.

mod common;

use std::collections::BTreeSet;
use std::io::Write;

use common::{brute_cert_valid, brute_factors, brute_prime, clock, mutate_cert, random_machine, rng, word, words};
use rand::Rng;
use rayon::prelude::*;
use rtlab_core::counter::{
    explore_counter_range, run_counter, steps_to_config, Counter, CounterConfig, CounterSummary,
};
use rtlab_core::guess::Strategy;
use rtlab_core::oracles::{
    is_perfect_square, md_reference, nerode_lower_bound, pratt_generate, pratt_verify, square_language_member,
    PrattCertificate,
};
use rtlab_core::recognizer::{primes_unary, threshold, PrattDecider};
use rtlab_core::tm::{run_deterministic, Bounds, MachineSpec};
use rtlab_core::zoo::{build_md, build_ms, pad, pad_len, unpad, BinaryWord};

const SQUARE_MAX_N: usize = 400;
const SPACE_MAX_N: usize = 10_000;
const NERODE_MAX: usize = 500;
const NERODE_MIN_CLASSES: usize = 20;
const CLOSURE_MAX_LEN: usize = 100;
const CLOSURE_EXHAUSTIVE_LEN: usize = 14;
const CLOSURE_EXT: usize = 3;
const STEPS_MAX_V: u64 = 1 << 10;
const CLOCK_MAX_T: u64 = 100_000;
const EXHAUSTIVE_MAX_N: u64 = 48;
const GUIDED_MAX_N: u64 = 2048;
/// Fitted once from the exhaustive and guided runs (measured worst ratio 2.5) and frozen.
const SPACE_CONSTANT: usize = 3;
/// The half-input timing must hold from this length on, at the latest.
const TIMING_N0_MAX: u64 = 64;
const PAD_MAX_BITS: u32 = 16;
const PRIMES_EXHAUSTIVE_MAX_N: u64 = 128;
const FUZZ_INVALID: u64 = 100_000;
const PRATT_MAX: u64 = 10_000;

fn report(id: u32, ok: bool, detail: &str) {
    let line = format!("criterion {id}: {} {detail}\n", if ok { "PASS" } else { "FAIL" });
    std::io::stderr().write_all(line.as_bytes()).unwrap();
    assert!(ok, "criterion {id} failed: {detail}");
}

fn accepts(spec: &MachineSpec, w: &[char]) -> bool {
    run_deterministic(spec, w).unwrap().accepted()
}

fn ceil_sqrt(n: usize) -> usize {
    (0..).find(|k| k * k >= n).unwrap()
}

fn ceil_log2(n: u64) -> usize {
    (0..).find(|&k| 1u64 << k >= n).unwrap()
}

fn suffixes(max: usize) -> Vec<String> {
    (0..=max).flat_map(|k| words(&['a', 'b'], k)).collect()
}

#[test]
fn criterion_01_square_language() {
    let ms = build_ms();
    let tails = suffixes(2);
    let bad: Vec<String> = (0..=SQUARE_MAX_N)
        .into_par_iter()
        .flat_map_iter(|n| {
            let ms = &ms;
            tails.iter().filter_map(move |x| {
                let want = n >= 1 && is_perfect_square(n as u64) && (n as f64).sqrt().round().powi(2) == n as f64;
                (accepts(ms, &word(n, &format!("b{x}"))) != want).then(|| format!("a^{n}b{x}"))
            })
        })
        .collect();
    report(
        1,
        bad.is_empty(),
        &format!(
            "n <= {SQUARE_MAX_N}, |x| <= 2, {} inputs, mismatches {:?}",
            (SQUARE_MAX_N + 1) * tails.len(),
            bad
        ),
    );
}

#[test]
fn criterion_02_square_machine_space() {
    let ms = build_ms();
    let worst = (0..=SPACE_MAX_N)
        .into_par_iter()
        .map(|n| {
            let used = run_deterministic(&ms, &word(n, "b")).unwrap().space[0];
            (used as i64 - (2 * ceil_sqrt(n) + 1) as i64, n, used)
        })
        .max()
        .unwrap();
    report(
        2,
        worst.0 <= 0,
        &format!(
            "n <= {SPACE_MAX_N}, tightest n = {} uses {} cells, margin {}",
            worst.1, worst.2, -worst.0
        ),
    );
}

#[test]
fn criterion_03_distinguishable_prefixes() {
    let ms = build_ms();
    let prefixes: Vec<String> = (0..=NERODE_MAX).map(|i| "a".repeat(i)).collect();
    let tests: Vec<String> = (0..=NERODE_MAX).map(|j| format!("{}b", "a".repeat(j))).collect();
    let rep = nerode_lower_bound(square_language_member, &prefixes, &tests);
    // Witnesses are re-checked by running the machine, not the oracle that found them.
    let by_machine = rep.verify(|w| accepts(&ms, &w.chars().collect::<Vec<_>>()));
    report(
        3,
        rep.count >= NERODE_MIN_CLASSES && by_machine,
        &format!(
            "{} pairwise distinguished prefixes (need {NERODE_MIN_CLASSES}), {} witnesses verified on the machine: {by_machine}",
            rep.count,
            rep.witness.len()
        ),
    );
}

#[test]
fn criterion_04_extension_closure() {
    let ms = build_ms();
    let exts = suffixes(CLOSURE_EXT);
    let closed = |m: &MachineSpec, w: &str| {
        let base: Vec<char> = w.chars().collect();
        !accepts(m, &base)
            || exts
                .iter()
                .all(|x| accepts(m, &format!("{w}{x}").chars().collect::<Vec<_>>()))
    };
    // Every word up to a moderate length, then every accepted shape up to the full length.
    let short: Vec<String> = suffixes(CLOSURE_EXHAUSTIVE_LEN);
    let short_ok = short.par_iter().all(|w| closed(&ms, w));
    let mut r = rng(41);
    let mut long = Vec::new();
    for k in 1.. {
        let n = k * k;
        if n + 1 > CLOSURE_MAX_LEN {
            break;
        }
        for _ in 0..40 {
            let len = r.gen_range(0..=CLOSURE_MAX_LEN - n - 1);
            let tail: String = (0..len).map(|_| if r.gen_bool(0.5) { 'a' } else { 'b' }).collect();
            long.push(format!("{}b{tail}", "a".repeat(n)));
        }
    }
    let long_accepted = long.iter().all(|w| accepts(&ms, &w.chars().collect::<Vec<_>>()));
    let long_ok = long.par_iter().all(|w| closed(&ms, w));
    // Over one letter the square machine accepts nothing, which is upward closed.
    let unary_empty = (0..=4 * CLOSURE_MAX_LEN).all(|n| !accepts(&ms, &word(n, "")));
    // Random deterministic machines in the same mode obey both laws.
    let random_ok = (0..400u64).into_par_iter().all(|seed| {
        let mut r = rng(seed);
        let m = random_machine(&mut r, &['a', 'b'], 4, 1);
        let u = random_machine(&mut r, &['a'], 4, 1);
        let acc: Vec<bool> = (0..=CLOSURE_MAX_LEN).map(|n| accepts(&u, &word(n, ""))).collect();
        let upward = acc.iter().position(|&a| a).is_none_or(|f| acc[f..].iter().all(|&a| a));
        upward && suffixes(8).iter().all(|w| closed(&m, w))
    });
    let ok = short_ok && long_accepted && long_ok && unary_empty && random_ok;
    report(
        4,
        ok,
        &format!(
            "all {} words of length <= {CLOSURE_EXHAUSTIVE_LEN}: {short_ok}; {} accepted words up to length {CLOSURE_MAX_LEN}: {}; \
             extensions <= {CLOSURE_EXT}; unary empty: {unary_empty}; 400 random machines: {random_ok}",
            short.len(),
            long.len(),
            long_accepted && long_ok
        ),
    );
}

#[test]
fn criterion_05_counter_step_formula() {
    let md = build_md();
    let q0 = md.state_id("q0").unwrap();
    let mut arrivals = vec![0u64];
    let mut law_ok = true;
    let mut checked = 0u64;
    let mut snapshots_ok = true;
    clock(&md, CLOCK_MAX_T, |c| {
        let tape = &c.work[0];
        if c.state == q0 && tape.head() == 0 {
            arrivals.push(c.steps);
            let digits: String = (tape.min_touched()..0)
                .map(|i| tape.get(i))
                .filter(|&s| s != '#')
                .collect();
            law_ok &= digits == format!("{:b}", arrivals.len() - 1);
            checked += 1;
        }
        if c.steps % 997 == 0 || c.steps == CLOCK_MAX_T {
            let (value, snap) = md_reference(c.steps);
            let same_cells =
                (tape.min_touched().min(-(snap.cells.len() as i64))..=0).all(|i| tape.get(i) == snap.cell(i));
            snapshots_ok &= same_cells && snap.head == tape.head() && value == arrivals.len() as u64 - 1;
        }
    });
    let formula_ok = (1..=STEPS_MAX_V).all(|v| steps_to_config(v).ok() == arrivals.get(v as usize).copied());
    report(
        5,
        formula_ok && law_ok && snapshots_ok && checked > STEPS_MAX_V,
        &format!(
            "formula vs engine for v <= {STEPS_MAX_V}: {formula_ok}; binary law at {checked} normal forms for t <= {CLOCK_MAX_T}: {law_ok}; reference snapshots agree: {snapshots_ok}"
        ),
    );
}

fn guided_summaries(counter: &Counter) -> Vec<CounterSummary> {
    (1..=GUIDED_MAX_N)
        .into_par_iter()
        .map(|n| {
            run_counter(counter, n, Strategy::Guided, Bounds::default())
                .unwrap()
                .summary
        })
        .collect()
}

#[test]
fn criterion_06_counter_sound_and_complete() {
    let c = Counter::default();
    let ex = explore_counter_range(&c, EXHAUSTIVE_MAX_N, Bounds::default());
    let ex_fail: Vec<u64> = ex.iter().filter(|s| !s.passed()).map(|s| s.n).collect();
    let branches: u64 = ex.iter().map(|s| s.branches).sum();
    let guided = guided_summaries(&c);
    let g_fail: Vec<u64> = guided.iter().filter(|s| !s.passed()).map(|s| s.n).collect();
    report(
        6,
        ex_fail.is_empty() && g_fail.is_empty() && ex.len() == EXHAUSTIVE_MAX_N as usize,
        &format!(
            "exhaustive n <= {EXHAUSTIVE_MAX_N} ({branches} branches in total), failures {ex_fail:?}; guided n <= {GUIDED_MAX_N}, failures {g_fail:?}"
        ),
    );
}

#[test]
fn criterion_07_counter_space() {
    let c = Counter::default();
    let mut all = explore_counter_range(&c, EXHAUSTIVE_MAX_N, Bounds::default());
    all.extend(guided_summaries(&c));
    let over: Vec<(u64, usize)> = all
        .iter()
        .filter(|s| s.max_space > SPACE_CONSTANT * ceil_log2(s.n + 2))
        .map(|s| (s.n, s.max_space))
        .collect();
    let ratio = all
        .iter()
        .map(|s| s.max_space as f64 / ceil_log2(s.n + 2) as f64)
        .fold(0.0, f64::max);
    report(
        7,
        over.is_empty() && all.iter().all(|s| s.truncated.is_none()),
        &format!(
            "c = {SPACE_CONSTANT}, worst ratio {ratio:.2} over {} runs, violations {over:?}",
            all.len()
        ),
    );
}

#[test]
fn criterion_08_counter_timing() {
    let half = |n: u64| n.div_ceil(2);
    let ok_row = |s: &CounterSummary| s.completion_tick.is_some_and(|t| t <= half(s.n));
    let mut table = String::from("rate\tn\ts(n)\tceil(n/2)\n");
    let mut n0s = Vec::new();
    let mut default_ok = false;
    for rate in [1, 2, 4, 8] {
        let c = Counter::new(CounterConfig { phase2_rate: rate });
        let rows = guided_summaries(&c);
        for s in &rows {
            let tick = s.completion_tick.map_or("-".to_string(), |t| t.to_string());
            table += &format!("{rate}\t{}\t{tick}\t{}\n", s.n, half(s.n));
        }
        let n0 = threshold(&rows, |s| s.n, ok_row);
        if rate == CounterConfig::default().phase2_rate {
            let ex = explore_counter_range(&c, EXHAUSTIVE_MAX_N, Bounds::default());
            let ex_ok = n0.is_some_and(|n0| ex.iter().filter(|s| s.n >= n0).all(ok_row));
            default_ok =
                ex_ok && n0.is_some_and(|n0| n0 <= TIMING_N0_MAX && rows.iter().filter(|s| s.n >= n0).all(ok_row));
        }
        n0s.push(format!(
            "rate {rate}: n0 = {}",
            n0.map_or("none".to_string(), |v| v.to_string())
        ));
    }
    let path = std::path::Path::new(env!("CARGO_TARGET_TMPDIR")).join("timing.tsv");
    std::fs::write(&path, table).unwrap();
    report(
        8,
        default_ok,
        &format!(
            "s(n) <= ceil(n/2) for n <= {GUIDED_MAX_N}; {}; table in {}",
            n0s.join(", "),
            path.display()
        ),
    );
}

#[test]
fn criterion_09_pad_laws() {
    let words: Vec<BinaryWord> = (1u64..1 << PAD_MAX_BITS)
        .map(|v| BinaryWord::from_value(v).unwrap())
        .collect();
    let lengths_ok = words.par_iter().all(|w| {
        let s = pad(w);
        s.len() as u64 == w.value() && pad_len(w) == w.value() && s.bytes().all(|b| b == b'a')
    });
    let distinct: BTreeSet<u64> = words.iter().map(pad_len).collect();
    let injective = distinct.len() == words.len();
    let inverse = (1..=1u64 << PAD_MAX_BITS).all(|n| {
        let w = unpad(n).unwrap();
        pad_len(&w) == n && unpad(pad_len(&w)).unwrap() == w
    }) && unpad(0).is_err();
    report(
        9,
        lengths_ok && injective && inverse,
        &format!(
            "{} words of length <= {PAD_MAX_BITS}: |pad(w)| = value(w) {lengths_ok}, injective {injective}; pad(unpad(n)) = n for n <= 2^{PAD_MAX_BITS}: {inverse}",
            words.len()
        ),
    );
}

#[test]
fn criterion_10_primes_in_unary() {
    let r = primes_unary();
    let ex = r.recognize_range(PRIMES_EXHAUSTIVE_MAX_N, Bounds::default());
    let ex_bad: Vec<u64> = ex
        .iter()
        .filter(|rec| rec.accepted != brute_prime(rec.n) || rec.truncated().is_some())
        .map(|rec| rec.n)
        .collect();
    let g_bad: Vec<u64> = (1..=GUIDED_MAX_N)
        .into_par_iter()
        .filter(|&n| {
            r.accepts_unary(n, Strategy::Guided, Bounds::default())
                .unwrap()
                .accepted
                != brute_prime(n)
        })
        .collect();
    let fuzz: Vec<(u64, u64)> = (0..64u64)
        .into_par_iter()
        .map(|chunk| {
            let mut r = rng(1000 + chunk);
            let (mut invalid, mut accepted) = (0, 0);
            while invalid < FUZZ_INVALID / 64 + u64::from(chunk < FUZZ_INVALID % 64) {
                let p = loop {
                    let p = r.gen_range(2..PRATT_MAX);
                    if brute_prime(p) {
                        break p;
                    }
                };
                let cert = mutate_cert(&pratt_generate(p).unwrap(), &mut r);
                if brute_cert_valid(&cert) {
                    continue;
                }
                invalid += 1;
                for claim in [p, cert.p.max(1)] {
                    let w = BinaryWord::from_value(claim).unwrap();
                    accepted += u64::from(PrattDecider.decide_certificate(&w, u64::MAX, &cert).accepted());
                }
            }
            (invalid, accepted)
        })
        .collect();
    let invalid: u64 = fuzz.iter().map(|f| f.0).sum();
    let fuzz_accepts: u64 = fuzz.iter().map(|f| f.1).sum();
    report(
        10,
        ex_bad.is_empty() && g_bad.is_empty() && invalid == FUZZ_INVALID && fuzz_accepts == 0,
        &format!(
            "exhaustive n <= {PRIMES_EXHAUSTIVE_MAX_N} mismatches {ex_bad:?}; guided n <= {GUIDED_MAX_N} mismatches {g_bad:?}; {invalid} invalid certificates, {fuzz_accepts} accepted"
        ),
    );
}

/// Certificates a cheater might present for composite `n`.
fn forgeries(n: u64) -> Vec<PrattCertificate> {
    let factors = brute_factors(n - 1);
    let children: Vec<PrattCertificate> = factors
        .iter()
        .filter(|f| f.0 > 2)
        .map(|f| {
            pratt_generate(f.0).unwrap_or(PrattCertificate {
                p: f.0,
                generator: 1,
                factors: vec![],
                children: vec![],
            })
        })
        .collect();
    let mut out: Vec<PrattCertificate> = (1..n.min(40))
        .map(|g| PrattCertificate {
            p: n,
            generator: g,
            factors: factors.clone(),
            children: children.clone(),
        })
        .collect();
    for g in [n - 1, 2, 3] {
        out.push(PrattCertificate {
            p: n,
            generator: g % n,
            factors: vec![(n - 1, 1)],
            children: vec![],
        });
    }
    // A genuine certificate for a nearby prime, relabelled.
    if let Some(p) = (n + 1..).find(|&p| brute_prime(p)) {
        let mut c = pratt_generate(p).unwrap();
        c.p = n;
        out.push(c);
    }
    out
}

#[test]
fn criterion_11_pratt_round_trip() {
    let primes: Vec<u64> = (2..=PRATT_MAX).filter(|&p| brute_prime(p)).collect();
    let round_trip = primes
        .par_iter()
        .all(|&p| pratt_generate(p).is_ok_and(|c| pratt_verify(p, &c) && brute_cert_valid(&c)));
    let composites: Vec<u64> = (4..=PRATT_MAX).filter(|&n| !brute_prime(n)).collect();
    let forged: Vec<(u64, usize)> = composites
        .par_iter()
        .map(|&n| (n, forgeries(n).iter().filter(|c| pratt_verify(n, c)).count()))
        .filter(|x| x.1 > 0)
        .collect();
    let tried: usize = composites.iter().map(|&n| forgeries(n).len()).sum();
    let no_cert = composites.iter().all(|&n| pratt_generate(n).is_err());
    report(
        11,
        round_trip && forged.is_empty() && no_cert,
        &format!(
            "{} primes <= {PRATT_MAX} round trip: {round_trip}; {tried} forged certificates for {} composites, accepted {forged:?}",
            primes.len(),
            composites.len()
        ),
    );
}
