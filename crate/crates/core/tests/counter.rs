mod common;

use common::clock;
use proptest::prelude::*;
use rtlab_core::counter::{
    run_counter, steps_to_config, walk, Counter, CounterConfig, CounterState, GuidedCounterSource,
};
use rtlab_core::guess::{RandomSource, Strategy};
use rtlab_core::tm::Bounds;
use rtlab_core::zoo::build_md;

/// Visits every state of every branch up to `depth` ticks.
fn visit_all(c: &Counter, depth: u64, mut f: impl FnMut(&CounterState)) {
    let mut stack = vec![c.start()];
    while let Some(s) = stack.pop() {
        f(&s);
        if s.alive() && s.ticks < depth {
            stack.extend(c.successors(&s));
        }
    }
}

#[test]
fn diff_exact_on_every_branch_up_to_twenty() {
    let c = Counter::default();
    let mut states = 0u64;
    visit_all(&c, 20, |s| {
        assert_eq!(s.diff, s.recount_diff(), "tick {}", s.ticks);
        if s.ticks > 0 && c.is_special(s) {
            assert_eq!(s.length.value(), Some(s.ticks));
        }
        states += 1;
    });
    assert!(states > 1000);
}

#[test]
fn every_rate_is_sound_on_small_inputs() {
    for rate in [1, 2, 4, 8] {
        let c = Counter::new(CounterConfig { phase2_rate: rate });
        visit_all(&c, 24, |s| {
            if s.ticks > 0 && c.is_special(s) {
                assert_eq!(s.length.value(), Some(s.ticks), "rate {rate}");
            }
        });
    }
}

#[test]
fn step_formula_recurrence() {
    // steps(v) - steps(v-1) = 2 * (1 + carries), where the carry chain is the trailing ones of v-1.
    for v in 1..=4096u64 {
        let carries = u64::from((v - 1).trailing_ones());
        let prev = if v == 1 { 0 } else { steps_to_config(v - 1).unwrap() };
        assert_eq!(steps_to_config(v).unwrap() - prev, 2 * (1 + carries), "v = {v}");
    }
}

#[test]
fn step_formula_matches_engine_clock() {
    let md = build_md();
    let q0 = md.state_id("q0").unwrap();
    let mut arrivals = vec![0u64];
    clock(&md, steps_to_config(300).unwrap(), |c| {
        if c.state == q0 && c.work[0].head() == 0 {
            arrivals.push(c.steps);
        }
    });
    for (v, &t) in arrivals.iter().enumerate().skip(1) {
        assert_eq!(steps_to_config(v as u64).unwrap(), t);
    }
    assert_eq!(arrivals.len(), 301);
}

#[test]
fn guided_branch_length_equals_input() {
    let c = Counter::default();
    for n in 1..=300 {
        let s = walk(&c, n, &mut GuidedCounterSource::new(n));
        assert!(c.is_special(&s), "n = {n}");
        assert_eq!(s.length.value(), Some(n));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn random_walks_never_miscount(seed in any::<u64>(), n in 1u64..600) {
        let c = Counter::default();
        let s = walk(&c, n, &mut RandomSource::new(seed));
        if c.is_special(&s) {
            prop_assert_eq!(s.length.value(), Some(n));
        }
    }

    #[test]
    fn random_strategy_summary_is_sound(seed in any::<u64>(), n in 1u64..64) {
        let c = Counter::default();
        let run = run_counter(&c, n, Strategy::Random { seed, samples: 16 }, Bounds::default()).unwrap();
        prop_assert!(run.summary.all_special_correct);
    }
}
