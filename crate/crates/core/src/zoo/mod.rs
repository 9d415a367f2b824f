//! The concrete machines and the padding encoding.

mod loader;
mod pad;

pub use loader::{load_machine, MD_FILE, MS_FILE};
pub use pad::{pad, pad_len, unpad, BinaryWord, PadError};

use crate::tm::{AcceptanceMode, MachineBuilder, MachineSpec, Move, RuleDef};

fn rule1(from: &str, inp: char, w: char, to: &str, mw: Move, ww: char) -> RuleDef {
    RuleDef {
        from: from.into(),
        read_input: Some(inp),
        read_work: vec![w],
        to: to.into(),
        move_input: Some(Move::R),
        move_work: vec![mw],
        write_input: Some(inp),
        write_work: vec![ww],
        line: None,
    }
}

fn rule0(from: &str, w: char, to: &str, mw: Move, ww: char) -> RuleDef {
    RuleDef {
        from: from.into(),
        read_input: None,
        read_work: vec![w],
        to: to.into(),
        move_input: None,
        move_work: vec![mw],
        write_input: None,
        write_work: vec![ww],
        line: None,
    }
}

/// Deterministic real-time recognizer of `a^n b x` for square `n >= 1`, using
/// one work tape and about `2 sqrt(n)` cells.
pub fn build_ms() -> MachineSpec {
    use Move::*;
    let mut b = MachineBuilder::new("ms");
    b.states = ["q0", "q1", "q2", "q3"].map(String::from).to_vec();
    b.initial = Some("q0".into());
    b.halt = Some("h".into());
    b.input_alphabet = Some(vec!['a', 'b']);
    b.work_alphabet = vec!['#', 'a', '0', '1'];
    b.num_work_tapes = 1;
    b.mode = Some(AcceptanceMode::HaltState);
    b.rules = vec![
        rule1("q0", 'a', '#', "q1", R, '0'),
        rule1("q0", 'a', '0', "q0", R, '0'),
        rule1("q1", 'a', '#', "q2", L, '0'),
        rule1("q1", 'b', '#', "h", L, '0'),
        rule1("q2", 'a', '0', "q2", L, '0'),
        rule1("q2", 'a', '#', "q3", L, '0'),
        rule1("q3", 'a', '#', "q0", R, '0'),
        rule1("q3", 'b', '#', "h", L, '0'),
    ];
    b.build().expect("ms table is well formed")
}

/// The input-free binary counter, most significant bit leftmost. It never halts.
pub fn build_md() -> MachineSpec {
    use Move::*;
    let mut b = MachineBuilder::new("md");
    b.states = ["q0", "q1"].map(String::from).to_vec();
    b.initial = Some("q0".into());
    b.work_alphabet = vec!['#', '0', '1'];
    b.num_work_tapes = 1;
    b.mode = Some(AcceptanceMode::FinalStateEmptyStorage);
    b.rules = vec![
        rule0("q0", '#', "q1", L, '#'),
        rule0("q0", '0', "q0", R, '0'),
        rule0("q0", '1', "q0", R, '1'),
        rule0("q1", '#', "q0", R, '1'),
        rule0("q1", '0', "q0", R, '1'),
        rule0("q1", '1', "q1", L, '0'),
    ];
    b.build().expect("md table is well formed")
}

/// The unary word `a^n`.
pub fn unary(n: usize) -> Vec<char> {
    vec!['a'; n]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tm::{run_clocked, run_deterministic, validate_real_time, RealTimeVerdict, Verdict};

    fn word(s: &str) -> Vec<char> {
        s.chars().collect()
    }

    #[test]
    fn ms_shape() {
        let ms = build_ms();
        assert_eq!(ms.rules().len(), 8);
        assert_eq!(ms.states(), ["q0", "q1", "q2", "q3"]);
        assert!(ms.is_deterministic());
        assert!(validate_real_time(&ms).passed());
    }

    #[test]
    fn ms_small_inputs() {
        let ms = build_ms();
        assert_eq!(run_deterministic(&ms, &word("ab")).unwrap().verdict, Verdict::Accept);
        assert_eq!(run_deterministic(&ms, &word("aaaab")).unwrap().verdict, Verdict::Accept);
        assert!(!run_deterministic(&ms, &word("aaab")).unwrap().accepted());
        let r = run_deterministic(&ms, &word("aab")).unwrap();
        assert_eq!(r.verdict, Verdict::Stuck);
        let r = run_deterministic(&ms, &[]).unwrap();
        assert_eq!((r.verdict, r.steps), (Verdict::Reject, 0));
    }

    #[test]
    fn ms_first_rule() {
        let ms = build_ms();
        let c = crate::tm::Configuration::initial(&ms, &word("a"));
        let succ = crate::tm::step(&ms, &c);
        assert_eq!(succ.len(), 1);
        let next = &succ[0].config;
        assert_eq!(ms.state_name(next.state), "q1");
        assert_eq!(next.work[0].get(0), '0');
        assert_eq!((next.input_pos(), next.work[0].head()), (1, 1));
        let stuck = crate::tm::Configuration::initial(&ms, &word("b"));
        assert!(crate::tm::step(&ms, &stuck).is_empty());
    }

    #[test]
    fn md_counts() {
        let md = build_md();
        assert_eq!(validate_real_time(&md).verdict, RealTimeVerdict::NotApplicable);
        let c = run_clocked(&md, 2).unwrap();
        assert_eq!(c.work[0].get(-1), '1');
        assert_eq!((c.work[0].head(), c.state), (0, 0));
        let c = run_clocked(&md, 6).unwrap();
        assert_eq!((c.work[0].get(-2), c.work[0].get(-1)), ('1', '0'));
        let carry = &md.rules()[5];
        assert_eq!(
            (carry.from, carry.to, carry.move_work[0], carry.write_work[0]),
            (1, 1, Move::L, '0')
        );
    }

    #[test]
    fn one_rule_broken_fails_validation() {
        let ms = build_ms();
        let mut r = ms.rules()[3].clone();
        r.move_input = Some(Move::N);
        let broken = ms.with_rule(3, r);
        assert_eq!(validate_real_time(&broken).verdict, RealTimeVerdict::Fail(vec![3]));
    }
}
