//! Helpers shared by the integration tests. The oracles here are deliberately
//! naive and do not call into the library's own checkers.

#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rtlab_core::oracles::PrattCertificate;
use rtlab_core::tm::{
    step_in_place, AcceptanceMode, Configuration, MachineBuilder, MachineSpec, Move, RuleDef, StepOutcome,
};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn brute_prime(n: u64) -> bool {
    n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

/// Prime factors with multiplicity, smallest first, by repeated division.
pub fn brute_factors(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2;
    while n > 1 {
        let mut e = 0;
        while n.is_multiple_of(d) {
            n /= d;
            e += 1;
        }
        if e > 0 {
            out.push((d, e));
        }
        d += 1;
    }
    out
}

/// Multiplicative order of `g` mod `p` by repeated multiplication, if it exists.
pub fn brute_order(g: u64, p: u64) -> Option<u64> {
    if g == 0 || g >= p {
        return None;
    }
    let mut x = g % p;
    for k in 1..=p {
        if x == 1 % p {
            return Some(k);
        }
        x = x * g % p;
    }
    None
}

/// A certificate is valid iff it names a prime, its generator has full order,
/// its factor list is the true factorisation, and each factor other than 2 has
/// a valid child certificate, in order.
pub fn brute_cert_valid(c: &PrattCertificate) -> bool {
    let p = c.p;
    if !brute_prime(p) || brute_order(c.generator, p) != Some(p - 1) || c.factors != brute_factors(p - 1) {
        return false;
    }
    let needed: Vec<u64> = c.factors.iter().map(|f| f.0).filter(|&q| q != 2).collect();
    needed.len() == c.children.len()
        && needed
            .iter()
            .zip(&c.children)
            .all(|(&q, ch)| ch.p == q && brute_cert_valid(ch))
}

fn node_count(c: &PrattCertificate) -> usize {
    1 + c.children.iter().map(node_count).sum::<usize>()
}

fn nth_node(c: &mut PrattCertificate, mut k: usize) -> &mut PrattCertificate {
    if k == 0 {
        return c;
    }
    k -= 1;
    let mut idx = 0;
    while k >= node_count(&c.children[idx]) {
        k -= node_count(&c.children[idx]);
        idx += 1;
    }
    nth_node(&mut c.children[idx], k)
}

/// Changes one field of one node chosen at random.
pub fn mutate_cert(c: &PrattCertificate, r: &mut impl Rng) -> PrattCertificate {
    let mut out = c.clone();
    let k = r.gen_range(0..node_count(&out));
    let node = nth_node(&mut out, k);
    match r.gen_range(0..11) {
        0 => node.generator = r.gen_range(0..node.p + 2),
        1 => node.p = node.p.wrapping_add(if r.gen_bool(0.5) { 1 } else { u64::MAX }),
        2 if !node.factors.is_empty() => {
            let i = r.gen_range(0..node.factors.len());
            node.factors[i].0 = r.gen_range(1..node.p.max(3));
        }
        3 if !node.factors.is_empty() => {
            let i = r.gen_range(0..node.factors.len());
            node.factors[i].1 = r.gen_range(0..6);
        }
        4 if !node.factors.is_empty() => {
            let i = r.gen_range(0..node.factors.len());
            node.factors.remove(i);
        }
        5 => {
            let q = r.gen_range(2..node.p.max(3) + 1);
            node.factors.push((q, 1));
            node.factors.sort();
        }
        6 if !node.children.is_empty() => {
            let i = r.gen_range(0..node.children.len());
            node.children.remove(i);
        }
        7 if !node.children.is_empty() => {
            let i = r.gen_range(0..node.children.len());
            let dup = node.children[i].clone();
            node.children.insert(i, dup);
        }
        8 => {
            // Claim `p - 1` is itself a factor, with no sub-certificate.
            node.factors = vec![(node.p.saturating_sub(1), 1)];
            node.children.clear();
        }
        9 => {
            // Merge a prime power q^(2k) into (q^2)^k.
            if let Some(f) = node.factors.iter_mut().find(|f| f.1 >= 2 && f.1 % 2 == 0) {
                *f = (f.0 * f.0, f.1 / 2);
                node.factors.sort();
            }
        }
        _ => {
            // Claim a nearby number instead.
            node.p = r.gen_range(2..node.p + 50);
        }
    }
    out
}

/// A random real-time machine in halt-state mode over `input`, with one work tape.
/// With `fanout > 1` some sources get several rules.
pub fn random_machine(r: &mut impl Rng, input: &[char], states: usize, fanout: usize) -> MachineSpec {
    let names: Vec<String> = (0..states).map(|i| format!("q{i}")).collect();
    let work = ['#', '0', '1'];
    let mut b = MachineBuilder::new("random");
    b.states = names.clone();
    b.initial = Some("q0".into());
    b.halt = Some("h".into());
    b.input_alphabet = Some(input.to_vec());
    b.work_alphabet = work.to_vec();
    b.num_work_tapes = 1;
    b.mode = Some(AcceptanceMode::HaltState);
    b.nondeterministic = fanout > 1;
    for q in &names {
        for &a in input {
            for &w in &work {
                let count = if r.gen_bool(0.15) { 0 } else { r.gen_range(1..=fanout) };
                for _ in 0..count {
                    let to = if r.gen_bool(0.1) {
                        "h".to_string()
                    } else {
                        names[r.gen_range(0..states)].clone()
                    };
                    b.rules.push(RuleDef {
                        from: q.clone(),
                        read_input: Some(a),
                        read_work: vec![w],
                        to,
                        move_input: Some(Move::R),
                        move_work: vec![[Move::L, Move::R, Move::N][r.gen_range(0..3)]],
                        write_input: Some(a),
                        write_work: vec![work[r.gen_range(0..3)]],
                        line: None,
                    });
                }
            }
        }
    }
    b.build().expect("random machine is well formed")
}

/// Steps an input-free machine from the blank tape, calling `f` after every step.
pub fn clock(spec: &MachineSpec, ticks: u64, mut f: impl FnMut(&Configuration)) {
    let mut c = Configuration::initial(spec, &[]);
    for _ in 0..ticks {
        match step_in_place(spec, &mut c).expect("deterministic") {
            StepOutcome::Fired(_) => f(&c),
            _ => break,
        }
    }
}

pub fn word(n: usize, tail: &str) -> Vec<char> {
    std::iter::repeat_n('a', n).chain(tail.chars()).collect()
}

/// All words over `alphabet` of length exactly `len`.
pub fn words(alphabet: &[char], len: usize) -> Vec<String> {
    let mut out = vec![String::new()];
    for _ in 0..len {
        out = out
            .iter()
            .flat_map(|w| alphabet.iter().map(move |c| format!("{w}{c}")))
            .collect();
    }
    out
}
