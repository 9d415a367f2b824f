use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PrattError {
    #[error("{0} is not prime")]
    NotPrime(u64),
}

/// Primality by trial division up to the square root.
pub fn trial_division_is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Prime factorisation by trial division, ascending primes with exponents.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
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
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn mod_pow(base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let m128 = u128::from(m);
    let mut b = u128::from(base) % m128;
    let mut acc = 1u128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m128;
        }
        b = b * b % m128;
        exp >>= 1;
    }
    acc as u64
}

/// Recursive primality witness: a generator of the units mod `p`, the
/// factorisation of `p - 1`, and one sub-certificate per distinct odd factor.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct PrattCertificate {
    pub p: u64,
    pub generator: u64,
    pub factors: Vec<(u64, u32)>,
    pub children: Vec<PrattCertificate>,
}

impl PrattCertificate {
    pub fn render(&self) -> String {
        let fs: Vec<String> = self.factors.iter().map(|(q, e)| format!("{q}^{e}")).collect();
        let mut out = format!("{}:g={}[{}]", self.p, self.generator, fs.join("*"));
        for c in &self.children {
            out.push_str(&format!(" ({})", c.render()));
        }
        out
    }
}

/// Checks the conditions of one certificate node, ignoring its children.
pub fn pratt_node_ok(p: u64, g: u64, factors: &[(u64, u32)]) -> bool {
    if p < 2 || g == 0 || g >= p {
        return false;
    }
    let mut prod = 1u64;
    let mut prev = 1u64;
    for &(q, e) in factors {
        if q <= prev || e == 0 {
            return false;
        }
        prev = q;
        for _ in 0..e {
            prod = match prod.checked_mul(q) {
                Some(v) => v,
                None => return false,
            };
        }
    }
    prod == p - 1 && mod_pow(g, p - 1, p) == 1 && factors.iter().all(|&(q, _)| mod_pow(g, (p - 1) / q, p) != 1)
}

/// Whether `g` generates the units mod `p`, given the factorisation of `p - 1`.
pub(crate) fn is_generator(p: u64, g: u64, factors: &[(u64, u32)]) -> bool {
    pratt_node_ok(p, g, factors)
}

fn children_match(cert: &PrattCertificate) -> bool {
    let needed: Vec<u64> = cert.factors.iter().map(|f| f.0).filter(|&q| q > 2).collect();
    needed.len() == cert.children.len() && needed.iter().zip(&cert.children).all(|(&q, c)| c.p == q)
}

/// A certificate for prime `p` using its smallest primitive root.
pub fn pratt_generate(p: u64) -> Result<PrattCertificate, PrattError> {
    if !trial_division_is_prime(p) {
        return Err(PrattError::NotPrime(p));
    }
    let factors = factorize(p - 1);
    let generator = (1..p)
        .find(|&g| is_generator(p, g, &factors))
        .expect("every prime has a primitive root");
    let children = factors
        .iter()
        .filter(|f| f.0 > 2)
        .map(|f| pratt_generate(f.0))
        .collect::<Result<_, _>>()?;
    Ok(PrattCertificate {
        p,
        generator,
        factors,
        children,
    })
}

/// Strict recursive check: every node's conditions hold and children appear
/// exactly once per distinct factor other than 2 (odd or not), in factor order. `2` certifies itself.
pub fn pratt_verify(p: u64, cert: &PrattCertificate) -> bool {
    pratt_verify_budgeted(p, cert, u64::MAX).0 == Some(true)
}

/// Verification charging one step per certificate node visited.
/// Returns `None` as the verdict when `budget` runs out first.
pub fn pratt_verify_budgeted(p: u64, cert: &PrattCertificate, budget: u64) -> (Option<bool>, u64) {
    let mut used = 0;
    let verdict = verify_node(p, cert, budget, &mut used);
    (verdict, used)
}

fn verify_node(p: u64, cert: &PrattCertificate, budget: u64, used: &mut u64) -> Option<bool> {
    if *used >= budget {
        return None;
    }
    *used += 1;
    if cert.p != p || !pratt_node_ok(p, cert.generator, &cert.factors) || !children_match(cert) {
        return Some(false);
    }
    for child in &cert.children {
        match verify_node(child.p, child, budget, used)? {
            true => {}
            false => return Some(false),
        }
    }
    Some(true)
}

/// Nodes in the certificate tree of a prime (what verification costs).
pub fn pratt_node_count(p: u64) -> u64 {
    1 + factorize(p - 1)
        .iter()
        .filter(|f| f.0 > 2)
        .map(|f| pratt_node_count(f.0))
        .sum::<u64>()
}
