use serde::Serialize;

use crate::guess::GuessSource;
use crate::oracles::{factorize, pratt_verify_budgeted, PrattCertificate};
use crate::zoo::BinaryWord;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DecisionVerdict {
    Accept,
    Reject,
    BudgetExceeded,
}

impl DecisionVerdict {
    pub fn as_str(self) -> &'static str {
        match self {
            DecisionVerdict::Accept => "accept",
            DecisionVerdict::Reject => "reject",
            DecisionVerdict::BudgetExceeded => "budget-exceeded",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Decision {
    pub verdict: DecisionVerdict,
    /// Abstract unit-cost steps consumed, never more than the budget.
    pub steps: u64,
    pub detail: Option<String>,
}

impl Decision {
    fn new(verdict: DecisionVerdict, steps: u64) -> Self {
        Decision {
            verdict,
            steps,
            detail: None,
        }
    }

    pub fn accepted(&self) -> bool {
        self.verdict == DecisionVerdict::Accept
    }
}

/// A procedure deciding a set of binary words within a step budget.
/// Nondeterministic guesses are drawn as indices into candidate lists.
pub trait BudgetedDecider: Send + Sync {
    fn name(&self) -> String;

    /// One branch, every guess taken from `guesses`.
    fn decide(&self, w: &BinaryWord, budget: u64, guesses: &mut dyn GuessSource<u64>) -> Decision;

    /// Accepts iff some sequence of guesses accepts within `budget`.
    fn decide_exhaustive(&self, w: &BinaryWord, budget: u64) -> Decision;

    /// The branch an all-knowing guess source would follow.
    fn decide_guided(&self, w: &BinaryWord, budget: u64) -> Decision {
        self.decide_exhaustive(w, budget)
    }
}

/// Accepts every word in one step.
#[derive(Debug, Clone, Copy, Default)]
pub struct AlwaysAccept;

impl AlwaysAccept {
    fn run(budget: u64) -> Decision {
        if budget == 0 {
            Decision::new(DecisionVerdict::BudgetExceeded, 0)
        } else {
            Decision::new(DecisionVerdict::Accept, 1)
        }
    }
}

impl BudgetedDecider for AlwaysAccept {
    fn name(&self) -> String {
        "always".into()
    }

    fn decide(&self, _: &BinaryWord, budget: u64, _: &mut dyn GuessSource<u64>) -> Decision {
        Self::run(budget)
    }

    fn decide_exhaustive(&self, _: &BinaryWord, budget: u64) -> Decision {
        Self::run(budget)
    }
}

/// Accepts exactly one word, comparing bit by bit until the first difference.
#[derive(Debug, Clone)]
pub struct Singleton(pub BinaryWord);

impl Singleton {
    fn run(&self, w: &BinaryWord, budget: u64) -> Decision {
        let (a, b) = (self.0.as_str().as_bytes(), w.as_str().as_bytes());
        let mut steps = 0;
        for i in 0..a.len().max(b.len()) {
            if steps == budget {
                return Decision::new(DecisionVerdict::BudgetExceeded, steps);
            }
            steps += 1;
            if a.get(i) != b.get(i) {
                return Decision::new(DecisionVerdict::Reject, steps);
            }
        }
        Decision::new(DecisionVerdict::Accept, steps)
    }
}

impl BudgetedDecider for Singleton {
    fn name(&self) -> String {
        format!("singleton:{}", self.0)
    }

    fn decide(&self, w: &BinaryWord, budget: u64, _: &mut dyn GuessSource<u64>) -> Decision {
        self.run(w, budget)
    }

    fn decide_exhaustive(&self, w: &BinaryWord, budget: u64) -> Decision {
        self.run(w, budget)
    }
}

/// Primality by guessing a certificate and verifying it, one step per certificate node.
#[derive(Debug, Clone, Copy, Default)]
pub struct PrattDecider;

impl PrattDecider {
    /// Verifies a complete certificate for `value(w)`.
    pub fn decide_certificate(&self, w: &BinaryWord, budget: u64, cert: &PrattCertificate) -> Decision {
        let (verdict, steps) = pratt_verify_budgeted(w.value(), cert, budget);
        let verdict = match verdict {
            Some(true) => DecisionVerdict::Accept,
            Some(false) => DecisionVerdict::Reject,
            None => DecisionVerdict::BudgetExceeded,
        };
        Decision {
            verdict,
            steps,
            detail: (verdict == DecisionVerdict::Accept).then(|| cert.render()),
        }
    }

    /// Builds a certificate for `p`, choosing each node's generator among `1..p`.
    fn guess_certificate(p: u64, guesses: &mut dyn GuessSource<u64>) -> PrattCertificate {
        let candidates: Vec<u64> = (1..p.max(2)).collect();
        let generator = candidates[guesses.choose(&candidates)];
        let factors = if p >= 2 { factorize(p - 1) } else { Vec::new() };
        let children = factors
            .iter()
            .filter(|f| f.0 > 2)
            .map(|f| Self::guess_certificate(f.0, guesses))
            .collect();
        PrattCertificate {
            p,
            generator,
            factors,
            children,
        }
    }

    /// Node-by-node search: every node is checked once, and a node passes if any
    /// generator works for it, so an accepting branch costs one step per node.
    fn search(p: u64, budget: u64, used: &mut u64) -> Option<bool> {
        if *used >= budget {
            return None;
        }
        *used += 1;
        if p < 2 {
            return Some(false);
        }
        let factors = factorize(p - 1);
        if !(1..p).any(|g| crate::oracles::pratt_node_ok(p, g, &factors)) {
            return Some(false);
        }
        for &(q, _) in factors.iter().filter(|f| f.0 > 2) {
            if !Self::search(q, budget, used)? {
                return Some(false);
            }
        }
        Some(true)
    }
}

impl BudgetedDecider for PrattDecider {
    fn name(&self) -> String {
        "primes".into()
    }

    fn decide(&self, w: &BinaryWord, budget: u64, guesses: &mut dyn GuessSource<u64>) -> Decision {
        let cert = Self::guess_certificate(w.value(), guesses);
        self.decide_certificate(w, budget, &cert)
    }

    fn decide_exhaustive(&self, w: &BinaryWord, budget: u64) -> Decision {
        let mut used = 0;
        let verdict = match Self::search(w.value(), budget, &mut used) {
            Some(true) => DecisionVerdict::Accept,
            Some(false) => DecisionVerdict::Reject,
            None => DecisionVerdict::BudgetExceeded,
        };
        let mut d = Decision::new(verdict, used);
        if verdict == DecisionVerdict::Accept {
            d.detail = crate::oracles::pratt_generate(w.value()).ok().map(|c| c.render());
        }
        d
    }
}
