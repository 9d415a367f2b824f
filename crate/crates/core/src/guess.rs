//! Where nondeterministic choices come from.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Resolves one nondeterministic choice by picking an index into `options`.
pub trait GuessSource<C> {
    fn choose(&mut self, options: &[C]) -> usize;
}

/// Uniform seeded choices; the same seed always gives the same walk.
#[derive(Debug, Clone)]
pub struct RandomSource {
    rng: ChaCha8Rng,
}

impl RandomSource {
    pub fn new(seed: u64) -> Self {
        RandomSource {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Index in `0..count` without materializing the options.
    pub fn pick(&mut self, count: usize) -> usize {
        self.rng.gen_range(0..count)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.rng.gen()
    }
}

impl<C> GuessSource<C> for RandomSource {
    fn choose(&mut self, options: &[C]) -> usize {
        self.pick(options.len())
    }
}

/// How branches are selected.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    /// Every branch, depth first.
    Exhaustive,
    /// The single branch that follows the known-correct answers.
    Guided,
    /// `samples` independent uniformly random walks.
    Random { seed: u64, samples: usize },
}

impl Strategy {
    pub const DEFAULT_SAMPLES: usize = 256;

    pub fn parse(name: &str, seed: u64) -> Option<Strategy> {
        match name {
            "exhaustive" => Some(Strategy::Exhaustive),
            "guided" | "oracle-guided" => Some(Strategy::Guided),
            "random" => Some(Strategy::Random {
                seed,
                samples: Self::DEFAULT_SAMPLES,
            }),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Strategy::Exhaustive => "exhaustive",
            Strategy::Guided => "guided",
            Strategy::Random { .. } => "random",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Strategy::Random { seed, samples } => write!(f, "random(seed={seed}, samples={samples})"),
            other => f.write_str(other.name()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeded_walks_repeat() {
        let opts = [0u8; 78];
        let a: Vec<usize> = {
            let mut r = RandomSource::new(7);
            (0..20).map(|_| r.choose(&opts)).collect()
        };
        let mut r = RandomSource::new(7);
        let b: Vec<usize> = (0..20).map(|_| r.choose(&opts)).collect();
        assert_eq!(a, b);
        assert!(a.iter().all(|&i| i < 78));
    }
}
