//! Inputs shared by the benchmarks.

use rtlab_core::tm::Symbol;

/// `a^n b`, the square machine's canonical input.
pub fn square_input(n: usize) -> Vec<Symbol> {
    let mut w = vec!['a'; n];
    w.push('b');
    w
}

/// Primes below `limit`, by trial division.
pub fn primes_below(limit: u64) -> Vec<u64> {
    (2..limit)
        .filter(|&p| rtlab_core::oracles::trial_division_is_prime(p))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures() {
        assert_eq!(square_input(2), vec!['a', 'a', 'b']);
        assert_eq!(primes_below(12), vec![2, 3, 5, 7, 11]);
    }
}
