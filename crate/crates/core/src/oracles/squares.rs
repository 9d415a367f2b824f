/// True iff `n` is a sum of consecutive odd numbers starting at 1.
pub fn is_perfect_square(n: u64) -> bool {
    let (mut sum, mut odd) = (0u64, 1u64);
    while sum < n {
        sum += odd;
        odd += 2;
    }
    sum == n
}

/// Floor of the square root.
pub fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// Membership in `{ a^n b x : n >= 1 square, x in {a,b}* }`.
pub fn square_language_member(w: &str) -> bool {
    let n = w.bytes().take_while(|&c| c == b'a').count();
    let rest = &w.as_bytes()[n..];
    n >= 1 && rest.first() == Some(&b'b') && rest.iter().all(|&c| c == b'a' || c == b'b') && is_perfect_square(n as u64)
}
