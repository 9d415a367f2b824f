use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BitsError {
    #[error("subtraction would go negative")]
    Underflow,
    #[error("`{0}` is not a canonical binary numeral")]
    Parse(String),
}

/// A natural number in binary, most significant bit first, no leading zeros
/// (zero is the single digit `0`). All arithmetic works digit by digit.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bits(Vec<bool>);

impl Bits {
    pub fn zero() -> Self {
        Bits(vec![false])
    }

    pub fn from_u64(v: u64) -> Self {
        if v == 0 {
            return Self::zero();
        }
        let len = 64 - v.leading_zeros();
        Bits((0..len).rev().map(|i| (v >> i) & 1 == 1).collect())
    }

    /// Builds from MSB-first digits, dropping leading zeros.
    pub fn from_digits(digits: impl IntoIterator<Item = bool>) -> Self {
        let v: Vec<bool> = digits.into_iter().skip_while(|b| !b).collect();
        if v.is_empty() {
            Self::zero()
        } else {
            Bits(v)
        }
    }

    /// Value as an integer, for checking; `None` above 64 bits.
    pub fn value(&self) -> Option<u64> {
        if self.0.len() > 64 {
            return None;
        }
        Some(self.0.iter().fold(0u64, |acc, &b| (acc << 1) | u64::from(b)))
    }

    pub fn is_zero(&self) -> bool {
        self.0 == [false]
    }

    /// Number of digits (the cells it occupies).
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn digits(&self) -> &[bool] {
        &self.0
    }

    /// The first `k` digits, i.e. `self >> (len - k)`.
    pub fn prefix(&self, k: usize) -> Bits {
        Bits::from_digits(self.0[..k].iter().copied())
    }

    pub fn increment(&self) -> Bits {
        let mut d = self.0.clone();
        for i in (0..d.len()).rev() {
            if d[i] {
                d[i] = false;
            } else {
                d[i] = true;
                return Bits(d);
            }
        }
        d.insert(0, true);
        Bits(d)
    }
}

/// Ripple-carry addition.
pub fn binary_add(a: &Bits, b: &Bits) -> Bits {
    let (x, y) = (&a.0, &b.0);
    let n = x.len().max(y.len());
    let mut out = Vec::with_capacity(n + 1);
    let mut carry = false;
    for i in 0..n {
        let p = i < x.len() && x[x.len() - 1 - i];
        let q = i < y.len() && y[y.len() - 1 - i];
        out.push(p ^ q ^ carry);
        carry = (p & q) | (carry & (p ^ q));
    }
    if carry {
        out.push(true);
    }
    out.reverse();
    Bits::from_digits(out)
}

/// Ripple-borrow subtraction `a - b`.
pub fn binary_subtract(a: &Bits, b: &Bits) -> Result<Bits, BitsError> {
    let (x, y) = (&a.0, &b.0);
    if y.len() > x.len() {
        return Err(BitsError::Underflow);
    }
    let mut out = Vec::with_capacity(x.len());
    let mut borrow = false;
    for i in 0..x.len() {
        let p = x[x.len() - 1 - i];
        let q = i < y.len() && y[y.len() - 1 - i];
        out.push(p ^ q ^ borrow);
        borrow = (!p & q) | (!p & borrow) | (q & borrow);
    }
    if borrow {
        return Err(BitsError::Underflow);
    }
    out.reverse();
    Ok(Bits::from_digits(out))
}

/// Sum of all proper prefixes (`1..len-1` leading digits).
pub fn sum_proper_prefixes(a: &Bits) -> Bits {
    (1..a.len()).fold(Bits::zero(), |acc, k| binary_add(&acc, &a.prefix(k)))
}

pub fn double_by_append0(a: &Bits) -> Bits {
    if a.is_zero() {
        return a.clone();
    }
    let mut d = a.0.clone();
    d.push(false);
    Bits(d)
}

impl fmt::Display for Bits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Bits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Bits({self})")
    }
}

impl FromStr for Bits {
    type Err = BitsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let ok = !s.is_empty() && s.bytes().all(|c| c == b'0' || c == b'1') && (s == "0" || s.starts_with('1'));
        if !ok {
            return Err(BitsError::Parse(s.to_string()));
        }
        Ok(Bits(s.bytes().map(|c| c == b'1').collect()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn b(s: &str) -> Bits {
        s.parse().unwrap()
    }

    #[test]
    fn examples() {
        assert_eq!(double_by_append0(&b("101")), b("1010"));
        assert_eq!(sum_proper_prefixes(&b("100")), b("11"));
        assert_eq!(binary_subtract(&b("1000"), &b("11")).unwrap(), b("101"));
        assert_eq!(binary_subtract(&b("11"), &b("100")), Err(BitsError::Underflow));
        assert_eq!(binary_subtract(&b("100"), &b("101")), Err(BitsError::Underflow));
        assert_eq!(b("111").increment(), b("1000"));
        assert!("01".parse::<Bits>().is_err());
    }

    proptest! {
        #[test]
        fn add_and_subtract_match_integers(x in 0u64..1 << 40, y in 0u64..1 << 40) {
            let (bx, by) = (Bits::from_u64(x), Bits::from_u64(y));
            prop_assert_eq!(binary_add(&bx, &by).value(), Some(x + y));
            match binary_subtract(&bx, &by) {
                Ok(d) => prop_assert_eq!(d.value(), Some(x - y)),
                Err(_) => prop_assert!(x < y),
            }
        }

        #[test]
        fn prefixes_are_shifts(x in 1u64..1 << 40) {
            let want: u64 = (1..64).map(|j| x >> j).sum();
            prop_assert_eq!(sum_proper_prefixes(&Bits::from_u64(x)).value(), Some(want));
            prop_assert_eq!(Bits::from_u64(x).increment().value(), Some(x + 1));
            prop_assert_eq!(Bits::from_u64(x).to_string(), format!("{x:b}"));
        }
    }
}
