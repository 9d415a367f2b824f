use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PadError {
    #[error("binary word is empty")]
    Empty,
    #[error("binary word `{0}` must start with 1")]
    LeadingZero(String),
    #[error("`{0}` is not a binary digit")]
    NotBinary(char),
    #[error("binary word longer than 64 bits")]
    TooLong,
    #[error("0 has no padded preimage")]
    Zero,
}

/// A word in `1{0,1}*`, most significant bit first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BinaryWord(String);

impl BinaryWord {
    pub fn parse(s: &str) -> Result<Self, PadError> {
        let first = s.chars().next().ok_or(PadError::Empty)?;
        if let Some(bad) = s.chars().find(|c| *c != '0' && *c != '1') {
            return Err(PadError::NotBinary(bad));
        }
        if first != '1' {
            return Err(PadError::LeadingZero(s.to_string()));
        }
        if s.len() > 64 {
            return Err(PadError::TooLong);
        }
        Ok(BinaryWord(s.to_string()))
    }

    pub fn from_value(n: u64) -> Result<Self, PadError> {
        if n == 0 {
            return Err(PadError::Zero);
        }
        Ok(BinaryWord(format!("{n:b}")))
    }

    pub fn value(&self) -> u64 {
        self.0.bytes().fold(0, |acc, b| (acc << 1) | u64::from(b - b'0'))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn bits(&self) -> impl Iterator<Item = bool> + '_ {
        self.0.bytes().map(|b| b == b'1')
    }
}

impl fmt::Display for BinaryWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Length of `pad(w)` by the defining recursion, without building the word.
pub fn pad_len(w: &BinaryWord) -> u64 {
    let mut bits = w.bits();
    bits.next();
    bits.fold(1, |len, b| 2 * len + u64::from(b))
}

/// Unary padding: `pad(1) = a`, `pad(w0) = pad(w)^2`, `pad(w1) = pad(w)^2 a`.
pub fn pad(w: &BinaryWord) -> String {
    let mut bits = w.bits();
    bits.next();
    let mut out = String::from("a");
    for b in bits {
        out = out.repeat(2);
        if b {
            out.push('a');
        }
    }
    out
}

/// Inverse of [`pad`] on lengths: the binary expansion of `n`.
pub fn unpad(n: u64) -> Result<BinaryWord, PadError> {
    BinaryWord::from_value(n)
}
