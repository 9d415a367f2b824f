use std::fmt;

use crate::tm::TapeSymbol;

/// A counter-machine tape symbol paired with a marker for "the simulated head is here".
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExtendedSymbol {
    pub base: char,
    pub marked: bool,
}

impl ExtendedSymbol {
    pub const fn new(base: char, marked: bool) -> Self {
        ExtendedSymbol { base, marked }
    }

    /// All six symbols, in the fixed order branches are enumerated in.
    pub const ALL: [ExtendedSymbol; 6] = [
        Self::new('#', false),
        Self::new('#', true),
        Self::new('0', false),
        Self::new('0', true),
        Self::new('1', false),
        Self::new('1', true),
    ];

    pub fn is_digit(self) -> bool {
        self.base != '#'
    }
}

impl TapeSymbol for ExtendedSymbol {
    const BLANK: Self = ExtendedSymbol::new('#', false);

    fn render(&self) -> String {
        if self.marked {
            format!("{}'", self.base)
        } else {
            self.base.to_string()
        }
    }
}

impl fmt::Debug for ExtendedSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl fmt::Display for ExtendedSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}
