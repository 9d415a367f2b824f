use std::fmt;

use super::Move;

/// Symbols that can live on a [`Tape`]. Every cell not yet written holds `BLANK`.
pub trait TapeSymbol: Copy + Eq + fmt::Debug {
    const BLANK: Self;

    /// Single-character rendering used by trace windows.
    fn render(&self) -> String;
}

impl TapeSymbol for char {
    const BLANK: char = '#';

    fn render(&self) -> String {
        self.to_string()
    }
}

/// A two-way unbounded tape addressed by signed offsets.
///
/// Storage is a dense window `[origin, origin + cells.len())` that grows in
/// either direction on demand; everything outside it reads as blank.
/// `min_touched..=max_touched` is the extent of all visited or written cells.
#[derive(Clone, PartialEq, Eq)]
pub struct Tape<S: TapeSymbol = char> {
    cells: Vec<S>,
    origin: i64,
    head: i64,
    min_touched: i64,
    max_touched: i64,
}

impl<S: TapeSymbol> Default for Tape<S> {
    fn default() -> Self {
        Self::new()
    }
}

impl<S: TapeSymbol> Tape<S> {
    /// An all-blank tape with the head on cell 0.
    pub fn new() -> Self {
        Tape {
            cells: Vec::new(),
            origin: 0,
            head: 0,
            min_touched: 0,
            max_touched: 0,
        }
    }

    /// A tape holding `word` at offsets `0..word.len()`, head on cell 0.
    pub fn with_word(word: &[S]) -> Self {
        // Input cells count as touched only once visited.
        Tape {
            cells: word.to_vec(),
            origin: 0,
            head: 0,
            min_touched: 0,
            max_touched: 0,
        }
    }

    pub fn head(&self) -> i64 {
        self.head
    }

    pub fn min_touched(&self) -> i64 {
        self.min_touched
    }

    pub fn max_touched(&self) -> i64 {
        self.max_touched
    }

    pub fn get(&self, offset: i64) -> S {
        let idx = offset - self.origin;
        if idx < 0 {
            return S::BLANK;
        }
        self.cells.get(idx as usize).copied().unwrap_or(S::BLANK)
    }

    pub fn read(&self) -> S {
        self.get(self.head)
    }

    /// Writes `sym` at `offset` without moving the head.
    pub fn set(&mut self, offset: i64, sym: S) {
        if sym == S::BLANK && self.get(offset) == S::BLANK {
            self.touch(offset);
            return;
        }
        if self.cells.is_empty() {
            self.origin = offset;
        }
        if offset < self.origin {
            let grow = (self.origin - offset) as usize;
            let mut fresh = vec![S::BLANK; grow];
            fresh.extend_from_slice(&self.cells);
            self.cells = fresh;
            self.origin = offset;
        }
        let idx = (offset - self.origin) as usize;
        if idx >= self.cells.len() {
            self.cells.resize(idx + 1, S::BLANK);
        }
        self.cells[idx] = sym;
        self.touch(offset);
    }

    pub fn write(&mut self, sym: S) {
        self.set(self.head, sym);
    }

    pub fn shift(&mut self, mv: Move) {
        self.move_to(self.head + mv.delta());
    }

    /// Puts the head on `offset`, counting the cell as visited.
    pub fn move_to(&mut self, offset: i64) {
        self.head = offset;
        self.touch(offset);
    }

    fn touch(&mut self, offset: i64) {
        self.min_touched = self.min_touched.min(offset);
        self.max_touched = self.max_touched.max(offset);
    }

    /// Number of cells between the outermost visited or written cells.
    pub fn space_used(&self) -> usize {
        (self.max_touched - self.min_touched + 1) as usize
    }

    /// Offsets holding a non-blank symbol, left to right.
    pub fn non_blank(&self) -> impl Iterator<Item = (i64, S)> + '_ {
        self.cells
            .iter()
            .enumerate()
            .filter(|(_, s)| **s != S::BLANK)
            .map(move |(i, s)| (self.origin + i as i64, *s))
    }

    pub fn is_blank(&self) -> bool {
        self.non_blank().next().is_none()
    }

    /// Cells `head - radius ..= head + radius`, head cell in brackets.
    pub fn window(&self, radius: i64) -> String {
        let mut out = String::new();
        for off in self.head - radius..=self.head + radius {
            let cell = self.get(off).render();
            if off == self.head {
                out.push('[');
                out.push_str(&cell);
                out.push(']');
            } else {
                out.push_str(&cell);
            }
        }
        out
    }

    /// Contents of the touched extent, left to right.
    pub fn touched_contents(&self) -> Vec<S> {
        (self.min_touched..=self.max_touched).map(|off| self.get(off)).collect()
    }
}

impl<S: TapeSymbol> fmt::Debug for Tape<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body: String = self.touched_contents().iter().map(|s| s.render()).collect();
        write!(
            f,
            "Tape({body} @ {}..={}, head {})",
            self.min_touched, self.max_touched, self.head
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grows_both_ways() {
        let mut t: Tape = Tape::new();
        t.write('0');
        t.shift(Move::L);
        t.shift(Move::L);
        t.write('1');
        assert_eq!(t.get(-2), '1');
        assert_eq!(t.get(0), '0');
        assert_eq!(t.get(-1), '#');
        assert_eq!(t.get(7), '#');
        assert_eq!(t.space_used(), 3);
        assert_eq!(t.window(1), "#[1]#");
    }

    #[test]
    fn blank_tape_uses_one_cell() {
        let t: Tape = Tape::new();
        assert_eq!(t.space_used(), 1);
        assert!(t.is_blank());
    }

    #[test]
    fn visiting_counts_as_space() {
        let mut t: Tape = Tape::new();
        t.shift(Move::R);
        t.shift(Move::R);
        assert_eq!(t.space_used(), 3);
        assert!(t.is_blank());
    }
}
