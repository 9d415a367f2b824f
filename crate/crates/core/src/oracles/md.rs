/// Control state of the binary counter machine.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MdState {
    /// Walking right back to the least significant end.
    Q0,
    /// Propagating a carry leftward.
    Q1,
}

/// Full configuration of the counter machine. `cells[i]` is the cell at offset `-i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MdSnapshot {
    pub state: MdState,
    pub head: i64,
    pub cells: Vec<char>,
}

impl MdSnapshot {
    pub fn cell(&self, offset: i64) -> char {
        if offset > 0 {
            return '#';
        }
        self.cells.get((-offset) as usize).copied().unwrap_or('#')
    }

    /// Digits, most significant first.
    pub fn digits(&self) -> String {
        self.cells.iter().skip(1).rev().filter(|c| **c != '#').collect()
    }

    /// Head on the blank right of the digits, in the walking state.
    pub fn is_normal_form(&self) -> bool {
        self.state == MdState::Q0 && self.head == 0
    }
}

/// Simulates the counter for `t` raw steps from the blank tape, without the
/// general engine. Returns the number of normal-form arrivals and the configuration.
pub fn md_reference(t: u64) -> (u64, MdSnapshot) {
    let mut s = MdSnapshot {
        state: MdState::Q0,
        head: 0,
        cells: vec!['#'],
    };
    let mut value = 0;
    for _ in 0..t {
        let idx = (-s.head) as usize;
        if idx >= s.cells.len() {
            s.cells.resize(idx + 1, '#');
        }
        let sym = s.cells[idx];
        let (next, write, dir) = match (s.state, sym) {
            (MdState::Q0, '#') => (MdState::Q1, '#', -1),
            (MdState::Q0, d) => (MdState::Q0, d, 1),
            (MdState::Q1, '1') => (MdState::Q1, '0', -1),
            (MdState::Q1, _) => (MdState::Q0, '1', 1),
        };
        s.cells[idx] = write;
        s.head += dir;
        s.state = next;
        if s.is_normal_form() {
            value += 1;
        }
    }
    (value, s)
}
