use std::collections::BTreeMap;

use crate::error::{Error, Result};

/// Head movement of a Turing machine transition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Move {
    Left,
    Stay,
    Right,
}

impl Move {
    pub fn delta(self) -> i64 {
        match self {
            Move::Left => -1,
            Move::Stay => 0,
            Move::Right => 1,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Transition {
    pub next: usize,
    pub write: usize,
    pub movement: Move,
}

/// A one-tape Turing machine with a total transition function.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TuringMachine {
    states: usize,
    symbols: usize,
    blank: usize,
    // Indexed by `state * symbols + symbol`.
    delta: Vec<Transition>,
}

impl TuringMachine {
    pub fn new(states: usize, symbols: usize, blank: usize, delta: Vec<Transition>) -> Result<Self> {
        if states == 0 || symbols == 0 {
            return Err(Error::InvalidParameter("empty state or tape alphabet".into()));
        }
        if blank >= symbols {
            return Err(Error::InvalidParameter(format!("blank {blank} >= {symbols} symbols")));
        }
        if delta.len() != states * symbols {
            return Err(Error::InvalidParameter(format!(
                "transition table has {} entries, expected {}",
                delta.len(),
                states * symbols
            )));
        }
        if delta.iter().any(|t| t.next >= states || t.write >= symbols) {
            return Err(Error::InvalidParameter("transition target out of range".into()));
        }
        Ok(Self { states, symbols, blank, delta })
    }

    pub fn states(&self) -> usize {
        self.states
    }

    pub fn symbols(&self) -> usize {
        self.symbols
    }

    pub fn blank(&self) -> usize {
        self.blank
    }

    pub fn transition(&self, state: usize, symbol: usize) -> Transition {
        self.delta[state * self.symbols + symbol]
    }

    /// Scans right over 1s and 2s, turns the first blank into a 1, then walks
    /// back left to the 2 marker and starts over. Symbols: 0 blank, 1, 2.
    pub fn unary_incrementer() -> Self {
        let t = |next, write, movement| Transition { next, write, movement };
        let delta = vec![
            // q0: move right to the first blank
            t(1, 1, Move::Left),
            t(0, 1, Move::Right),
            t(0, 2, Move::Right),
            // q1: move left to the marker
            t(1, 0, Move::Left),
            t(1, 1, Move::Left),
            t(0, 2, Move::Right),
        ];
        Self::new(2, 3, 0, delta).expect("well-formed")
    }
}

/// Instantaneous description on an unbounded tape.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TmConfig {
    pub state: usize,
    pub head: i64,
    tape: BTreeMap<i64, usize>,
    blank: usize,
}

impl TmConfig {
    /// Tape holding `cells` from position 0, head at `head`.
    pub fn new(tm: &TuringMachine, state: usize, head: i64, cells: &[usize]) -> Self {
        let mut tape = BTreeMap::new();
        for (i, &c) in cells.iter().enumerate() {
            if c != tm.blank {
                tape.insert(i as i64, c);
            }
        }
        Self { state, head, tape, blank: tm.blank }
    }

    pub fn read(&self, pos: i64) -> usize {
        self.tape.get(&pos).copied().unwrap_or(self.blank)
    }

    pub fn step(&mut self, tm: &TuringMachine) {
        let tr = tm.transition(self.state, self.read(self.head));
        if tr.write == self.blank {
            self.tape.remove(&self.head);
        } else {
            self.tape.insert(self.head, tr.write);
        }
        self.state = tr.next;
        self.head += tr.movement.delta();
    }

    /// Tape contents on positions `lo..=hi`.
    pub fn window(&self, lo: i64, hi: i64) -> Vec<usize> {
        (lo..=hi).map(|p| self.read(p)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn incrementer_appends_ones() {
        let tm = TuringMachine::unary_incrementer();
        let mut c = TmConfig::new(&tm, 0, 0, &[2, 1]);
        let mut ones = 1;
        for _ in 0..200 {
            c.step(&tm);
            let now = c.window(0, 40).iter().filter(|&&s| s == 1).count();
            assert!(now == ones || now == ones + 1);
            ones = now;
        }
        assert!(ones >= 5);
        assert_eq!(c.read(0), 2);
    }

    #[test]
    fn rejects_partial_tables() {
        assert!(TuringMachine::new(1, 2, 0, vec![]).is_err());
        assert!(TuringMachine::new(1, 2, 2, vec![]).is_err());
    }
}
