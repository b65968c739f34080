//! Space-time diagrams and their renderings.

use crate::automaton::{Automaton, State};
use crate::config::PeriodicConfig;
use crate::error::{Error, Result};

/// One glyph per state in ASCII renderings.
pub const GLYPHS: &str = ".#23456789abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ";

/// Row 0 is the initial configuration, row `t + 1` the step of row `t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagram {
    states: usize,
    rows: Vec<Vec<State>>,
}

impl Diagram {
    pub fn width(&self) -> usize {
        self.rows[0].len()
    }

    pub fn height(&self) -> usize {
        self.rows.len()
    }

    pub fn states(&self) -> usize {
        self.states
    }

    pub fn rows(&self) -> &[Vec<State>] {
        &self.rows
    }

    /// Gray level of each state, `s * 255 / (n - 1)`.
    pub fn gray(&self, s: State) -> u8 {
        if self.states <= 1 {
            0
        } else {
            (s as usize * 255 / (self.states - 1)) as u8
        }
    }

    /// The gray levels as RGB triples.
    pub fn palette(&self) -> Vec<[u8; 3]> {
        (0..self.states as State).map(|s| [self.gray(s); 3]).collect()
    }

    /// Re-checks that every row is the step of the previous one.
    pub fn verify(&self, a: &Automaton) -> bool {
        self.rows.windows(2).all(|w| a.step_word(&w[0]) == w[1])
    }

    fn ordered(&self, time_up: bool) -> Box<dyn Iterator<Item = &Vec<State>> + '_> {
        if time_up {
            Box::new(self.rows.iter().rev())
        } else {
            Box::new(self.rows.iter())
        }
    }

    /// Binary graymap, one pixel per cell.
    pub fn render_pgm(&self, time_up: bool) -> Vec<u8> {
        let mut out = format!("P5\n{} {}\n255\n", self.width(), self.height()).into_bytes();
        for row in self.ordered(time_up) {
            out.extend(row.iter().map(|&s| self.gray(s)));
        }
        out
    }

    /// One glyph per cell, one line per time step.
    pub fn render_ascii(&self, time_up: bool) -> Result<String> {
        let glyphs: Vec<char> = GLYPHS.chars().collect();
        if self.states > glyphs.len() {
            return Err(Error::InvalidParameter(format!(
                "{} states exceed the {} ASCII glyphs; render as PGM instead",
                self.states,
                glyphs.len()
            )));
        }
        let mut out = String::with_capacity(self.height() * (self.width() + 1));
        for row in self.ordered(time_up) {
            out.extend(row.iter().map(|&s| glyphs[s as usize]));
            out.push('\n');
        }
        Ok(out)
    }
}

/// Iterates `c` for `steps` steps; `replicate` repeats the period
/// horizontally.
pub fn run(a: &Automaton, c: &PeriodicConfig, steps: usize, replicate: usize) -> Result<Diagram> {
    if c.states() != a.states() {
        return Err(Error::StateMismatch { automaton: a.states(), config: c.states() });
    }
    if replicate == 0 {
        return Err(Error::InvalidParameter("replication factor must be at least 1".into()));
    }
    let mut rows = Vec::with_capacity(steps + 1);
    let mut row = c.replicate(replicate).into_word();
    for _ in 0..steps {
        let next = a.step_word(&row);
        rows.push(std::mem::replace(&mut row, next));
    }
    rows.push(row);
    Ok(Diagram { states: a.states(), rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zoo;

    #[test]
    fn identity_rows_repeat() {
        let c = PeriodicConfig::new(2, vec![0, 1, 1]).unwrap();
        let d = run(&zoo::identity(2), &c, 3, 1).unwrap();
        assert_eq!(d.height(), 4);
        assert!(d.rows().iter().all(|r| r == c.word()));
    }

    #[test]
    fn renderings() {
        let d = run(&zoo::identity(1), &PeriodicConfig::new(1, vec![0]).unwrap(), 0, 1).unwrap();
        assert_eq!(d.render_pgm(false), b"P5\n1 1\n255\n\0".to_vec());
        let d = run(&zoo::identity(2), &PeriodicConfig::new(2, vec![0, 1]).unwrap(), 0, 1).unwrap();
        assert_eq!(d.render_ascii(false).unwrap(), ".#\n");
        assert_eq!(d.palette(), vec![[0; 3], [255; 3]]);
        let big = run(&zoo::identity(63), &PeriodicConfig::new(63, vec![62]).unwrap(), 0, 1).unwrap();
        assert!(big.render_ascii(false).is_err());
    }

    #[test]
    fn shift_draws_a_diagonal() {
        let s = zoo::shift(2, 1).unwrap();
        let d = run(&s, &PeriodicConfig::new(2, vec![1, 0, 0]).unwrap(), 2, 2).unwrap();
        assert_eq!(d.render_ascii(false).unwrap(), "#..#..\n.#..#.\n..#..#\n");
        assert_eq!(d.render_ascii(true).unwrap(), "..#..#\n.#..#.\n#..#..\n");
        assert!(d.verify(&s));
    }
}
