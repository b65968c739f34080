use std::fmt;
use std::hash::{Hash, Hasher};

use crate::automaton::State;
use crate::error::{Error, Result};

/// One spatial period of a periodic configuration over `states` symbols.
///
/// Equality and hashing compare primitive periods, so `0 1` and `0 1 0 1`
/// are the same configuration while `0 1` and `1 0` are not.
#[derive(Clone, Debug)]
pub struct PeriodicConfig {
    states: usize,
    word: Vec<State>,
}

impl PeriodicConfig {
    pub fn new(states: usize, word: Vec<State>) -> Result<Self> {
        if word.is_empty() {
            return Err(Error::EmptyConfig);
        }
        if let Some(&bad) = word.iter().find(|&&s| s as usize >= states) {
            return Err(Error::SymbolOutOfRange { symbol: bad as u64, states });
        }
        Ok(Self { states, word })
    }

    pub(crate) fn from_parts(states: usize, word: Vec<State>) -> Self {
        debug_assert!(!word.is_empty());
        Self { states, word }
    }

    /// The uniform configuration `q q q ...`.
    pub fn uniform(states: usize, q: State) -> Result<Self> {
        Self::new(states, vec![q])
    }

    pub fn states(&self) -> usize {
        self.states
    }

    pub fn word(&self) -> &[State] {
        &self.word
    }

    pub fn into_word(self) -> Vec<State> {
        self.word
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Length of the shortest period.
    pub fn primitive_period(&self) -> usize {
        let n = self.word.len();
        (1..=n)
            .find(|&p| n % p == 0 && (p..n).all(|i| self.word[i] == self.word[i - p]))
            .unwrap_or(n)
    }

    pub fn primitive_root(&self) -> &[State] {
        &self.word[..self.primitive_period()]
    }

    /// Cyclic rotation: cell `z` of the result is cell `z + k` of `self`.
    pub fn rotate(&self, k: isize) -> Self {
        let n = self.word.len() as isize;
        let word = (0..n)
            .map(|z| self.word[(z + k).rem_euclid(n) as usize])
            .collect();
        Self::from_parts(self.states, word)
    }

    /// Spatial shift with `shifted(x)_z = x_{z-s}`.
    pub fn shifted(&self, s: i64) -> Self {
        self.rotate(-(s as isize))
    }

    /// Mirror image `(V x)_z = x_{-z}`.
    pub fn mirrored(&self) -> Self {
        let n = self.word.len();
        let word = (0..n).map(|z| self.word[(n - z) % n]).collect();
        Self::from_parts(self.states, word)
    }

    /// The same configuration written with a period `k` times longer.
    pub fn replicate(&self, k: usize) -> Self {
        let mut word = Vec::with_capacity(self.word.len() * k.max(1));
        for _ in 0..k.max(1) {
            word.extend_from_slice(&self.word);
        }
        Self::from_parts(self.states, word)
    }

    /// Every word of length `len` over `states` symbols, in lexicographic order.
    pub fn all_of_length(states: usize, len: usize) -> impl Iterator<Item = PeriodicConfig> {
        let total = (states as u64).checked_pow(len as u32).unwrap_or(u64::MAX);
        (0..total).map(move |mut idx| {
            let mut word = vec![0 as State; len];
            for cell in word.iter_mut().rev() {
                *cell = (idx % states as u64) as State;
                idx /= states as u64;
            }
            PeriodicConfig::from_parts(states, word)
        })
    }

    /// Every word of length `1..=max_len`, shortest first.
    pub fn all_up_to(states: usize, max_len: usize) -> impl Iterator<Item = PeriodicConfig> {
        (1..=max_len).flat_map(move |len| Self::all_of_length(states, len))
    }
}

impl PartialEq for PeriodicConfig {
    fn eq(&self, other: &Self) -> bool {
        self.states == other.states && self.primitive_root() == other.primitive_root()
    }
}

impl Eq for PeriodicConfig {}

impl Hash for PeriodicConfig {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.states.hash(state);
        self.primitive_root().hash(state);
    }
}

/// Config literal `L : s0 s1 ... s_{L-1}`.
impl fmt::Display for PeriodicConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} :", self.word.len())?;
        for s in &self.word {
            write!(f, " {s}")?;
        }
        Ok(())
    }
}
