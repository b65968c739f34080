use std::collections::HashMap;
use std::sync::Arc;

use crate::automaton::{pow_u128, Automaton, State, EAGER_LIMIT};
use crate::config::PeriodicConfig;
use crate::error::{Error, Result};
use crate::morphism::{MapRole, StateMap};

/// A fixed-length block code `i : S_a -> Q^L`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockCode {
    alphabet: usize,
    blocks: Vec<Vec<State>>,
}

impl BlockCode {
    /// `i(a) = 0110 psi(a)`, where `psi` lists the binary words of width
    /// `m` without `11` in lexicographic order and `m >= 2` is the least
    /// width with at least `n` such words.
    pub fn two_state(n: usize) -> Self {
        let m = (2..).find(|&m| no_double_ones(m).len() >= n).expect("Fibonacci growth");
        let blocks = no_double_ones(m)
            .into_iter()
            .take(n)
            .map(|psi| [0, 1, 1, 0].into_iter().chain(psi).collect())
            .collect();
        Self { alphabet: 2, blocks }
    }

    /// `i(a) = # u # a` over `n + 1` states, with `# = n` and `u = 0 1 .. n-1`.
    pub fn captive(n: usize) -> Self {
        let hash = n as State;
        let blocks = (0..n as State)
            .map(|a| {
                let mut b = vec![hash];
                b.extend(0..n as State);
                b.push(hash);
                b.push(a);
                b
            })
            .collect();
        Self { alphabet: n + 1, blocks }
    }

    pub fn alphabet(&self) -> usize {
        self.alphabet
    }

    pub fn block_len(&self) -> usize {
        self.blocks[0].len()
    }

    pub fn block(&self, s: State) -> &[State] {
        &self.blocks[s as usize]
    }

    /// Width of `psi` for the two-state code.
    pub fn payload_width(&self) -> usize {
        self.block_len() - 4
    }

    /// Concatenation of the blocks of `c`.
    pub fn encode_config(&self, c: &PeriodicConfig) -> PeriodicConfig {
        let word = c.word().iter().flat_map(|&s| self.block(s).iter().copied()).collect();
        PeriodicConfig::new(self.alphabet, word).expect("in range")
    }

    /// `i` as a map into the states of `bulk(cod, <L, 1, 1, 0>)`.
    pub fn injection(&self) -> Result<StateMap> {
        let target = pow_u128(self.alphabet, self.block_len());
        if target > State::MAX as u128 {
            return Err(Error::StateOverflow);
        }
        let table = self.blocks.iter().map(|b| self.key(b) as State).collect();
        StateMap::new(self.blocks.len(), target as usize, table, MapRole::Injection)
    }

    fn key(&self, block: &[State]) -> u64 {
        block.iter().fold(0u64, |acc, &x| acc * self.alphabet as u64 + x as u64)
    }
}

fn no_double_ones(m: usize) -> Vec<Vec<State>> {
    let mut out = Vec::new();
    for bits in 0u32..1 << m {
        let word: Vec<State> = (0..m).rev().map(|i| (bits >> i) & 1).collect();
        if !word.windows(2).any(|w| w == [1, 1]) {
            out.push(word);
        }
    }
    out
}

/// Rule of radius `(r+1) L`: if the blocks around the cell parse as code
/// words, emit the matching cell of `i(f_a(...))`, else `fallback(window)`.
fn block_automaton<F>(a: &Automaton, code: BlockCode, fallback: F) -> Result<Automaton>
where
    F: Fn(&[State]) -> State + Send + Sync + 'static,
{
    let len = code.block_len();
    let r = a.radius();
    let radius = (r + 1) * len;
    let lookup: HashMap<u64, State> =
        code.blocks.iter().enumerate().map(|(s, b)| (code.key(b), s as State)).collect();
    let a = a.clone();
    let code = Arc::new(code);
    let support: Vec<isize> = (-(radius as isize)..=radius as isize).collect();
    Automaton::from_fn(code.alphabet, radius, support, move |w| {
        let mut states = Vec::with_capacity(2 * r + 1);
        for phase in 0..len {
            states.clear();
            for j in 0..=2 * r {
                let start = radius + j * len - phase - r * len;
                match lookup.get(&code.key(&w[start..start + len])) {
                    Some(&s) => states.push(s),
                    None => break,
                }
            }
            if states.len() == 2 * r + 1 {
                return code.block(a.eval(&states))[phase];
            }
        }
        fallback(w)
    })
}

/// Two-state automaton conjugate to `a` on concatenations of `0110 psi(a)`;
/// windows that do not parse produce 1.
pub fn encode_two_state(a: &Automaton) -> Result<Automaton> {
    let code = BlockCode::two_state(a.states());
    Ok(block_automaton(a, code, |_| 1)?.with_label(format!("two_state({})", a.label())))
}

/// Captive automaton conjugate to `a` on concatenations of `# u # a`;
/// windows that do not parse produce their maximum, `#` being the largest.
pub fn encode_captive(a: &Automaton) -> Result<Automaton> {
    let code = BlockCode::captive(a.states());
    let out = block_automaton(a, code, |w| *w.iter().max().expect("non-empty"))?;
    Ok(out.with_label(format!("captive({})", a.label())))
}

/// `a` with an extra state `n` that overwrites every window it appears in.
pub fn encode_equipt(a: &Automaton) -> Result<Automaton> {
    let n = a.states();
    let kappa = n as State;
    let radius = a.radius().max(1);
    let inner = a.canonicalize_radius(radius)?;
    let support: Vec<isize> = (-(radius as isize)..=radius as isize).collect();
    let out = Automaton::from_fn(n + 1, radius, support, move |w| {
        if w.contains(&kappa) {
            kappa
        } else {
            inner.eval(w)
        }
    })?;
    Ok(out.materialized_within(EAGER_LIMIT).with_label(format!("equipt({})", a.label())))
}

/// `a x sigma_1 x sigma_-1`.
pub fn encode_sensi(a: &Automaton) -> Result<Automaton> {
    let out = a.product(&super::shift(2, 1)?)?.product(&super::shift(2, -1)?)?;
    Ok(out.with_label(format!("sensi({})", a.label())))
}
