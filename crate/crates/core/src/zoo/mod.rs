//! Constructors for the named automata and gadgets.

mod encodings;
mod gadgets;
mod shift;
mod tm_embed;

pub use encodings::{encode_captive, encode_equipt, encode_sensi, encode_two_state, BlockCode};
pub use gadgets::{nontransitivity_gadget, nontransitivity_quotient, parity_range_pair};
pub use shift::{characteristic_sequence, shift_product, shift_product_level, CharacteristicSequence, ShiftProduct};
pub use tm_embed::{tm_embed, TmCell, TmCodec};

use crate::automaton::{Automaton, State};
use crate::error::{Error, Result};

/// `x + y + z mod p`, radius 1.
pub fn additive(p: usize) -> Result<Automaton> {
    if p < 2 {
        return Err(Error::InvalidParameter(format!("additive rule needs p >= 2, got {p}")));
    }
    let a = Automaton::tabulate(p, 1, vec![-1, 0, 1], |v| {
        ((v[0] as usize + v[1] as usize + v[2] as usize) % p) as State
    })?;
    Ok(a.with_label(format!("Z{p}")))
}

/// The shift `sigma_z(x)_i = x_{i-z}` on `n` states, radius `|z|`.
pub fn shift(n: usize, z: i64) -> Result<Automaton> {
    if n == 0 {
        return Err(Error::InvalidParameter("shift needs at least one state".into()));
    }
    let a = Automaton::tabulate(n, z.unsigned_abs() as usize, vec![-z as isize], |v| v[0])?;
    Ok(a.with_label(if z == 0 { format!("id{n}") } else { format!("shift{n}[{z}]") }))
}

/// The identity on `n` states, radius 0.
pub fn identity(n: usize) -> Automaton {
    shift(n, 0).expect("n >= 1")
}

/// The automaton with one state.
pub fn bottom() -> Automaton {
    identity(1).with_label("bottom")
}

/// The radius-0 rule that always outputs `q`.
pub fn constant(n: usize, q: State) -> Result<Automaton> {
    if q as usize >= n {
        return Err(Error::SymbolOutOfRange { symbol: q as u64, states: n });
    }
    Ok(Automaton::from_support_table(n, 0, vec![], vec![q])?.with_label(format!("const{n}[{q}]")))
}

/// `max(x, y, z)` on `n` states, radius 1.
pub fn delta_max(n: usize) -> Result<Automaton> {
    let a = Automaton::tabulate(n, 1, vec![-1, 0, 1], |v| *v.iter().max().expect("non-empty"))?;
    Ok(a.with_label(format!("max{n}")))
}

/// Elementary rule in Wolfram numbering.
pub fn elementary(code: u8) -> Automaton {
    Automaton::tabulate(2, 1, vec![-1, 0, 1], |v| {
        let idx = (v[0] << 2 | v[1] << 1 | v[2]) as u32;
        (code as u32 >> idx) & 1
    })
    .expect("8 entries")
    .with_label(format!("W{code}"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::PeriodicConfig;

    #[test]
    fn additive_values() {
        let z2 = additive(2).unwrap();
        assert_eq!(z2.eval(&[1, 0, 1]), 0);
        assert_eq!(z2.eval(&[0, 0, 0]), 0);
        assert_eq!(additive(3).unwrap().eval(&[1, 1, 1]), 0);
        assert!(additive(1).is_err());
    }

    #[test]
    fn shift_convention() {
        let s = shift(2, 1).unwrap();
        let c = PeriodicConfig::new(2, vec![0, 1]).unwrap();
        assert_eq!(s.step(&c).unwrap().word(), &[1, 0]);
        let c = PeriodicConfig::new(3, vec![0, 1, 2, 2]).unwrap();
        let back = shift(3, -1).unwrap().step(&shift(3, 1).unwrap().step(&c).unwrap()).unwrap();
        assert_eq!(back, c);
        assert_eq!(shift(2, 0).unwrap().full_table().unwrap(), identity(2).full_table().unwrap());
    }

    #[test]
    fn elementary_matches_wolfram() {
        let r110 = elementary(110);
        let table = r110.full_table().unwrap();
        assert_eq!(table, vec![0, 1, 1, 1, 0, 1, 1, 0]);
        assert_eq!(delta_max(2).unwrap().eval(&[0, 1, 0]), 1);
    }
}
