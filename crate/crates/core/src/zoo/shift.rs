use std::fmt;

use num_rational::Ratio;

use crate::automaton::{Automaton, State, EAGER_LIMIT};
use crate::error::{Error, Result};

/// A product of shifts `prod shi n_i z_i` with pairwise distinct vectors.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ShiftProduct {
    factors: Vec<(usize, i64)>,
}

impl ShiftProduct {
    pub fn new(factors: Vec<(usize, i64)>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::InvalidParameter("shift product needs a factor".into()));
        }
        if let Some(&(n, _)) = factors.iter().find(|f| f.0 < 2) {
            return Err(Error::InvalidParameter(format!("factor with {n} states, need >= 2")));
        }
        let mut zs: Vec<i64> = factors.iter().map(|f| f.1).collect();
        zs.sort_unstable();
        if zs.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidParameter("shift vectors must be pairwise distinct".into()));
        }
        Ok(Self { factors })
    }

    /// Two-state factors with the given vectors.
    pub fn binary(vectors: &[i64]) -> Result<Self> {
        Self::new(vectors.iter().map(|&z| (2, z)).collect())
    }

    pub fn factors(&self) -> &[(usize, i64)] {
        &self.factors
    }

    pub fn vectors(&self) -> Vec<i64> {
        self.factors.iter().map(|f| f.1).collect()
    }

    pub fn states(&self) -> Result<usize> {
        self.factors
            .iter()
            .try_fold(1usize, |acc, f| acc.checked_mul(f.0))
            .filter(|&s| s <= State::MAX as usize)
            .ok_or(Error::StateOverflow)
    }

    /// The same vectors with every factor on two states.
    pub fn canonical(&self) -> ShiftProduct {
        ShiftProduct { factors: self.factors.iter().map(|f| (2, f.1)).collect() }
    }

    /// Vectors mapped by `z -> t z + c`.
    pub fn rescaled(&self, t: i64, c: i64) -> Result<ShiftProduct> {
        ShiftProduct::new(self.factors.iter().map(|&(n, z)| (n, t * z + c)).collect())
    }
}

impl fmt::Display for ShiftProduct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.factors.iter().map(|(n, z)| format!("shi{n}[{z}]")).collect();
        write!(f, "{}", parts.join(" x "))
    }
}

/// Parses the display form `shi2[0] x shi3[-1]`.
impl std::str::FromStr for ShiftProduct {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidParameter(format!("malformed shift product {s:?}"));
        let factors = s
            .split(" x ")
            .map(|f| {
                let body = f.trim().strip_prefix("shi").and_then(|b| b.strip_suffix(']')).ok_or_else(bad)?;
                let (n, z) = body.split_once('[').ok_or_else(bad)?;
                Ok((n.parse().map_err(|_| bad())?, z.parse().map_err(|_| bad())?))
            })
            .collect::<Result<Vec<_>>>()?;
        ShiftProduct::new(factors)
    }
}

/// The product automaton; the state of factor `i` is digit `i` of the
/// mixed-radix state index, first factor most significant.
pub fn shift_product(sp: &ShiftProduct) -> Result<Automaton> {
    let states = sp.states()?;
    let radius = sp.factors.iter().map(|f| f.1.unsigned_abs() as usize).max().unwrap_or(0);
    let mut support: Vec<isize> = sp.factors.iter().map(|f| -f.1 as isize).collect();
    support.sort_unstable();
    let k = sp.factors.len();
    let mut weights = vec![1u64; k];
    for i in (0..k.saturating_sub(1)).rev() {
        weights[i] = weights[i + 1] * sp.factors[i + 1].0 as u64;
    }
    let pos: Vec<usize> = sp
        .factors
        .iter()
        .map(|f| support.iter().position(|&d| d == -f.1 as isize).expect("present"))
        .collect();
    let factors = sp.factors.clone();
    let digit = move |vals: &[State]| -> State {
        (0..k)
            .map(|i| (vals[pos[i]] as u64 / weights[i]) % factors[i].0 as u64 * weights[i])
            .sum::<u64>() as State
    };
    let r = radius as isize;
    let sup = support.clone();
    let out = Automaton::from_fn(states, radius, support, move |w| {
        let vals: Vec<State> = sup.iter().map(|&d| w[(d + r) as usize]).collect();
        digit(&vals)
    })?
    .materialized_within(EAGER_LIMIT);
    Ok(out.with_label(sp.to_string()).with_shift_product(sp.clone()))
}

/// `((z_3 - z_1)/(z_2 - z_1), ..., (z_a - z_1)/(z_2 - z_1))` over the sorted vectors.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CharacteristicSequence {
    pub ratios: Vec<Ratio<i64>>,
}

impl fmt::Display for CharacteristicSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.ratios.iter().map(|r| r.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

pub fn characteristic_sequence(sp: &ShiftProduct) -> Result<CharacteristicSequence> {
    let mut zs = sp.vectors();
    if zs.len() < 3 {
        return Err(Error::InvalidParameter(format!(
            "characteristic sequence needs at least 3 vectors, got {}",
            zs.len()
        )));
    }
    zs.sort_unstable();
    let d = zs[1] - zs[0];
    Ok(CharacteristicSequence { ratios: zs[2..].iter().map(|&z| Ratio::new(z - zs[0], d)).collect() })
}

/// Number of distinct vectors, which is the level of the product.
pub fn shift_product_level(sp: &ShiftProduct) -> usize {
    sp.canonical().factors.len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::PeriodicConfig;
    use crate::zoo;

    fn seq(v: &[i64]) -> Vec<Ratio<i64>> {
        characteristic_sequence(&ShiftProduct::binary(v).unwrap()).unwrap().ratios
    }

    #[test]
    fn sequences() {
        assert_eq!(seq(&[0, 1, 2]), vec![Ratio::from_integer(2)]);
        assert_eq!(seq(&[0, 1, 2, 3]), vec![Ratio::from_integer(2), Ratio::from_integer(3)]);
        assert_eq!(seq(&[0, 2, 4, 8]), vec![Ratio::from_integer(2), Ratio::from_integer(4)]);
        assert_eq!(seq(&[3, 0, 1]), vec![Ratio::from_integer(3)]);
        assert!(characteristic_sequence(&ShiftProduct::binary(&[0, 1]).unwrap()).is_err());
    }

    #[test]
    fn levels() {
        assert_eq!(shift_product_level(&ShiftProduct::binary(&[1]).unwrap()), 1);
        assert_eq!(shift_product_level(&ShiftProduct::binary(&[0, 1]).unwrap()), 2);
        assert_eq!(shift_product_level(&ShiftProduct::binary(&[0, 1, 2, 3]).unwrap()), 4);
    }

    #[test]
    fn validation() {
        assert!(ShiftProduct::binary(&[1, 1]).is_err());
        assert!(ShiftProduct::new(vec![(1, 0)]).is_err());
        assert!(ShiftProduct::new(vec![]).is_err());
    }

    #[test]
    fn single_factor_is_plain_shift() {
        let a = shift_product(&ShiftProduct::new(vec![(3, 1)]).unwrap()).unwrap();
        assert_eq!(a.full_table().unwrap(), zoo::shift(3, 1).unwrap().full_table().unwrap());
    }

    #[test]
    fn components_move_independently() {
        let sp = ShiftProduct::binary(&[1, -1]).unwrap();
        let a = shift_product(&sp).unwrap();
        // cells (0,1) (1,0): first component shifts right, second left
        let c = PeriodicConfig::new(4, vec![1, 2, 0, 0]).unwrap();
        let next = a.step(&c).unwrap();
        let first: Vec<State> = next.word().iter().map(|s| s / 2).collect();
        let second: Vec<State> = next.word().iter().map(|s| s % 2).collect();
        assert_eq!(first, vec![0, 0, 1, 0]);
        assert_eq!(second, vec![0, 0, 0, 1]);
        assert!(a.shift_product().is_some());
    }
}
