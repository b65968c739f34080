use std::fmt;
use std::str::FromStr;

use crate::automaton::{pow_u128, Automaton, State, EAGER_LIMIT};
use crate::config::PeriodicConfig;
use crate::error::{Error, Result};

/// A space-time rescaling `<m, tau, T, s>`: pack `m` cells (after a mirror
/// when `tau = -1`), run `T` steps, then shift by `s`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Transform {
    pub m: usize,
    pub tau: i8,
    pub time: usize,
    pub shift: i64,
}

impl Transform {
    pub fn new(m: usize, tau: i8, time: usize, shift: i64) -> Result<Self> {
        if m == 0 || time == 0 {
            return Err(Error::InvalidParameter("m and T must be positive".into()));
        }
        if tau != 1 && tau != -1 {
            return Err(Error::InvalidParameter(format!("tau must be +1 or -1, got {tau}")));
        }
        Ok(Self { m, tau, time, shift })
    }

    pub const fn identity() -> Self {
        Self { m: 1, tau: 1, time: 1, shift: 0 }
    }

    /// `<k, 1, k, 0>`.
    pub fn grouping(k: usize) -> Result<Self> {
        Self::new(k, 1, k, 0)
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity()
    }

    pub fn mirrored(&self) -> bool {
        self.tau < 0
    }

    /// The transform equal to applying `self` and then `next`, for
    /// unmirrored transforms: `bulk(bulk(F, self), next) = bulk(F, result)`.
    pub fn then(&self, next: &Transform) -> Result<Transform> {
        if self.mirrored() || next.mirrored() {
            return Err(Error::InvalidParameter(
                "composition of mirrored transforms holds only up to relabelling".into(),
            ));
        }
        Transform::new(
            self.m * next.m,
            1,
            self.time * next.time,
            self.m as i64 * next.shift + next.time as i64 * self.shift,
        )
    }
}

impl Default for Transform {
    fn default() -> Self {
        Self::identity()
    }
}

/// Literal `m:T:s`, prefixed with `~` when mirrored.
impl fmt::Display for Transform {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.mirrored() {
            write!(f, "~")?;
        }
        write!(f, "{}:{}:{}", self.m, self.time, self.shift)
    }
}

impl FromStr for Transform {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidParameter(format!("malformed transform literal {s:?}, expected m:T:s"));
        let (tau, body) = match s.trim().strip_prefix('~') {
            Some(rest) => (-1, rest),
            None => (1, s.trim()),
        };
        let parts: Vec<&str> = body.split(':').collect();
        if parts.len() != 3 {
            return Err(bad());
        }
        let m = parts[0].parse().map_err(|_| bad())?;
        let time = parts[1].parse().map_err(|_| bad())?;
        let shift = parts[2].parse().map_err(|_| bad())?;
        Transform::new(m, tau, time, shift)
    }
}

/// A packed configuration and the factor by which the period was
/// replicated to make it divisible by `m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Packed {
    pub config: PeriodicConfig,
    pub replication: usize,
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub(crate) fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

fn packed_states(n: usize, m: usize) -> Result<usize> {
    let states = pow_u128(n, m);
    if states > State::MAX as u128 {
        return Err(Error::StateOverflow);
    }
    Ok(states as usize)
}

/// Groups `m` consecutive cells into one symbol over `n^m` states, leftmost
/// cell most significant. With `tau = -1` the configuration is mirrored first.
pub fn pack(c: &PeriodicConfig, m: usize, tau: i8) -> Result<Packed> {
    if m == 0 {
        return Err(Error::InvalidParameter("m must be positive".into()));
    }
    let n = c.states();
    let states = packed_states(n, m)?;
    let base = if tau < 0 { c.mirrored() } else { c.clone() };
    let replication = m / gcd(base.len(), m);
    let full = base.replicate(replication);
    let word: Vec<State> = full
        .word()
        .chunks(m)
        .map(|block| block.iter().fold(0u64, |acc, &x| acc * n as u64 + x as u64) as State)
        .collect();
    Ok(Packed { config: PeriodicConfig::new(states, word)?, replication })
}

/// Integer `m`-th root of `states`, if exact.
pub fn block_base(states: usize, m: usize) -> Result<usize> {
    if m == 0 {
        return Err(Error::InvalidParameter("m must be positive".into()));
    }
    let approx = (states as f64).powf(1.0 / m as f64).round() as usize;
    for n in approx.saturating_sub(1).max(1)..=approx + 1 {
        if pow_u128(n, m) == states as u128 {
            return Ok(n);
        }
    }
    Err(Error::NotPerfectPower { states, m })
}

/// Inverse of [`pack`].
pub fn unpack(c: &PeriodicConfig, m: usize, tau: i8) -> Result<PeriodicConfig> {
    let n = block_base(c.states(), m)?;
    let mut word = Vec::with_capacity(c.len() * m);
    let mut digits = vec![0; m];
    for &s in c.word() {
        crate::automaton::decode_index(s as u64, n, &mut digits);
        word.extend_from_slice(&digits);
    }
    let out = PeriodicConfig::new(n, word)?;
    Ok(if tau < 0 { out.mirrored() } else { out })
}

/// The automaton `bulk(a, t)` whose global map is
/// `pack o shift_s o G^T o unpack` (with mirrors when `tau = -1`).
///
/// The radius is the least one covering the dependency cone of a block,
/// computed from the supports. Small results are tabulated eagerly.
pub fn apply_transform(a: &Automaton, t: &Transform) -> Result<Automaton> {
    if t.is_identity() {
        return Ok(a.clone());
    }
    let (base, s) = if t.mirrored() { (a.mirror(), -t.shift) } else { (a.clone(), t.shift) };
    let n = base.states();
    let m = t.m;
    let states = packed_states(n, m)?;

    let mut cone = vec![0isize];
    for _ in 0..t.time {
        let mut next: Vec<isize> =
            cone.iter().flat_map(|&x| base.support().iter().map(move |&d| x + d)).collect();
        next.sort_unstable();
        next.dedup();
        cone = next;
    }
    let mut support: Vec<isize> = (0..m as isize)
        .flat_map(|u| cone.iter().map(move |&d| (u - s as isize + d).div_euclid(m as isize)))
        .collect();
    support.sort_unstable();
    support.dedup();
    let radius = support.iter().map(|d| d.unsigned_abs()).max().unwrap_or(0);

    let rt = base.radius() * t.time;
    let lo = -(s as isize) - rt as isize;
    let cells = m + 2 * rt;
    let time = t.time;
    let label = format!("{}<{}>", a.label(), t);
    let out = Automaton::from_fn(states, radius, support, move |w| {
        let r = radius as isize;
        let mut x = vec![0 as State; cells];
        for (i, cell) in x.iter_mut().enumerate() {
            let p = lo + i as isize;
            let block = p.div_euclid(m as isize);
            if block.abs() <= r {
                let sym = w[(block + r) as usize] as u64;
                let digit = m - 1 - p.rem_euclid(m as isize) as usize;
                *cell = ((sym / (n as u64).pow(digit as u32)) % n as u64) as State;
            }
        }
        for _ in 0..time {
            x = base.step_open(&x);
        }
        x.iter().fold(0u64, |acc, &v| acc * n as u64 + v as u64) as State
    })?;
    Ok(out.with_label(label).materialized_within(EAGER_LIMIT))
}

/// The grouped instance `A^[k] = bulk(A, <k, 1, k, 0>)`.
pub fn grouping(a: &Automaton, k: usize) -> Result<Automaton> {
    apply_transform(a, &Transform::grouping(k)?)
}

/// A transform `beta` and grouping `t` with `bulk(bulk(F, alpha), beta)`
/// equal to `F^[t]`, up to the state renaming given by [`Self::relabeling`]
/// when `alpha` is mirrored.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Normalization {
    pub beta: Transform,
    pub t: usize,
    mirror_block: Option<usize>,
}

impl Normalization {
    /// The renaming of the `n^t` states of `F^[t]`: identity when `alpha` is
    /// unmirrored, otherwise reversal of the digits inside every run of `m`
    /// consecutive cells of the block. It is an involution.
    pub fn relabeling(&self, n: usize) -> Result<Vec<State>> {
        let states = packed_states(n, self.t)?;
        let Some(m) = self.mirror_block else {
            return Ok((0..states as State).collect());
        };
        let mut digits = vec![0; self.t];
        Ok((0..states as u64)
            .map(|x| {
                crate::automaton::decode_index(x, n, &mut digits);
                for chunk in digits.chunks_mut(m) {
                    chunk.reverse();
                }
                crate::automaton::encode_index(&digits, n) as State
            })
            .collect())
    }

    pub fn is_plain(&self) -> bool {
        self.mirror_block.is_none()
    }
}

/// Normal form of one transform: for `alpha = <m, tau, T, s>`, the least
/// `t` that is a multiple of `lcm(m, T)` with `m | (t/T) s`, and
/// `beta = <t/m, tau, t/T, -tau (t/T) s / m>`.
pub fn normalize_composition(alpha: &Transform) -> Normalization {
    let base = lcm(alpha.m, alpha.time);
    let t = (1..)
        .map(|c| base * c)
        .find(|&t| ((t / alpha.time) as i64 * alpha.shift).rem_euclid(alpha.m as i64) == 0)
        .expect("c = m always works");
    let t_prime = (t / alpha.time) as i64;
    let beta = Transform {
        m: t / alpha.m,
        tau: alpha.tau,
        time: t / alpha.time,
        shift: -(alpha.tau as i64) * t_prime * alpha.shift / alpha.m as i64,
    };
    Normalization { beta, t, mirror_block: alpha.mirrored().then_some(alpha.m) }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zoo;

    fn cfg(n: usize, w: &[State]) -> PeriodicConfig {
        PeriodicConfig::new(n, w.to_vec()).unwrap()
    }

    fn same_orbits(a: &Automaton, b: &Automaton, period: usize, steps: usize) -> bool {
        PeriodicConfig::all_up_to(a.states(), period).all(|c| {
            (1..=steps).all(|k| a.iterate(&c, k).unwrap() == b.iterate(&c, k).unwrap())
        })
    }

    #[test]
    fn pack_examples() {
        let p = pack(&cfg(2, &[0, 1, 1, 0]), 2, 1).unwrap();
        assert_eq!(p.config.word(), &[1, 2]);
        assert_eq!(p.config.states(), 4);
        assert_eq!(p.replication, 1);
        let c = cfg(2, &[1, 0, 1]);
        assert_eq!(pack(&c, 1, 1).unwrap().config, c);
        assert_eq!(pack(&c, 2, 1).unwrap().replication, 2);
        assert_eq!(unpack(&pack(&c, 2, -1).unwrap().config, 2, -1).unwrap(), c);
    }

    #[test]
    fn unpack_requires_power() {
        assert!(matches!(unpack(&cfg(5, &[0]), 2, 1), Err(Error::NotPerfectPower { .. })));
    }

    #[test]
    fn literal_round_trip() {
        for lit in ["1:1:0", "~2:3:-1", "3:2:5"] {
            assert_eq!(lit.parse::<Transform>().unwrap().to_string(), lit);
        }
        assert!("2:0:0".parse::<Transform>().is_err());
        assert!("2:1".parse::<Transform>().is_err());
    }

    #[test]
    fn transform_examples() {
        let sh1 = zoo::shift(2, 1).unwrap();
        let t = apply_transform(&sh1, &Transform::new(1, 1, 2, 0).unwrap()).unwrap();
        assert!(same_orbits(&t, &zoo::shift(2, 2).unwrap(), 5, 3));
        let t = apply_transform(&sh1, &Transform::new(2, 1, 2, 0).unwrap()).unwrap();
        assert_eq!(t.states(), 4);
        assert!(same_orbits(&t, &zoo::shift(4, 1).unwrap(), 4, 3));
        let id = apply_transform(&sh1, &Transform::identity()).unwrap();
        assert!(same_orbits(&id, &sh1, 5, 2));
    }

    #[test]
    fn grouping_examples() {
        let g = grouping(&zoo::identity(2), 2).unwrap();
        assert!(same_orbits(&g, &zoo::identity(4), 4, 2));
        let z2 = zoo::additive(2).unwrap();
        let g = grouping(&z2, 2).unwrap();
        for c in PeriodicConfig::all_up_to(2, 6) {
            let p = pack(&c, 2, 1).unwrap();
            let expect = pack(&z2.iterate(&p.config_unpacked(2), 2).unwrap(), 2, 1).unwrap();
            assert_eq!(g.step(&p.config).unwrap(), expect.config);
        }
    }

    impl Packed {
        fn config_unpacked(&self, m: usize) -> PeriodicConfig {
            unpack(&self.config, m, 1).unwrap()
        }
    }

    #[test]
    fn radius_is_tight() {
        let z2 = zoo::additive(2).unwrap();
        assert_eq!(grouping(&z2, 2).unwrap().radius(), 1);
        let sh = zoo::shift(2, 1).unwrap();
        assert_eq!(apply_transform(&sh, &Transform::new(1, 1, 1, -1).unwrap()).unwrap().radius(), 0);
    }

    #[test]
    fn normalization_examples() {
        let n = normalize_composition(&Transform::identity());
        assert_eq!((n.beta, n.t), (Transform::identity(), 1));
        let n = normalize_composition(&Transform::new(2, 1, 2, 0).unwrap());
        assert_eq!((n.beta, n.t), (Transform::identity(), 2));
        let n = normalize_composition(&Transform::new(1, 1, 2, 1).unwrap());
        assert_eq!((n.beta, n.t), (Transform::new(2, 1, 1, -1).unwrap(), 2));
        let sh = zoo::shift(2, 1).unwrap();
        let twice = apply_transform(
            &apply_transform(&sh, &Transform::new(1, 1, 2, 1).unwrap()).unwrap(),
            &n.beta,
        )
        .unwrap();
        assert!(same_orbits(&twice, &grouping(&sh, 2).unwrap(), 4, 2));
    }

    #[test]
    fn then_matches_nested_application() {
        let z2 = zoo::additive(2).unwrap();
        let a = Transform::new(2, 1, 1, 1).unwrap();
        let b = Transform::new(1, 1, 2, -1).unwrap();
        let nested = apply_transform(&apply_transform(&z2, &a).unwrap(), &b).unwrap();
        let direct = apply_transform(&z2, &a.then(&b).unwrap()).unwrap();
        assert!(same_orbits(&nested, &direct, 4, 2));
    }
}
