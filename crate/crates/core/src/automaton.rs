use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::PeriodicConfig;
use crate::error::{Error, Result};
use crate::zoo::ShiftProduct;

/// State index in `0..n`.
pub type State = u32;

/// Largest rule table built on demand.
pub const MATERIALIZE_LIMIT: u128 = 1 << 24;

/// Largest table built eagerly by constructors and transforms.
pub(crate) const EAGER_LIMIT: u128 = 1 << 16;

type LazyRule = Arc<dyn Fn(&[State]) -> State + Send + Sync>;

#[derive(Clone)]
enum Rule {
    /// Indexed by the values at the support offsets, leftmost most significant.
    Table(Arc<[State]>),
    /// Evaluated on the full `2r+1` window.
    Lazy(LazyRule),
}

/// A one-dimensional cellular automaton `(S, r, f)` with `S = 0..n`.
///
/// The local rule reads the window `x_{-r}..x_r`. Each automaton also keeps
/// a sorted `support`, a set of offsets outside of which the rule is known
/// to ignore its arguments; tables are stored over the support only, and
/// enumerations in the morphism and property modules run over it.
#[derive(Clone)]
pub struct Automaton {
    states: usize,
    radius: usize,
    support: Arc<[isize]>,
    rule: Rule,
    label: String,
    shift_product: Option<ShiftProduct>,
}

/// Result of [`Automaton::minimal_neighborhood`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Neighborhood {
    pub offsets: Vec<isize>,
    /// False when the set comes from sampling and may be missing offsets.
    pub exhaustive: bool,
}

/// Smallest `(preperiod, period)` of an orbit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OrbitCycle {
    pub preperiod: usize,
    pub period: usize,
}

pub(crate) fn pow_u128(n: usize, k: usize) -> u128 {
    let mut acc: u128 = 1;
    for _ in 0..k {
        acc = acc.saturating_mul(n as u128);
    }
    acc
}

/// Writes the base-`n` digits of `idx` into `out`, most significant first.
pub(crate) fn decode_index(mut idx: u64, n: usize, out: &mut [State]) {
    for cell in out.iter_mut().rev() {
        *cell = (idx % n as u64) as State;
        idx /= n as u64;
    }
}

pub(crate) fn encode_index(vals: &[State], n: usize) -> usize {
    vals.iter().fold(0usize, |acc, &v| acc * n + v as usize)
}

fn full_support(radius: usize) -> Arc<[isize]> {
    let r = radius as isize;
    (-r..=r).collect()
}

fn minkowski(a: &[isize], b: &[isize]) -> Vec<isize> {
    let mut out: Vec<isize> = a.iter().flat_map(|&x| b.iter().map(move |&y| x + y)).collect();
    out.sort_unstable();
    out.dedup();
    out
}

impl Automaton {
    /// Builds a rule from a full table of `n^(2r+1)` entries.
    pub fn from_table(states: usize, radius: usize, table: Vec<State>) -> Result<Self> {
        Self::from_support_table(states, radius, full_support(radius).to_vec(), table)
    }

    /// Builds a rule from a table indexed over `support` only.
    pub fn from_support_table(
        states: usize,
        radius: usize,
        support: Vec<isize>,
        table: Vec<State>,
    ) -> Result<Self> {
        let support = Self::check_support(states, radius, support)?;
        let expected = pow_u128(states, support.len());
        if expected > MATERIALIZE_LIMIT {
            return Err(Error::TableTooLarge { entries: expected, limit: MATERIALIZE_LIMIT });
        }
        if table.len() as u128 != expected {
            return Err(Error::TableLength { expected: expected as usize, actual: table.len() });
        }
        if let Some(&bad) = table.iter().find(|&&s| s as usize >= states) {
            return Err(Error::SymbolOutOfRange { symbol: bad as u64, states });
        }
        Ok(Self {
            states,
            radius,
            support,
            rule: Rule::Table(table.into()),
            label: String::new(),
            shift_product: None,
        })
    }

    /// Tabulates `f`, which receives the values at the support offsets.
    pub fn tabulate<F>(states: usize, radius: usize, support: Vec<isize>, mut f: F) -> Result<Self>
    where
        F: FnMut(&[State]) -> State,
    {
        let support = Self::check_support(states, radius, support)?;
        let k = support.len();
        let entries = pow_u128(states, k);
        if entries > MATERIALIZE_LIMIT {
            return Err(Error::TableTooLarge { entries, limit: MATERIALIZE_LIMIT });
        }
        let mut vals = vec![0; k];
        let mut table = Vec::with_capacity(entries as usize);
        for idx in 0..entries as u64 {
            decode_index(idx, states, &mut vals);
            table.push(f(&vals));
        }
        Self::from_support_table(states, radius, support.to_vec(), table)
    }

    /// A lazily evaluated rule; `f` receives the full `2r+1` window.
    pub fn from_fn<F>(states: usize, radius: usize, support: Vec<isize>, f: F) -> Result<Self>
    where
        F: Fn(&[State]) -> State + Send + Sync + 'static,
    {
        let support = Self::check_support(states, radius, support)?;
        Ok(Self {
            states,
            radius,
            support,
            rule: Rule::Lazy(Arc::new(f)),
            label: String::new(),
            shift_product: None,
        })
    }

    fn check_support(states: usize, radius: usize, mut support: Vec<isize>) -> Result<Arc<[isize]>> {
        if states == 0 || states > State::MAX as usize {
            return Err(Error::InvalidParameter(format!("state count {states} out of range")));
        }
        support.sort_unstable();
        support.dedup();
        let r = radius as isize;
        if support.iter().any(|&d| d < -r || d > r) {
            return Err(Error::InvalidParameter(format!(
                "support {support:?} exceeds radius {radius}"
            )));
        }
        Ok(support.into())
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub(crate) fn with_shift_product(mut self, sp: ShiftProduct) -> Self {
        self.shift_product = Some(sp);
        self
    }

    pub fn states(&self) -> usize {
        self.states
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn window_len(&self) -> usize {
        2 * self.radius + 1
    }

    /// Offsets the rule may depend on (a superset of the minimal neighborhood).
    pub fn support(&self) -> &[isize] {
        &self.support
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn shift_product(&self) -> Option<&ShiftProduct> {
        self.shift_product.as_ref()
    }

    pub fn is_materialized(&self) -> bool {
        matches!(self.rule, Rule::Table(_))
    }

    /// Number of entries of the table over the support.
    pub fn support_table_len(&self) -> u128 {
        pow_u128(self.states, self.support.len())
    }

    /// Number of entries of the full `n^(2r+1)` table.
    pub fn full_table_len(&self) -> u128 {
        pow_u128(self.states, self.window_len())
    }

    pub fn support_table(&self) -> Option<&[State]> {
        match &self.rule {
            Rule::Table(t) => Some(t),
            Rule::Lazy(_) => None,
        }
    }

    /// Applies the local rule to a full window `x_{-r}..x_r`.
    pub fn eval(&self, window: &[State]) -> State {
        debug_assert_eq!(window.len(), self.window_len());
        match &self.rule {
            Rule::Table(t) => {
                let r = self.radius as isize;
                let idx = self
                    .support
                    .iter()
                    .fold(0usize, |acc, &d| acc * self.states + window[(d + r) as usize] as usize);
                t[idx]
            }
            Rule::Lazy(f) => f(window),
        }
    }

    /// Applies the local rule given only the values at the support offsets.
    pub fn eval_support(&self, vals: &[State]) -> State {
        debug_assert_eq!(vals.len(), self.support.len());
        match &self.rule {
            Rule::Table(t) => t[encode_index(vals, self.states)],
            Rule::Lazy(f) => {
                let mut window = vec![0; self.window_len()];
                let r = self.radius as isize;
                for (&d, &v) in self.support.iter().zip(vals) {
                    window[(d + r) as usize] = v;
                }
                f(&window)
            }
        }
    }

    /// Returns a table-backed copy (up to [`MATERIALIZE_LIMIT`] entries).
    pub fn materialize(&self) -> Result<Automaton> {
        if self.is_materialized() {
            return Ok(self.clone());
        }
        let mut out = Self::tabulate(self.states, self.radius, self.support.to_vec(), |v| {
            self.eval_support(v)
        })?;
        out.label = self.label.clone();
        out.shift_product = self.shift_product.clone();
        Ok(out)
    }

    /// Materializes when the support table has at most `limit` entries.
    pub fn materialized_within(self, limit: u128) -> Automaton {
        if !self.is_materialized() && self.support_table_len() <= limit {
            self.materialize().unwrap_or(self)
        } else {
            self
        }
    }

    /// The full table of `n^(2r+1)` entries in neighborhood-index order.
    pub fn full_table(&self) -> Result<Vec<State>> {
        let entries = self.full_table_len();
        if entries > MATERIALIZE_LIMIT {
            return Err(Error::TableTooLarge { entries, limit: MATERIALIZE_LIMIT });
        }
        let mut window = vec![0; self.window_len()];
        Ok((0..entries as u64)
            .map(|idx| {
                decode_index(idx, self.states, &mut window);
                self.eval(&window)
            })
            .collect())
    }

    fn check_config(&self, c: &PeriodicConfig) -> Result<()> {
        if c.states() != self.states {
            return Err(Error::StateMismatch { automaton: self.states, config: c.states() });
        }
        Ok(())
    }

    /// One application of the global map on a cyclic word.
    pub fn step_word(&self, word: &[State]) -> Vec<State> {
        let len = word.len() as isize;
        let r = self.radius as isize;
        match &self.rule {
            Rule::Table(t) => (0..len)
                .map(|z| {
                    let idx = self.support.iter().fold(0usize, |acc, &d| {
                        acc * self.states + word[(z + d).rem_euclid(len) as usize] as usize
                    });
                    t[idx]
                })
                .collect(),
            Rule::Lazy(f) => {
                let mut window = vec![0; self.window_len()];
                (0..len)
                    .map(|z| {
                        for (j, cell) in window.iter_mut().enumerate() {
                            *cell = word[(z + j as isize - r).rem_euclid(len) as usize];
                        }
                        f(&window)
                    })
                    .collect()
            }
        }
    }

    /// One application on a finite word; the result is `2r` cells shorter.
    pub fn step_open(&self, word: &[State]) -> Vec<State> {
        let w = self.window_len();
        if word.len() < w {
            return Vec::new();
        }
        (0..=word.len() - w).map(|i| self.eval(&word[i..i + w])).collect()
    }

    pub fn step(&self, c: &PeriodicConfig) -> Result<PeriodicConfig> {
        self.check_config(c)?;
        Ok(PeriodicConfig::from_parts(self.states, self.step_word(c.word())))
    }

    pub fn iterate(&self, c: &PeriodicConfig, t: usize) -> Result<PeriodicConfig> {
        self.check_config(c)?;
        let mut word = c.word().to_vec();
        for _ in 0..t {
            word = self.step_word(&word);
        }
        Ok(PeriodicConfig::from_parts(self.states, word))
    }

    /// The automaton `A^t` of radius `r*t`.
    pub fn power(&self, t: usize) -> Result<Automaton> {
        if t == 0 {
            return Err(Error::InvalidParameter("power requires t >= 1".into()));
        }
        if t == 1 {
            return Ok(self.clone());
        }
        let mut support = vec![0isize];
        for _ in 0..t {
            support = minkowski(&support, &self.support);
        }
        let base = self.clone();
        let out = Self::from_fn(self.states, self.radius * t, support, move |w| {
            let mut cur = w.to_vec();
            for _ in 0..t {
                cur = base.step_open(&cur);
            }
            cur[0]
        })?;
        Ok(out
            .with_label(format!("{}^{}", self.label, t))
            .materialized_within(EAGER_LIMIT))
    }

    /// Cartesian product; state `(i_a, i_b)` is encoded as `i_a * n_b + i_b`.
    pub fn product(&self, other: &Automaton) -> Result<Automaton> {
        let states = self
            .states
            .checked_mul(other.states)
            .filter(|&s| s <= State::MAX as usize)
            .ok_or(Error::StateOverflow)?;
        let radius = self.radius.max(other.radius);
        let mut support: Vec<isize> = self.support.iter().chain(other.support.iter()).copied().collect();
        support.sort_unstable();
        support.dedup();
        let (a, b) = (self.clone(), other.clone());
        let nb = other.states as State;
        let out = Self::from_fn(states, radius, support, move |w| {
            let wa: Vec<State> = w[radius - a.radius..=radius + a.radius].iter().map(|&s| s / nb).collect();
            let wb: Vec<State> = w[radius - b.radius..=radius + b.radius].iter().map(|&s| s % nb).collect();
            a.eval(&wa) * nb + b.eval(&wb)
        })?;
        Ok(out
            .with_label(format!("({} x {})", self.label, other.label))
            .materialized_within(EAGER_LIMIT))
    }

    /// The same rule read with a larger radius.
    pub fn canonicalize_radius(&self, r_new: usize) -> Result<Automaton> {
        if r_new < self.radius {
            return Err(Error::RadiusTooSmall { requested: r_new, current: self.radius });
        }
        if r_new == self.radius {
            return Ok(self.clone());
        }
        let mut out = self.clone();
        out.radius = r_new;
        if let Rule::Lazy(f) = &self.rule {
            let f = f.clone();
            let (lo, hi) = (r_new - self.radius, r_new + self.radius);
            out.rule = Rule::Lazy(Arc::new(move |w: &[State]| f(&w[lo..=hi])));
        }
        Ok(out)
    }

    /// The mirrored automaton `f'(x_{-r}..x_r) = f(x_r..x_{-r})`.
    pub fn mirror(&self) -> Automaton {
        let support: Vec<isize> = self.support.iter().rev().map(|&d| -d).collect();
        let rule = match &self.rule {
            Rule::Table(t) => {
                let k = self.support.len();
                let mut vals = vec![0; k];
                let table: Vec<State> = (0..t.len() as u64)
                    .map(|idx| {
                        decode_index(idx, self.states, &mut vals);
                        vals.reverse();
                        t[encode_index(&vals, self.states)]
                    })
                    .collect();
                Rule::Table(table.into())
            }
            Rule::Lazy(f) => {
                let f = f.clone();
                Rule::Lazy(Arc::new(move |w: &[State]| {
                    let rev: Vec<State> = w.iter().rev().copied().collect();
                    f(&rev)
                }))
            }
        };
        Automaton {
            states: self.states,
            radius: self.radius,
            support: support.into(),
            rule,
            label: format!("mirror({})", self.label),
            shift_product: None,
        }
    }

    /// Smallest `(p, q)` with `G^(p+q)(c) = G^p(c)`, or `None` if it is not
    /// reached within `t_max` steps.
    pub fn orbit_cycle(&self, c: &PeriodicConfig, t_max: usize) -> Result<Option<OrbitCycle>> {
        self.check_config(c)?;
        let mut seen: HashMap<Vec<State>, usize> = HashMap::new();
        let mut word = c.word().to_vec();
        for i in 0..=t_max {
            if let Some(&p) = seen.get(&word) {
                return Ok(Some(OrbitCycle { preperiod: p, period: i - p }));
            }
            if i == t_max {
                break;
            }
            let next = self.step_word(&word);
            seen.insert(std::mem::replace(&mut word, next), i);
        }
        Ok(None)
    }

    /// Offsets on which the rule effectively depends, by an exhaustive scan
    /// of neighborhood pairs differing in one cell.
    pub fn minimal_neighborhood(&self) -> Result<Neighborhood> {
        let table_owner;
        let table = match self.support_table() {
            Some(t) => t,
            None => {
                table_owner = self.materialize()?;
                table_owner.support_table().expect("materialized")
            }
        };
        let k = self.support.len();
        let n = self.states;
        let mut offsets = Vec::new();
        for i in 0..k {
            let weight = pow_u128(n, k - 1 - i) as usize;
            let depends = (0..table.len()).any(|idx| {
                let digit = (idx / weight) % n;
                digit != 0 && table[idx] != table[idx - digit * weight]
            });
            if depends {
                offsets.push(self.support[i]);
            }
        }
        Ok(Neighborhood { offsets, exhaustive: true })
    }

    /// Sampling variant of [`Self::minimal_neighborhood`] for huge rules.
    pub fn minimal_neighborhood_sampled(&self, samples: usize, seed: u64) -> Neighborhood {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let k = self.support.len();
        let mut found = vec![false; k];
        let mut vals = vec![0; k];
        if self.states > 1 {
            for _ in 0..samples {
                for v in vals.iter_mut() {
                    *v = rng.gen_range(0..self.states) as State;
                }
                let i = rng.gen_range(0..k.max(1));
                if k == 0 || found[i] {
                    continue;
                }
                let before = self.eval_support(&vals);
                let old = vals[i];
                vals[i] = (old + rng.gen_range(1..self.states) as State) % self.states as State;
                found[i] = self.eval_support(&vals) != before;
            }
        }
        Neighborhood {
            offsets: self.support.iter().zip(&found).filter(|(_, &f)| f).map(|(&d, _)| d).collect(),
            exhaustive: false,
        }
    }

    /// Same rule with the support shrunk to the minimal neighborhood.
    pub fn compact(&self) -> Result<Automaton> {
        let nb = self.minimal_neighborhood()?;
        if nb.offsets.len() == self.support.len() {
            return Ok(self.clone());
        }
        let pos: Vec<usize> = nb
            .offsets
            .iter()
            .map(|d| self.support.iter().position(|e| e == d).expect("subset"))
            .collect();
        let k = self.support.len();
        let mut out = Self::tabulate(self.states, self.radius, nb.offsets.clone(), |v| {
            let mut full = vec![0; k];
            for (&p, &x) in pos.iter().zip(v) {
                full[p] = x;
            }
            self.eval_support(&full)
        })?;
        out.label = self.label.clone();
        out.shift_product = self.shift_product.clone();
        Ok(out)
    }

    /// Restriction to a stable subset, relabelled `subset[i] -> i`.
    ///
    /// Tabulated restrictions are checked for stability; lazy ones map
    /// outputs that leave the subset to 0.
    pub fn restrict(&self, subset: &[State]) -> Result<Automaton> {
        if subset.is_empty() {
            return Err(Error::InvalidParameter("empty subset".into()));
        }
        let mut index = vec![State::MAX; self.states];
        for (i, &s) in subset.iter().enumerate() {
            if s as usize >= self.states || index[s as usize] != State::MAX {
                return Err(Error::InvalidParameter(format!("bad subset element {s}")));
            }
            index[s as usize] = i as State;
        }
        let q = subset.len();
        let sub: Arc<[State]> = subset.into();
        if pow_u128(q, self.support.len()) <= MATERIALIZE_LIMIT {
            let mut lifted = vec![0; self.support.len()];
            let mut unstable = false;
            let out = Self::tabulate(q, self.radius, self.support.to_vec(), |v| {
                for (l, &x) in lifted.iter_mut().zip(v) {
                    *l = sub[x as usize];
                }
                let y = index[self.eval_support(&lifted) as usize];
                if y == State::MAX {
                    unstable = true;
                    0
                } else {
                    y
                }
            })?;
            if unstable {
                return Err(Error::InvalidParameter("subset is not stable".into()));
            }
            return Ok(out.with_label(format!("{}|{:?}", self.label, subset)));
        }
        let base = self.clone();
        let out = Self::from_fn(q, self.radius, self.support.to_vec(), move |w| {
            let lifted: Vec<State> = w.iter().map(|&x| sub[x as usize]).collect();
            match index[base.eval(&lifted) as usize] {
                State::MAX => 0,
                y => y,
            }
        })?;
        Ok(out.with_label(format!("{}|{:?}", self.label, subset)))
    }

    /// The isomorphic automaton with state `x` renamed `perm[x]`.
    pub fn relabel(&self, perm: &[State]) -> Result<Automaton> {
        let n = self.states;
        let mut inv = vec![State::MAX; n];
        if perm.len() != n {
            return Err(Error::InvalidParameter("permutation length".into()));
        }
        for (x, &y) in perm.iter().enumerate() {
            if y as usize >= n || inv[y as usize] != State::MAX {
                return Err(Error::InvalidParameter("not a permutation".into()));
            }
            inv[y as usize] = x as State;
        }
        let base = self.clone();
        let perm: Vec<State> = perm.to_vec();
        let out = Self::from_fn(n, self.radius, self.support.to_vec(), move |w| {
            let pre: Vec<State> = w.iter().map(|&x| inv[x as usize]).collect();
            perm[base.eval(&pre) as usize]
        })?;
        Ok(out.with_label(self.label.clone()).materialized_within(MATERIALIZE_LIMIT))
    }
}

impl fmt::Debug for Automaton {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Automaton")
            .field("label", &self.label)
            .field("states", &self.states)
            .field("radius", &self.radius)
            .field("support", &self.support)
            .field("materialized", &self.is_materialized())
            .finish()
    }
}
