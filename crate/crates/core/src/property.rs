//! Decision procedures for global properties of one-dimensional automata.

use std::collections::{HashMap, HashSet, VecDeque};
use std::convert::Infallible;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::automaton::{decode_index, pow_u128, Automaton, State, MATERIALIZE_LIMIT};
use crate::config::PeriodicConfig;
use crate::error::{Error, Result};

/// Live subsets allowed in the surjectivity subset construction.
pub const SUBSET_BUDGET: usize = 1 << 20;
/// Largest pair graph built by [`is_injective`].
pub const PAIR_GRAPH_LIMIT: u128 = 1 << 22;
/// Largest preimage enumeration attempted by [`inverse`].
pub const INVERSE_LIMIT: u128 = 1 << 26;
const CAPTIVE_SAMPLES: usize = 1 << 18;

/// Three-way answer. `Holds` and `Fails` carry their evidence, `Unknown`
/// says where the analysis stopped.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict<H = (), F = (), U = String> {
    Holds(H),
    Fails(F),
    Unknown(U),
}

impl<H, F, U> Verdict<H, F, U> {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Holds(_))
    }

    pub fn fails(&self) -> bool {
        matches!(self, Verdict::Fails(_))
    }

    pub fn is_unknown(&self) -> bool {
        matches!(self, Verdict::Unknown(_))
    }

    pub fn status(&self) -> &'static str {
        match self {
            Verdict::Holds(_) => "holds",
            Verdict::Fails(_) => "fails",
            Verdict::Unknown(_) => "unknown",
        }
    }
}

/// The rule tabulated over the contiguous span of its support.
struct SpanTable {
    states: usize,
    lo: isize,
    width: usize,
    table: Vec<State>,
}

impl SpanTable {
    fn new(a: &Automaton, min_width: usize) -> Result<Self> {
        let n = a.states();
        let sup = a.support();
        let lo = sup.first().copied().unwrap_or(0);
        let width = sup.last().map_or(0, |hi| (hi - lo + 1) as usize).max(min_width);
        let entries = pow_u128(n, width);
        if entries > MATERIALIZE_LIMIT {
            return Err(Error::TableTooLarge { entries, limit: MATERIALIZE_LIMIT });
        }
        let (mut word, mut vals) = (vec![0; width], vec![0; sup.len()]);
        let table = (0..entries as u64)
            .map(|idx| {
                decode_index(idx, n, &mut word);
                for (v, &d) in vals.iter_mut().zip(sup) {
                    *v = word[(d - lo) as usize];
                }
                a.eval_support(&vals)
            })
            .collect();
        Ok(Self { states: n, lo, width, table })
    }

    /// Number of de Bruijn vertices, words of length `width - 1`.
    fn vertices(&self) -> usize {
        pow_u128(self.states, self.width.saturating_sub(1)) as usize
    }

    /// Image of a word under the sliding rule; its length shrinks by `width - 1`.
    fn image(&self, word: &[State]) -> Vec<State> {
        word.windows(self.width)
            .map(|w| self.table[w.iter().fold(0usize, |acc, &x| acc * self.states + x as usize)])
            .collect()
    }
}

/// True iff every state has the same number of preimages in the rule table.
pub fn is_balanced(a: &Automaton) -> Result<bool> {
    let a = a.materialize()?;
    let mut counts = vec![0u64; a.states()];
    for &s in a.support_table().expect("materialized") {
        counts[s as usize] += 1;
    }
    Ok(counts.windows(2).all(|w| w[0] == w[1]))
}

/// Decides bijectivity without a graph search when the rule is a product
/// of shifts or reads a single cell.
fn structural_bijection(a: &Automaton) -> Option<bool> {
    if a.shift_product().is_some() {
        return Some(true);
    }
    if a.support().len() != 1 {
        return None;
    }
    let mut seen = vec![false; a.states()];
    for x in 0..a.states() as State {
        seen[a.eval_support(&[x]) as usize] = true;
    }
    Some(seen.iter().all(|&b| b))
}

/// Exact surjectivity test. `Fails` carries the shortest, then
/// lexicographically least, orphan word.
pub fn is_surjective(a: &Automaton) -> Result<Verdict<(), Vec<State>>> {
    let n = a.states();
    if a.support().is_empty() {
        let q = a.eval_support(&[]);
        return Ok(match (0..n as State).find(|&y| y != q) {
            Some(y) => Verdict::Fails(vec![y]),
            None => Verdict::Holds(()),
        });
    }
    if structural_bijection(a) == Some(true) {
        return Ok(Verdict::Holds(()));
    }
    let span = SpanTable::new(a, 1)?;
    let vertices = span.vertices();
    if vertices > SUBSET_BUDGET {
        return Ok(Verdict::Unknown(format!("{vertices} de Bruijn vertices exceed the budget")));
    }
    // successor sets per (vertex, output symbol), as vertex lists
    let mut succ: Vec<Vec<u32>> = vec![Vec::new(); vertices * n];
    for u in 0..vertices {
        for x in 0..n {
            let edge = u * n + x;
            let v = edge % vertices;
            succ[u * n + span.table[edge] as usize].push(v as u32);
        }
    }
    let words = vertices.div_ceil(64);
    let full: Vec<u64> = (0..words)
        .map(|i| if (i + 1) * 64 <= vertices { u64::MAX } else { (1u64 << (vertices - i * 64)) - 1 })
        .collect();
    let mut seen: HashMap<Vec<u64>, usize> = HashMap::new();
    let mut nodes: Vec<(Vec<u64>, Option<(usize, State)>)> = vec![(full.clone(), None)];
    seen.insert(full, 0);
    let mut queue = VecDeque::from([0usize]);
    while let Some(id) = queue.pop_front() {
        for y in 0..n {
            let mut next = vec![0u64; words];
            let set = &nodes[id].0;
            for (w, &bits) in set.iter().enumerate() {
                let mut b = bits;
                while b != 0 {
                    let u = w * 64 + b.trailing_zeros() as usize;
                    b &= b - 1;
                    for &v in &succ[u * n + y] {
                        next[v as usize / 64] |= 1 << (v % 64);
                    }
                }
            }
            if next.iter().all(|&b| b == 0) {
                let mut orphan = vec![y as State];
                let mut cur = id;
                while let Some((parent, sym)) = nodes[cur].1 {
                    orphan.push(sym);
                    cur = parent;
                }
                orphan.reverse();
                return Ok(Verdict::Fails(orphan));
            }
            if !seen.contains_key(&next) {
                if nodes.len() >= SUBSET_BUDGET {
                    return Ok(Verdict::Unknown(format!("subset budget {SUBSET_BUDGET} reached")));
                }
                seen.insert(next.clone(), nodes.len());
                queue.push_back(nodes.len());
                nodes.push((next, Some((id, y as State))));
            }
        }
    }
    Ok(Verdict::Holds(()))
}

/// Two distinct periodic configurations with the same image.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Collision {
    pub left: PeriodicConfig,
    pub right: PeriodicConfig,
}

impl fmt::Display for Collision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] and [{}]", self.left, self.right)
    }
}

/// Exact injectivity (reversibility) test via the pair graph. `Fails`
/// carries a colliding pair read off a shortest cycle through an
/// off-diagonal vertex.
pub fn is_injective(a: &Automaton) -> Result<Verdict<(), Collision>> {
    let n = a.states();
    if n == 1 || structural_bijection(a) == Some(true) {
        return Ok(Verdict::Holds(()));
    }
    let span = SpanTable::new(a, 2)?;
    let nv = span.vertices();
    let pairs = (nv as u128) * (nv as u128);
    if pairs > PAIR_GRAPH_LIMIT {
        return Ok(Verdict::Unknown(format!("pair graph with {pairs} vertices exceeds the limit")));
    }
    let np = pairs as usize;
    // out-edges: (u,v) -> (u',v') labelled by (x,y) with equal outputs
    let mut out: Vec<Vec<(u32, State, State)>> = vec![Vec::new(); np];
    let mut indeg = vec![0u32; np];
    for u in 0..nv {
        for v in 0..nv {
            for x in 0..n {
                let eu = u * n + x;
                for y in 0..n {
                    let ev = v * n + y;
                    if span.table[eu] == span.table[ev] {
                        let t = (eu % nv) * nv + ev % nv;
                        out[u * nv + v].push((t as u32, x as State, y as State));
                        indeg[t] += 1;
                    }
                }
            }
        }
    }
    let mut outdeg: Vec<u32> = out.iter().map(|e| e.len() as u32).collect();
    let mut preds: Vec<Vec<u32>> = vec![Vec::new(); np];
    for (p, edges) in out.iter().enumerate() {
        for &(t, _, _) in edges {
            preds[t as usize].push(p as u32);
        }
    }
    let mut alive = vec![true; np];
    let mut queue: VecDeque<usize> = (0..np).filter(|&p| indeg[p] == 0 || outdeg[p] == 0).collect();
    while let Some(p) = queue.pop_front() {
        if !std::mem::replace(&mut alive[p], false) {
            continue;
        }
        for &(t, _, _) in &out[p] {
            let t = t as usize;
            indeg[t] -= 1;
            if alive[t] && indeg[t] == 0 {
                queue.push_back(t);
            }
        }
        for &q in &preds[p] {
            let q = q as usize;
            outdeg[q] -= 1;
            if alive[q] && outdeg[q] == 0 {
                queue.push_back(q);
            }
        }
    }
    let diagonal = |p: usize| p / nv == p % nv;
    let candidates: Vec<usize> = (0..np).filter(|&p| alive[p] && !diagonal(p)).collect();
    if candidates.is_empty() {
        return Ok(Verdict::Holds(()));
    }
    // shortest cycle through one of the first candidates
    let mut best: Option<Vec<(State, State)>> = None;
    for &start in candidates.iter().take(64) {
        let mut parent: Vec<Option<(u32, State, State)>> = vec![None; np];
        let mut visited = vec![false; np];
        let mut bfs = VecDeque::from([start]);
        visited[start] = true;
        let mut closing = None;
        'bfs: while let Some(p) = bfs.pop_front() {
            for &(t, x, y) in &out[p] {
                let t = t as usize;
                if !alive[t] {
                    continue;
                }
                if t == start {
                    closing = Some((p, x, y));
                    break 'bfs;
                }
                if !visited[t] {
                    visited[t] = true;
                    parent[t] = Some((p as u32, x, y));
                    bfs.push_back(t);
                }
            }
        }
        let Some((last, x, y)) = closing else { continue };
        let mut labels = vec![(x, y)];
        let mut cur = last;
        while cur != start {
            let (p, x, y) = parent[cur].expect("bfs tree");
            labels.push((x, y));
            cur = p as usize;
        }
        labels.reverse();
        if best.as_ref().is_none_or(|b| labels.len() < b.len()) {
            best = Some(labels);
        }
    }
    let labels = best.expect("a surviving off-diagonal vertex lies on a cycle");
    let left = PeriodicConfig::new(n, labels.iter().map(|l| l.0).collect())?;
    let right = PeriodicConfig::new(n, labels.iter().map(|l| l.1).collect())?;
    Ok(Verdict::Fails(Collision { left, right }))
}

/// Least-radius inverse rule with radius at most `r_max`, found by
/// enumerating preimage words; `None` when no radius up to `r_max` works.
pub fn inverse(a: &Automaton, r_max: usize) -> Result<Option<Automaton>> {
    if is_injective(a)?.fails() {
        return Err(Error::NotInjective);
    }
    let n = a.states();
    if a.support().is_empty() {
        return Ok((n == 1).then(|| crate::zoo::identity(1)));
    }
    let span = SpanTable::new(a, 1)?;
    let hi = span.lo + span.width as isize - 1;
    for rho in 0..=r_max {
        let r = rho as isize;
        // image cells -rho..rho read x_{lo-rho .. hi+rho}; x_0 must be inside
        let from = (span.lo - r).min(0);
        let to = (hi + r).max(0);
        let len = (to - from + 1) as usize;
        let total = pow_u128(n, len);
        if total > INVERSE_LIMIT {
            return Ok(None);
        }
        let img_len = 2 * rho + 1;
        let mut table: Vec<State> = vec![State::MAX; pow_u128(n, img_len) as usize];
        let mut word = vec![0; len];
        let skip = (span.lo - r - from) as usize;
        let center = (-from) as usize;
        let ok = (0..total as u64).all(|idx| {
            decode_index(idx, n, &mut word);
            let img = span.image(&word[skip..skip + img_len + span.width - 1]);
            let key = img.iter().fold(0usize, |acc, &y| acc * n + y as usize);
            match table[key] {
                State::MAX => {
                    table[key] = word[center];
                    true
                }
                s => s == word[center],
            }
        });
        if ok {
            for s in table.iter_mut().filter(|s| **s == State::MAX) {
                *s = 0;
            }
            let g = Automaton::from_table(n, rho, table)?.compact()?;
            return Ok(Some(g.with_label(format!("{}^-1", a.label()))));
        }
    }
    Ok(None)
}

/// True iff the rule is a bijection in its leftmost and in its rightmost
/// argument of the `2r+1` window for every fixed context.
pub fn is_lr_permutative(a: &Automaton) -> Result<bool> {
    let n = a.states();
    if n == 1 {
        return Ok(true);
    }
    let r = a.radius() as isize;
    let sup = a.support();
    let (Some(pl), Some(pr)) = (sup.iter().position(|&d| d == -r), sup.iter().position(|&d| d == r)) else {
        return Ok(false);
    };
    let a = a.materialize()?;
    let table = a.support_table().expect("materialized");
    let k = sup.len();
    let permutes = |pos: usize| {
        let stride = pow_u128(n, k - 1 - pos) as usize;
        let mut seen = vec![0usize; n];
        let mut stamp = 0;
        (0..table.len()).filter(|idx| (idx / stride) % n == 0).all(|base| {
            stamp += 1;
            (0..n).all(|x| {
                let y = table[base + x * stride] as usize;
                std::mem::replace(&mut seen[y], stamp) != stamp
            })
        })
    };
    Ok(permutes(pl) && permutes(pr))
}

/// States `q` with `f(q, ..., q) = q`.
pub fn quiescent_states(a: &Automaton) -> Vec<State> {
    let k = a.support().len();
    (0..a.states() as State).filter(|&q| a.eval_support(&vec![q; k]) == q).collect()
}

/// States `k` such that every window holding `k` at an offset of the
/// minimal neighborhood maps to `k`. A rule whose minimal neighborhood is
/// `{0}` or empty has none, since nothing can spread.
pub fn spreading_states(a: &Automaton) -> Result<Vec<State>> {
    let nb = a.minimal_neighborhood()?;
    if nb.offsets.iter().all(|&d| d == 0) {
        return Ok(Vec::new());
    }
    let n = a.states();
    let sup = a.support();
    let positions: Vec<usize> =
        nb.offsets.iter().map(|d| sup.iter().position(|s| s == d).expect("neighborhood within support")).collect();
    let k = sup.len();
    let mut vals = vec![0; k];
    let others = pow_u128(n, k - 1) as u64;
    Ok((0..n as State)
        .filter(|&kappa| {
            positions.iter().all(|&p| {
                (0..others).all(|idx| {
                    let mut rest = vec![0; k - 1];
                    decode_index(idx, n, &mut rest);
                    vals[..p].copy_from_slice(&rest[..p]);
                    vals[p] = kappa;
                    vals[p + 1..].copy_from_slice(&rest[p..]);
                    a.eval_support(&vals) == kappa
                })
            })
        })
        .collect())
}

/// Captivity: the output is always one of the window's states. Exact when
/// the support table is enumerable, otherwise a sampled check that can only
/// refute.
pub fn is_captive(a: &Automaton) -> Verdict<(), Vec<State>> {
    let n = a.states();
    if n == 1 {
        return Verdict::Holds(());
    }
    let k = a.support().len();
    let total = a.support_table_len();
    let mut vals = vec![0; k];
    if total <= MATERIALIZE_LIMIT {
        for idx in 0..total as u64 {
            decode_index(idx, n, &mut vals);
            if !vals.contains(&a.eval_support(&vals)) {
                return Verdict::Fails(vals);
            }
        }
        return Verdict::Holds(());
    }
    match captive_counterexample(a, CAPTIVE_SAMPLES, 0xca97) {
        Some(v) => Verdict::Fails(v),
        None => Verdict::Unknown(format!("no counterexample in {CAPTIVE_SAMPLES} sampled windows")),
    }
}

/// Samples support tuples over random sub-alphabets, which reach outputs
/// missing from the window far more often than uniform sampling.
pub fn captive_counterexample(a: &Automaton, samples: usize, seed: u64) -> Option<Vec<State>> {
    let n = a.states();
    let k = a.support().len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut vals = vec![0; k];
    for _ in 0..samples {
        let width = rng.gen_range(1..=n);
        let alphabet: Vec<State> = (0..width).map(|_| rng.gen_range(0..n) as State).collect();
        for v in vals.iter_mut() {
            *v = alphabet[rng.gen_range(0..width)];
        }
        if !vals.contains(&a.eval_support(&vals)) {
            return Some(vals);
        }
    }
    None
}

/// Two configurations whose orbits end in disjoint cycles.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DisjointCycles {
    pub first_start: PeriodicConfig,
    pub first_cycle: Vec<PeriodicConfig>,
    pub second_start: PeriodicConfig,
    pub second_cycle: Vec<PeriodicConfig>,
}

impl DisjointCycles {
    /// Re-checks both cycles under `a` and their disjointness.
    pub fn verify(&self, a: &Automaton, max_time: usize) -> Result<bool> {
        let closes = |start: &PeriodicConfig, cycle: &[PeriodicConfig]| -> Result<bool> {
            for (i, c) in cycle.iter().enumerate() {
                if a.step(c)? != cycle[(i + 1) % cycle.len()] {
                    return Ok(false);
                }
            }
            let mut c = start.clone();
            for _ in 0..=max_time {
                if cycle.contains(&c) {
                    return Ok(true);
                }
                c = a.step(&c)?;
            }
            Ok(false)
        };
        let disjoint = self.first_cycle.iter().all(|c| !self.second_cycle.contains(c));
        Ok(disjoint && closes(&self.first_start, &self.first_cycle)? && closes(&self.second_start, &self.second_cycle)?)
    }
}

impl fmt::Display for DisjointCycles {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |cycle: &[PeriodicConfig]| cycle.iter().map(|c| format!("[{c}]")).collect::<Vec<_>>().join(" -> ");
        write!(
            f,
            "[{}] reaches {} ; [{}] reaches {}",
            self.first_start,
            show(&self.first_cycle),
            self.second_start,
            show(&self.second_cycle)
        )
    }
}

/// Why nilpotency over periodic configurations stays open.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NilpotencyUnknown {
    /// Every tested configuration reached `fixed` within the bounds.
    ConsistentWithNilpotent { fixed: PeriodicConfig, max_period: usize, max_time: usize },
    /// Some orbit did not close within `max_time` steps.
    BoundReached { start: PeriodicConfig, max_time: usize },
    /// All orbits share one cycle of length above 1.
    CommonCycle { length: usize },
}

impl fmt::Display for NilpotencyUnknown {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::ConsistentWithNilpotent { fixed, max_period, max_time } => write!(
                f,
                "consistent-with-nilpotent: all periods <= {max_period} reach [{fixed}] within {max_time} steps"
            ),
            Self::BoundReached { start, max_time } => write!(f, "orbit of [{start}] open after {max_time} steps"),
            Self::CommonCycle { length } => write!(f, "all orbits share one cycle of length {length}"),
        }
    }
}

fn attractor(a: &Automaton, c: &PeriodicConfig, max_time: usize) -> Result<Option<Vec<PeriodicConfig>>> {
    let Some(cycle) = a.orbit_cycle(c, max_time)? else {
        return Ok(None);
    };
    let mut x = a.iterate(c, cycle.preperiod)?;
    let mut out = Vec::with_capacity(cycle.period);
    for _ in 0..cycle.period {
        out.push(x.clone());
        x = a.step(&x)?;
    }
    Ok(Some(out))
}

/// Bounded nilpotency test over all configurations of period at most
/// `max_period`. Only refutations are definite.
pub fn nilpotent_over_periodic(
    a: &Automaton,
    max_period: usize,
    max_time: usize,
) -> Result<Verdict<Infallible, DisjointCycles, NilpotencyUnknown>> {
    if max_period == 0 || max_time == 0 {
        return Err(Error::InvalidParameter("bounds must be at least 1".into()));
    }
    let mut first: Option<(PeriodicConfig, Vec<PeriodicConfig>, HashSet<PeriodicConfig>)> = None;
    let mut open = None;
    for c in PeriodicConfig::all_up_to(a.states(), max_period) {
        let Some(cycle) = attractor(a, &c, max_time)? else {
            open.get_or_insert(c);
            continue;
        };
        match &first {
            None => {
                let set = cycle.iter().cloned().collect();
                first = Some((c, cycle, set));
            }
            Some((start, fc, set)) => {
                if !set.contains(&cycle[0]) {
                    return Ok(Verdict::Fails(DisjointCycles {
                        first_start: start.clone(),
                        first_cycle: fc.clone(),
                        second_start: c,
                        second_cycle: cycle,
                    }));
                }
            }
        }
    }
    if let Some(start) = open {
        return Ok(Verdict::Unknown(NilpotencyUnknown::BoundReached { start, max_time }));
    }
    let (_, cycle, _) = first.expect("at least one configuration");
    Ok(Verdict::Unknown(if cycle.len() == 1 {
        NilpotencyUnknown::ConsistentWithNilpotent { fixed: cycle[0].clone(), max_period, max_time }
    } else {
        NilpotencyUnknown::CommonCycle { length: cycle.len() }
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zoo;

    #[test]
    fn balance_examples() {
        assert!(is_balanced(&zoo::additive(2).unwrap()).unwrap());
        assert!(!is_balanced(&zoo::delta_max(2).unwrap()).unwrap());
        assert!(is_balanced(&zoo::identity(3)).unwrap());
    }

    #[test]
    fn surjectivity_examples() {
        assert!(is_surjective(&zoo::identity(2)).unwrap().holds());
        assert!(is_surjective(&zoo::additive(3).unwrap()).unwrap().holds());
        assert_eq!(is_surjective(&zoo::delta_max(2).unwrap()).unwrap(), Verdict::Fails(vec![0, 1, 0]));
        assert_eq!(is_surjective(&zoo::constant(2, 0).unwrap()).unwrap(), Verdict::Fails(vec![1]));
    }

    #[test]
    fn injectivity_examples() {
        assert!(is_injective(&zoo::shift(2, 1).unwrap()).unwrap().holds());
        assert!(is_injective(&zoo::identity(2)).unwrap().holds());
        let z2 = zoo::additive(2).unwrap();
        let Verdict::Fails(c) = is_injective(&z2).unwrap() else { panic!("additive(2) collides") };
        assert_ne!(c.left, c.right);
        assert_eq!(z2.step(&c.left).unwrap(), z2.step(&c.right).unwrap());
    }

    #[test]
    fn inverse_examples() {
        let s = zoo::shift(2, 1).unwrap();
        let g = inverse(&s, 2).unwrap().unwrap();
        assert_eq!(g.support(), &[1]);
        assert_eq!(inverse(&zoo::identity(2), 0).unwrap().unwrap().radius(), 0);
        assert!(matches!(inverse(&zoo::additive(2).unwrap(), 2), Err(Error::NotInjective)));
    }

    #[test]
    fn permutativity_and_states() {
        for p in [2, 3, 5] {
            assert!(is_lr_permutative(&zoo::additive(p).unwrap()).unwrap());
        }
        assert!(!is_lr_permutative(&zoo::delta_max(2).unwrap()).unwrap());
        assert!(!is_lr_permutative(&zoo::identity(2).canonicalize_radius(1).unwrap()).unwrap());
        assert_eq!(quiescent_states(&zoo::additive(2).unwrap()), vec![0, 1]);
        assert_eq!(quiescent_states(&zoo::identity(2)), vec![0, 1]);
        assert_eq!(spreading_states(&zoo::delta_max(2).unwrap()).unwrap(), vec![1]);
        assert!(spreading_states(&zoo::additive(2).unwrap()).unwrap().is_empty());
        assert!(spreading_states(&zoo::identity(2)).unwrap().is_empty());
    }

    #[test]
    fn captivity() {
        assert!(is_captive(&zoo::delta_max(2).unwrap()).holds());
        assert!(is_captive(&zoo::identity(2)).holds());
        assert!(is_captive(&zoo::additive(3).unwrap()).fails());
    }

    #[test]
    fn nilpotency() {
        let v = nilpotent_over_periodic(&zoo::identity(2), 4, 16).unwrap();
        let Verdict::Fails(d) = v else { panic!("identity has two fixed points") };
        assert!(d.verify(&zoo::identity(2), 16).unwrap());
        let v = nilpotent_over_periodic(&zoo::constant(2, 0).unwrap(), 4, 16).unwrap();
        assert!(matches!(v, Verdict::Unknown(NilpotencyUnknown::ConsistentWithNilpotent { .. })));
    }
}
