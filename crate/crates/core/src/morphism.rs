use std::collections::HashMap;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::automaton::{decode_index, pow_u128, Automaton, State, MATERIALIZE_LIMIT};
use crate::error::{Error, Result};

/// Neighborhood count above which map checks fall back to sampling.
pub const CHECK_LIMIT: u128 = 1 << 26;
const CHECK_SAMPLES: usize = 1 << 16;
const NONE: State = State::MAX;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MapRole {
    Injection,
    Surjection,
    Bijection,
}

/// A total map between state sets.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct StateMap {
    source: usize,
    target: usize,
    table: Vec<State>,
    role: MapRole,
}

impl StateMap {
    pub fn new(source: usize, target: usize, table: Vec<State>, role: MapRole) -> Result<Self> {
        if table.len() != source {
            return Err(Error::MapShape {
                source_count: table.len(),
                target_count: target,
                expected_source: source,
                expected_target: target,
            });
        }
        if let Some(&bad) = table.iter().find(|&&y| y as usize >= target) {
            return Err(Error::SymbolOutOfRange { symbol: bad as u64, states: target });
        }
        let map = Self { source, target, table, role };
        let (inj, surj) = (map.is_injective(), map.is_surjective());
        let ok = match role {
            MapRole::Injection => inj,
            MapRole::Surjection => surj,
            MapRole::Bijection => inj && surj,
        };
        if !ok {
            return Err(Error::RoleMismatch(format!("table does not form a {role:?}")));
        }
        Ok(map)
    }

    pub fn identity(n: usize) -> Self {
        Self { source: n, target: n, table: (0..n as State).collect(), role: MapRole::Bijection }
    }

    pub fn source(&self) -> usize {
        self.source
    }

    pub fn target(&self) -> usize {
        self.target
    }

    pub fn table(&self) -> &[State] {
        &self.table
    }

    pub fn role(&self) -> MapRole {
        self.role
    }

    pub fn apply(&self, x: State) -> State {
        self.table[x as usize]
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.target];
        self.table.iter().all(|&y| !std::mem::replace(&mut seen[y as usize], true))
    }

    pub fn is_surjective(&self) -> bool {
        let mut seen = vec![false; self.target];
        for &y in &self.table {
            seen[y as usize] = true;
        }
        seen.into_iter().all(|s| s)
    }

    /// True when every target has the same number of preimages.
    pub fn is_balanced(&self) -> bool {
        let mut counts = vec![0usize; self.target];
        for &y in &self.table {
            counts[y as usize] += 1;
        }
        counts.windows(2).all(|w| w[0] == w[1])
    }

    /// `next o self`.
    pub fn then(&self, next: &StateMap) -> Result<StateMap> {
        if next.source != self.target {
            return Err(Error::MapShape {
                source_count: next.source,
                target_count: next.target,
                expected_source: self.target,
                expected_target: next.target,
            });
        }
        let table = self.table.iter().map(|&x| next.apply(x)).collect();
        let role = match (self.role, next.role) {
            (MapRole::Bijection, r) | (r, MapRole::Bijection) => r,
            (a, b) if a == b => a,
            _ => return Err(Error::RoleMismatch("cannot compose an injection with a surjection".into())),
        };
        StateMap::new(self.source, next.target, table, role)
    }

    /// The blockwise map on words of `m` states, leftmost most significant.
    pub fn lift(&self, m: usize) -> Result<StateMap> {
        let source = pow_u128(self.source, m);
        let target = pow_u128(self.target, m);
        if target > State::MAX as u128 || source > MATERIALIZE_LIMIT {
            return Err(Error::StateOverflow);
        }
        let mut digits = vec![0; m];
        let table = (0..source as u64)
            .map(|x| {
                decode_index(x, self.source, &mut digits);
                digits.iter().fold(0u64, |acc, &d| acc * self.target as u64 + self.apply(d) as u64) as State
            })
            .collect();
        StateMap::new(source as usize, target as usize, table, self.role)
    }

    /// Inverse of an injection on its image, as a surjection-free partial map.
    pub fn preimage_sizes(&self) -> Vec<usize> {
        let mut counts = vec![0usize; self.target];
        for &y in &self.table {
            counts[y as usize] += 1;
        }
        counts
    }

    /// Parses `map k: t0 t1 ... t_{k-1}`.
    pub fn parse(literal: &str, target: usize, role: MapRole) -> Result<StateMap> {
        let bad = || Error::InvalidParameter(format!("malformed map literal {literal:?}"));
        let rest = literal.trim().strip_prefix("map").ok_or_else(bad)?;
        let (count, entries) = rest.split_once(':').ok_or_else(bad)?;
        let count: usize = count.trim().parse().map_err(|_| bad())?;
        let table: Vec<State> =
            entries.split_whitespace().map(|t| t.parse().map_err(|_| bad())).collect::<Result<_>>()?;
        if table.len() != count {
            return Err(bad());
        }
        StateMap::new(count, target, table, role)
    }
}

/// Serialized as `map k: t0 t1 ... t_{k-1}`.
impl fmt::Display for StateMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "map {}:", self.source)?;
        for y in &self.table {
            write!(f, " {y}")?;
        }
        Ok(())
    }
}

/// Outcome of a local commutation check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MapCheck {
    pub holds: bool,
    /// False when the neighborhoods were sampled rather than enumerated.
    pub exhaustive: bool,
    /// A failing neighborhood over the union of both supports, in source states.
    pub counterexample: Option<Vec<State>>,
}

/// Union of two supports with the positions of each support inside it.
struct Frame {
    k: usize,
    src_pos: Vec<usize>,
    dst_pos: Vec<usize>,
}

impl Frame {
    fn new(src: &Automaton, dst: &Automaton) -> Self {
        let mut union: Vec<isize> = src.support().iter().chain(dst.support()).copied().collect();
        union.sort_unstable();
        union.dedup();
        let pos = |a: &Automaton| {
            a.support().iter().map(|d| union.iter().position(|u| u == d).expect("in union")).collect()
        };
        Self { k: union.len(), src_pos: pos(src), dst_pos: pos(dst) }
    }
}

/// Checks `map(f_src(v)) = f_dst(map(v))` on every neighborhood `v` over
/// the source states.
fn commutes(src: &Automaton, dst: &Automaton, map: &[State]) -> MapCheck {
    let frame = Frame::new(src, dst);
    let n = src.states();
    let total = pow_u128(n, frame.k);
    let fails = |v: &[State], sv: &mut Vec<State>, dv: &mut Vec<State>| {
        sv.clear();
        sv.extend(frame.src_pos.iter().map(|&p| v[p]));
        dv.clear();
        dv.extend(frame.dst_pos.iter().map(|&p| map[v[p] as usize]));
        map[src.eval_support(sv) as usize] != dst.eval_support(dv)
    };
    if total <= CHECK_LIMIT {
        const CHUNK: u64 = 1 << 12;
        let chunks = (total as u64).div_ceil(CHUNK);
        let bad = (0..chunks).into_par_iter().find_map_first(|c| {
            let (mut v, mut sv, mut dv) = (vec![0; frame.k], Vec::new(), Vec::new());
            (c * CHUNK..((c + 1) * CHUNK).min(total as u64)).find_map(|idx| {
                decode_index(idx, n, &mut v);
                fails(&v, &mut sv, &mut dv).then(|| v.clone())
            })
        });
        MapCheck { holds: bad.is_none(), exhaustive: true, counterexample: bad }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        let (mut v, mut sv, mut dv) = (vec![0; frame.k], Vec::new(), Vec::new());
        for _ in 0..CHECK_SAMPLES {
            for x in v.iter_mut() {
                *x = rng.gen_range(0..n) as State;
            }
            if fails(&v, &mut sv, &mut dv) {
                return MapCheck { holds: false, exhaustive: false, counterexample: Some(v) };
            }
        }
        MapCheck { holds: true, exhaustive: false, counterexample: None }
    }
}

fn expect_shape(map: &StateMap, source: usize, target: usize) -> Result<()> {
    if map.source != source || map.target != target {
        return Err(Error::MapShape {
            source_count: map.source,
            target_count: map.target,
            expected_source: source,
            expected_target: target,
        });
    }
    Ok(())
}

/// `a` is the sub-automaton of `b` on the image of `iota`.
pub fn check_subautomaton(a: &Automaton, b: &Automaton, iota: &StateMap) -> Result<MapCheck> {
    if iota.role == MapRole::Surjection {
        return Err(Error::RoleMismatch("sub-automaton witness must be injective".into()));
    }
    expect_shape(iota, a.states(), b.states())?;
    Ok(commutes(a, b, &iota.table))
}

/// `a` is the quotient of `b` by `pi`.
pub fn check_quotient(a: &Automaton, b: &Automaton, pi: &StateMap) -> Result<MapCheck> {
    if pi.role == MapRole::Injection {
        return Err(Error::RoleMismatch("quotient witness must be surjective".into()));
    }
    expect_shape(pi, b.states(), a.states())?;
    Ok(commutes(b, a, &pi.table))
}

/// `a` is a quotient (by `pi`) of the restriction of `b` to `subset`.
pub fn check_mixed(a: &Automaton, b: &Automaton, subset: &[State], pi: &StateMap) -> Result<MapCheck> {
    if !is_stable(b, subset) {
        return Ok(MapCheck { holds: false, exhaustive: true, counterexample: None });
    }
    check_quotient(a, &b.restrict(subset)?, pi)
}

/// Evaluation budget shared by the searches.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    pub limit: Option<u64>,
    pub used: u64,
}

impl Budget {
    pub fn unlimited() -> Self {
        Self { limit: None, used: 0 }
    }

    pub fn limited(limit: u64) -> Self {
        Self { limit: Some(limit), used: 0 }
    }

    fn spend(&mut self, n: u64) -> bool {
        self.used += n;
        self.limit.is_none_or(|l| self.used <= l)
    }

    pub fn exceeded(&self) -> bool {
        self.limit.is_some_and(|l| self.used > l)
    }
}

/// Result of a budgeted search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Search<T> {
    Found(T),
    /// The whole space was explored without a witness.
    NoneExists,
    OutOfBudget,
}

impl<T> Search<T> {
    pub fn found(self) -> Option<T> {
        match self {
            Search::Found(t) => Some(t),
            _ => None,
        }
    }
}

/// Backtracking search for `h : src -> dst` with `h(f_src(v)) = f_dst(h(v))`.
///
/// Variables are assigned in increasing source order and values tried in
/// increasing target order, so the first solution is the lexicographically
/// least. Every neighborhood whose states are all assigned is checked once,
/// when its last state gets a value, and forces `h(f_src(v))`.
struct Engine<'a> {
    src: &'a Automaton,
    dst: &'a Automaton,
    frame: Frame,
    injective: bool,
    surjective: bool,
    map: Vec<State>,
    order: Vec<State>,
    processed: usize,
    hits: Vec<u32>,
    hit_count: usize,
    src_uniform: Vec<State>,
    dst_uniform: Vec<State>,
    budget: &'a mut Budget,
}

impl<'a> Engine<'a> {
    fn new(src: &'a Automaton, dst: &'a Automaton, injective: bool, surjective: bool, budget: &'a mut Budget) -> Self {
        let frame = Frame::new(src, dst);
        let src_uniform = (0..src.states() as State)
            .map(|x| src.eval_support(&vec![x; src.support().len()]))
            .collect();
        budget.spend(src.states() as u64);
        Self {
            src,
            dst,
            frame,
            injective,
            surjective,
            map: vec![NONE; src.states()],
            order: Vec::new(),
            processed: 0,
            hits: vec![0; dst.states()],
            hit_count: 0,
            src_uniform,
            dst_uniform: vec![NONE; dst.states()],
            budget,
        }
    }

    fn dst_uniform(&mut self, y: State) -> State {
        if self.dst_uniform[y as usize] == NONE {
            self.dst_uniform[y as usize] = self.dst.eval_support(&vec![y; self.dst.support().len()]);
            self.budget.spend(1);
        }
        self.dst_uniform[y as usize]
    }

    fn candidate_ok(&mut self, x: State, y: State) -> bool {
        if self.injective && self.hits[y as usize] > 0 {
            return false;
        }
        let ux = self.src_uniform[x as usize];
        let uy = self.dst_uniform(y);
        if ux == x {
            return uy == y;
        }
        if self.injective && uy == y {
            return false;
        }
        let mapped = self.map[ux as usize];
        mapped == NONE || mapped == uy
    }

    fn assign(&mut self, x: State, y: State) -> bool {
        if self.injective && self.hits[y as usize] > 0 {
            return false;
        }
        self.map[x as usize] = y;
        self.order.push(x);
        if self.hits[y as usize] == 0 {
            self.hit_count += 1;
        }
        self.hits[y as usize] += 1;
        true
    }

    fn undo(&mut self, mark: usize) {
        while self.order.len() > mark {
            let x = self.order.pop().expect("non-empty");
            let y = std::mem::replace(&mut self.map[x as usize], NONE);
            self.hits[y as usize] -= 1;
            if self.hits[y as usize] == 0 {
                self.hit_count -= 1;
            }
        }
        self.processed = self.processed.min(mark);
    }

    /// Checks all neighborhoods made complete by the pending assignments.
    /// Returns `None` when the budget ran out.
    fn propagate(&mut self) -> Option<bool> {
        let k = self.frame.k;
        let mut ranks = vec![0usize; k];
        let mut sv = Vec::with_capacity(self.frame.src_pos.len());
        let mut dv = Vec::with_capacity(self.frame.dst_pos.len());
        while self.processed < self.order.len() {
            let rho = self.processed;
            self.processed += 1;
            // the first occurrence of rank rho is at position j: earlier
            // positions range over [0, rho), later ones over [0, rho]
            for j in 0..k {
                if j > 0 && rho == 0 {
                    break;
                }
                ranks.iter_mut().for_each(|r| *r = 0);
                ranks[j] = rho;
                loop {
                    if !self.budget.spend(1) {
                        return None;
                    }
                    sv.clear();
                    sv.extend(self.frame.src_pos.iter().map(|&p| self.order[ranks[p]]));
                    dv.clear();
                    dv.extend(self.frame.dst_pos.iter().map(|&p| self.map[self.order[ranks[p]] as usize]));
                    let out_s = self.src.eval_support(&sv);
                    let out_d = self.dst.eval_support(&dv);
                    match self.map[out_s as usize] {
                        NONE => {
                            if !self.assign(out_s, out_d) {
                                return Some(false);
                            }
                        }
                        y if y != out_d => return Some(false),
                        _ => {}
                    }
                    let mut carried = true;
                    for p in (0..k).rev().filter(|&p| p != j) {
                        let bound = if p < j { rho } else { rho + 1 };
                        ranks[p] += 1;
                        if ranks[p] < bound {
                            carried = false;
                            break;
                        }
                        ranks[p] = 0;
                    }
                    if carried {
                        break;
                    }
                }
            }
        }
        if self.surjective {
            let free = self.map.iter().filter(|&&y| y == NONE).count();
            if free < self.dst.states() - self.hit_count {
                return Some(false);
            }
        }
        Some(true)
    }

    fn first_unassigned(&self) -> Option<State> {
        self.map.iter().position(|&y| y == NONE).map(|x| x as State)
    }

    fn run(mut self) -> Search<Vec<State>> {
        if self.injective && self.src.states() > self.dst.states()
            || self.surjective && self.src.states() < self.dst.states()
        {
            return Search::NoneExists;
        }
        if self.frame.k == 0 {
            let (qs, qd) = (self.src.eval_support(&[]), self.dst.eval_support(&[]));
            if !self.candidate_ok(qs, qd) {
                return Search::NoneExists;
            }
            self.assign(qs, qd);
        }
        let n_dst = self.dst.states() as State;
        let mut stack: Vec<(State, State, usize)> = Vec::new();
        let mut descend = true;
        loop {
            if descend {
                match self.first_unassigned() {
                    // a total map that misses targets falls through to the next candidate
                    None if self.surjective && self.hit_count < self.dst.states() => {}
                    None => return Search::Found(self.map),
                    Some(x) => stack.push((x, 0, self.order.len())),
                }
            }
            let Some(&(x, next, mark)) = stack.last() else {
                return Search::NoneExists;
            };
            self.undo(mark);
            let mut y = next;
            let mut advanced = false;
            while y < n_dst {
                let cand = y;
                y += 1;
                if !self.candidate_ok(x, cand) {
                    continue;
                }
                self.assign(x, cand);
                match self.propagate() {
                    None => return Search::OutOfBudget,
                    Some(true) => {
                        advanced = true;
                        break;
                    }
                    Some(false) => self.undo(mark),
                }
            }
            if self.budget.exceeded() {
                return Search::OutOfBudget;
            }
            if advanced {
                stack.last_mut().expect("non-empty").1 = y;
                descend = true;
            } else {
                stack.pop();
                descend = false;
            }
        }
    }
}

fn search_map(src: &Automaton, dst: &Automaton, injective: bool, budget: &mut Budget) -> Search<Vec<State>> {
    Engine::new(src, dst, injective, !injective, budget).run()
}

/// Lexicographically least injection realizing `a` as a sub-automaton of `b`.
pub fn find_subautomaton(a: &Automaton, b: &Automaton) -> Result<Option<StateMap>> {
    Ok(find_subautomaton_within(a, b, &mut Budget::unlimited()).found())
}

pub fn find_subautomaton_within(a: &Automaton, b: &Automaton, budget: &mut Budget) -> Search<StateMap> {
    match search_map(a, b, true, budget) {
        Search::Found(t) => Search::Found(StateMap::new(a.states(), b.states(), t, MapRole::Injection).expect("engine output")),
        Search::NoneExists => Search::NoneExists,
        Search::OutOfBudget => Search::OutOfBudget,
    }
}

/// Lexicographically least surjection realizing `a` as a quotient of `b`.
pub fn find_quotient(a: &Automaton, b: &Automaton) -> Result<Option<StateMap>> {
    Ok(find_quotient_within(a, b, &mut Budget::unlimited()).found())
}

pub fn find_quotient_within(a: &Automaton, b: &Automaton, budget: &mut Budget) -> Search<StateMap> {
    match search_map(b, a, false, budget) {
        Search::Found(t) => Search::Found(StateMap::new(b.states(), a.states(), t, MapRole::Surjection).expect("engine output")),
        Search::NoneExists => Search::NoneExists,
        Search::OutOfBudget => Search::OutOfBudget,
    }
}

/// A bijection conjugating `a` to `b`, if any.
pub fn find_isomorphism(a: &Automaton, b: &Automaton) -> Result<Option<StateMap>> {
    if a.states() != b.states() {
        return Ok(None);
    }
    Ok(find_subautomaton(a, b)?.map(|m| StateMap { role: MapRole::Bijection, ..m }))
}

/// Witness of `a` being a quotient of a sub-automaton of `b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MixedWitness {
    /// Stable subset of `b`, ascending.
    pub subset: Vec<State>,
    /// Surjection from the subset (indexed by position) onto `a`.
    pub map: StateMap,
}

/// Tries the stable subsets of `b` in increasing bitmask order.
pub fn find_mixed(a: &Automaton, b: &Automaton) -> Result<Option<MixedWitness>> {
    Ok(find_mixed_within(a, b, &mut Budget::unlimited())?.found())
}

pub fn find_mixed_within(a: &Automaton, b: &Automaton, budget: &mut Budget) -> Result<Search<MixedWitness>> {
    let mut subsets = StableSubsets::new(b);
    loop {
        let q = match subsets.next_within(budget) {
            Search::Found(q) => q,
            Search::NoneExists => return Ok(Search::NoneExists),
            Search::OutOfBudget => return Ok(Search::OutOfBudget),
        };
        if q.len() < a.states() {
            continue;
        }
        let restricted = b.restrict(&q)?;
        match find_quotient_within(a, &restricted, budget) {
            Search::Found(map) => return Ok(Search::Found(MixedWitness { subset: q, map })),
            Search::NoneExists => {}
            Search::OutOfBudget => return Ok(Search::OutOfBudget),
        }
    }
}

/// Whether `subset` is closed under the local rule of `b`.
pub fn is_stable(b: &Automaton, subset: &[State]) -> bool {
    let mut inside = vec![false; b.states()];
    for &s in subset {
        inside[s as usize] = true;
    }
    let closed = closure_within(b, subset, &mut Budget::unlimited());
    matches!(closed, Search::Found(c) if c.iter().all(|&s| inside[s as usize]))
}

/// Smallest stable subset containing `seed`, ascending.
pub fn closure(b: &Automaton, seed: &[State]) -> Vec<State> {
    closure_within(b, seed, &mut Budget::unlimited()).found().expect("unlimited")
}

fn closure_within(b: &Automaton, seed: &[State], budget: &mut Budget) -> Search<Vec<State>> {
    let k = b.support().len();
    let mut inside = vec![false; b.states()];
    let mut elems: Vec<State> = Vec::new();
    for &s in seed {
        if !std::mem::replace(&mut inside[s as usize], true) {
            elems.push(s);
        }
    }
    if k == 0 {
        let q = b.eval_support(&[]);
        if !inside[q as usize] {
            inside[q as usize] = true;
            elems.push(q);
        }
    }
    let mut ranks = vec![0usize; k];
    let mut vals = vec![0; k];
    let mut done = 0;
    while done < elems.len() {
        let rho = done;
        done += 1;
        for j in 0..k {
            if j > 0 && rho == 0 {
                break;
            }
            ranks.iter_mut().for_each(|r| *r = 0);
            ranks[j] = rho;
            loop {
                if !budget.spend(1) {
                    return Search::OutOfBudget;
                }
                for (v, &r) in vals.iter_mut().zip(&ranks) {
                    *v = elems[r];
                }
                let out = b.eval_support(&vals);
                if !std::mem::replace(&mut inside[out as usize], true) {
                    elems.push(out);
                }
                let mut carried = true;
                for p in (0..k).rev().filter(|&p| p != j) {
                    let bound = if p < j { rho } else { rho + 1 };
                    ranks[p] += 1;
                    if ranks[p] < bound {
                        carried = false;
                        break;
                    }
                    ranks[p] = 0;
                }
                if carried {
                    break;
                }
            }
        }
    }
    elems.sort_unstable();
    Search::Found(elems)
}

/// Non-empty stable subsets of `b` in increasing order of the bitmask
/// `sum 2^s`, computed by NextClosure.
pub struct StableSubsets<'a> {
    b: &'a Automaton,
    current: Option<Vec<bool>>,
    started: bool,
}

impl<'a> StableSubsets<'a> {
    pub fn new(b: &'a Automaton) -> Self {
        Self { b, current: None, started: false }
    }

    fn members(set: &[bool]) -> Vec<State> {
        set.iter().enumerate().filter(|(_, &x)| x).map(|(i, _)| i as State).collect()
    }

    /// The next stable subset, `NoneExists` once all have been listed.
    pub fn next_within(&mut self, budget: &mut Budget) -> Search<Vec<State>> {
        let n = self.b.states();
        if !self.started {
            let first = match closure_within(self.b, &[], budget) {
                Search::Found(c) => c,
                Search::OutOfBudget => return Search::OutOfBudget,
                Search::NoneExists => unreachable!(),
            };
            self.started = true;
            let mut set = vec![false; n];
            first.iter().for_each(|&s| set[s as usize] = true);
            self.current = Some(set);
            if !first.is_empty() {
                return Search::Found(first);
            }
        }
        let Some(cur) = self.current.as_ref() else {
            return Search::NoneExists;
        };
        let mut a = cur.clone();
        for i in 0..n {
            if a[i] {
                a[i] = false;
                continue;
            }
            let mut seed = Self::members(&a);
            seed.push(i as State);
            let closed = match closure_within(self.b, &seed, budget) {
                Search::Found(c) => c,
                Search::OutOfBudget => return Search::OutOfBudget,
                Search::NoneExists => unreachable!(),
            };
            if closed.iter().all(|&s| s as usize <= i || a[s as usize]) {
                let mut set = vec![false; n];
                closed.iter().for_each(|&s| set[s as usize] = true);
                self.current = Some(set);
                return Search::Found(closed);
            }
        }
        self.current = None;
        Search::NoneExists
    }
}

impl Iterator for StableSubsets<'_> {
    type Item = Vec<State>;

    fn next(&mut self) -> Option<Vec<State>> {
        self.next_within(&mut Budget::unlimited()).found()
    }
}

/// Largest state count accepted by the exhaustive enumerations.
pub const ENUMERATION_LIMIT: usize = 20;
/// Largest state count accepted by [`congruences`].
pub const CONGRUENCE_LIMIT: usize = 10;

/// All non-empty stable subsets of `b`, in increasing bitmask order.
pub fn stable_subsets(b: &Automaton) -> Result<Vec<Vec<State>>> {
    if b.states() > ENUMERATION_LIMIT {
        return Err(Error::EnumerationGuard { states: b.states(), limit: ENUMERATION_LIMIT });
    }
    Ok(StableSubsets::new(b).collect())
}

/// Partitions of the states compatible with the rule, as block indices in
/// restricted-growth form, listed in lexicographic order of that form.
pub fn congruences(b: &Automaton) -> Result<Vec<Vec<usize>>> {
    let n = b.states();
    if n > CONGRUENCE_LIMIT {
        return Err(Error::EnumerationGuard { states: n, limit: CONGRUENCE_LIMIT });
    }
    let b = b.materialize()?;
    let table = b.support_table().expect("materialized");
    let k = b.support().len();
    let mut out = Vec::new();
    let mut rgs = vec![0usize; n];
    let mut vals = vec![0; k];
    loop {
        let mut seen: HashMap<Vec<usize>, usize> = HashMap::new();
        let ok = (0..table.len() as u64).all(|idx| {
            decode_index(idx, n, &mut vals);
            let key: Vec<usize> = vals.iter().map(|&v| rgs[v as usize]).collect();
            let block = rgs[table[idx as usize] as usize];
            *seen.entry(key).or_insert(block) == block
        });
        if ok {
            out.push(rgs.clone());
        }
        // next restricted-growth string
        let mut i = n;
        loop {
            if i <= 1 {
                return Ok(out);
            }
            i -= 1;
            let max_prev = rgs[..i].iter().copied().max().unwrap_or(0);
            if rgs[i] <= max_prev {
                rgs[i] += 1;
                rgs[i + 1..].iter_mut().for_each(|x| *x = 0);
                break;
            }
        }
    }
}

/// The automaton induced on the blocks of a congruence given in
/// block-index form.
pub fn quotient_by(b: &Automaton, blocks: &[usize]) -> Result<Automaton> {
    if blocks.len() != b.states() {
        return Err(Error::InvalidParameter("partition length differs from the state count".into()));
    }
    let count = blocks.iter().max().map_or(0, |m| m + 1);
    let mut reps = vec![None; count];
    for (s, &blk) in blocks.iter().enumerate() {
        reps[blk].get_or_insert(s as State);
    }
    let reps: Vec<State> = reps
        .into_iter()
        .collect::<Option<_>>()
        .ok_or_else(|| Error::InvalidParameter("partition has an empty block".into()))?;
    let pi = StateMap::new(b.states(), count, blocks.iter().map(|&x| x as State).collect(), MapRole::Surjection)?;
    let mut buf = Vec::new();
    let q = Automaton::tabulate(count, b.radius(), b.support().to_vec(), |v| {
        buf.clear();
        buf.extend(v.iter().map(|&x| reps[x as usize]));
        blocks[b.eval_support(&buf) as usize] as State
    })?;
    let q = q.with_label(format!("{}/~", b.label()));
    if !check_quotient(&q, b, &pi)?.holds {
        return Err(Error::InvalidParameter("partition is not a congruence".into()));
    }
    Ok(q)
}
