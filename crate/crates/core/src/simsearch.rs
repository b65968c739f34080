//! Bounded search for simulations `a <= b` in the one-sided normal form
//! `bulk(a, alpha) R b^[t]`.

use std::convert::Infallible;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::automaton::{pow_u128, Automaton, State};
use crate::error::{Error, Result};
use crate::morphism::{self, Budget, MapRole, Search, StateMap};
use crate::property::{self, Verdict};
use crate::transform::{apply_transform, grouping, Transform};

/// Neighborhood count above which a cell is skipped.
pub const NEIGHBORHOOD_CUTOFF: u128 = 1 << 26;
const BATCH: usize = 16;
/// Support tables up to this size are tabulated before searching.
const SEARCH_TABLE_LIMIT: u128 = 1 << 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Relation {
    /// Sub-automaton.
    Inj,
    /// Quotient.
    Surj,
    /// Quotient of a sub-automaton.
    Mixed,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::Inj => "inj",
            Relation::Surj => "surj",
            Relation::Mixed => "mixed",
        })
    }
}

impl FromStr for Relation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "inj" => Ok(Relation::Inj),
            "surj" => Ok(Relation::Surj),
            "mixed" => Ok(Relation::Mixed),
            _ => Err(Error::InvalidParameter(format!("unknown relation {s:?}, expected inj|surj|mixed"))),
        }
    }
}

/// The box searched: `alpha = <m, tau, T, s>` with `m <= max_m`,
/// `T <= max_time`, `|s| <= max_shift`, and grouping `t <= max_group`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchBounds {
    pub max_m: usize,
    pub max_time: usize,
    pub max_shift: usize,
    pub max_group: usize,
    pub allow_mirror: bool,
    /// Rule evaluations allowed per cell before it is reported open.
    pub cell_budget: u64,
}

impl SearchBounds {
    pub fn new(max_m: usize, max_time: usize, max_shift: usize, max_group: usize, allow_mirror: bool) -> Result<Self> {
        if max_m == 0 || max_time == 0 || max_group == 0 {
            return Err(Error::InvalidParameter("m, T and group bounds must be at least 1".into()));
        }
        Ok(Self { max_m, max_time, max_shift, max_group, allow_mirror, cell_budget: 1 << 22 })
    }

    /// Everything 1, no shift.
    pub fn minimal() -> Self {
        Self::new(1, 1, 0, 1, false).expect("valid")
    }

    pub fn with_budget(mut self, cell_budget: u64) -> Self {
        self.cell_budget = cell_budget;
        self
    }

    /// Simulated-side transforms in the canonical order `(m, T, |s|, s, tau)`.
    fn transforms(&self) -> Vec<Transform> {
        let mut out = Vec::new();
        for m in 1..=self.max_m {
            for time in 1..=self.max_time {
                for abs in 0..=self.max_shift as i64 {
                    let shifts = if abs == 0 { vec![0] } else { vec![-abs, abs] };
                    for s in shifts {
                        out.push(Transform { m, tau: 1, time, shift: s });
                        if self.allow_mirror {
                            out.push(Transform { m, tau: -1, time, shift: s });
                        }
                    }
                }
            }
        }
        out
    }
}

impl Default for SearchBounds {
    fn default() -> Self {
        Self::new(2, 2, 1, 2, false).expect("valid")
    }
}

/// Evidence for `bulk(a, alpha) R b^[group_t]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimulationWitness {
    pub relation: Relation,
    pub alpha: Transform,
    pub group_t: usize,
    /// Stable subset of `b^[t]` for [`Relation::Mixed`].
    pub subset: Option<Vec<State>>,
    /// `Inj`: states of `bulk(a, alpha)` into `b^[t]`; `Surj`: states of
    /// `b^[t]` onto `bulk(a, alpha)`; `Mixed`: positions in `subset` onto
    /// `bulk(a, alpha)`.
    pub map: StateMap,
}

impl SimulationWitness {
    /// Chains `a <= b` (self) with `b <= c` into `a <= c`: transforms
    /// compose, groupings multiply, and maps are lifted blockwise.
    pub fn then(&self, next: &SimulationWitness) -> Result<SimulationWitness> {
        if self.relation != next.relation || self.relation == Relation::Mixed {
            return Err(Error::InvalidParameter("only inj or surj witnesses of one kind compose".into()));
        }
        let alpha = self.alpha.then(&next.alpha)?;
        let first = self.map.lift(next.alpha.m)?;
        let second = next.map.lift(self.group_t)?;
        let map = match self.relation {
            Relation::Inj => first.then(&second)?,
            _ => second.then(&first)?,
        };
        Ok(SimulationWitness {
            relation: self.relation,
            alpha,
            group_t: self.group_t * next.group_t,
            subset: None,
            map,
        })
    }
}

impl fmt::Display for SimulationWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "rel={} alpha={} t={}", self.relation, self.alpha, self.group_t)?;
        if let Some(q) = &self.subset {
            let q: Vec<String> = q.iter().map(|x| x.to_string()).collect();
            write!(f, " subset={}", q.join(","))?;
        }
        write!(f, " {}", self.map)
    }
}

/// Why a cell (or, for `Mixed`, one stable subset) was not searched or
/// not settled.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PruneReason {
    /// No map of the required kind exists between sets of these sizes.
    StateCount { simulated: usize, simulator: usize },
    /// The simulator side is LR-permutative, so quotients must have a
    /// state count dividing its own.
    Divisibility { simulated: usize, simulator: usize },
    /// The simulated side has a quiescent state and the simulator none.
    Quiescence,
    /// The neighborhood count exceeds [`NEIGHBORHOOD_CUTOFF`].
    Cutoff { neighborhoods: u128 },
    /// The per-cell evaluation budget ran out.
    Budget { evaluations: u64 },
    /// The automata could not be built.
    Construction(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PruneEvent {
    pub group_t: usize,
    pub alpha: Transform,
    /// Size of the stable subset concerned, for `Mixed`.
    pub subset_size: Option<usize>,
    pub reason: PruneReason,
}

impl PruneEvent {
    /// Events that leave the cell undecided rather than refuted.
    pub fn is_open(&self) -> bool {
        matches!(self.reason, PruneReason::Cutoff { .. } | PruneReason::Budget { .. } | PruneReason::Construction(_))
    }
}

impl fmt::Display for PruneEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "t={} alpha={}", self.group_t, self.alpha)?;
        if let Some(q) = self.subset_size {
            write!(f, " |Q|={q}")?;
        }
        match &self.reason {
            PruneReason::StateCount { simulated, simulator } => {
                write!(f, " state-count {simulated} vs {simulator}")
            }
            PruneReason::Divisibility { simulated, simulator } => {
                write!(f, " divisibility {simulated} does not divide {simulator}")
            }
            PruneReason::Quiescence => write!(f, " quiescence"),
            PruneReason::Cutoff { neighborhoods } => write!(f, " cutoff {neighborhoods} neighborhoods"),
            PruneReason::Budget { evaluations } => write!(f, " budget {evaluations} evaluations"),
            PruneReason::Construction(e) => write!(f, " construction {e}"),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SearchReport {
    pub cells: usize,
    /// Cells in which a map search actually ran.
    pub searched: usize,
    pub events: Vec<PruneEvent>,
}

impl SearchReport {
    /// Cells or subsets left undecided by a cutoff or budget.
    pub fn open(&self) -> usize {
        self.events.iter().filter(|e| e.is_open()).count()
    }
}

#[derive(Clone, Debug)]
pub struct SearchOutcome {
    pub verdict: Verdict<SimulationWitness, Infallible, String>,
    pub report: SearchReport,
}

/// The grouped simulator with the facts the pruning rules need.
struct Simulator {
    t: usize,
    automaton: Result<Automaton>,
    lr_permutative: bool,
    has_quiescent: bool,
    stable: Option<(Vec<Vec<State>>, bool)>,
}

impl Simulator {
    fn new(b: &Automaton, t: usize, rel: Relation, budget: u64) -> Self {
        let automaton = grouping(b, t).map(|g| g.materialized_within(SEARCH_TABLE_LIMIT));
        let (mut lr_permutative, mut has_quiescent, mut stable) = (false, false, None);
        if let Ok(g) = &automaton {
            if rel != Relation::Inj && g.support_table_len() <= SEARCH_TABLE_LIMIT {
                lr_permutative = property::is_lr_permutative(g).unwrap_or(false);
            }
            if rel == Relation::Inj {
                has_quiescent = !property::quiescent_states(g).is_empty();
            }
            if rel == Relation::Mixed {
                let mut iter = morphism::StableSubsets::new(g);
                let mut budget = Budget::limited(budget);
                let mut list = Vec::new();
                let complete = loop {
                    match iter.next_within(&mut budget) {
                        Search::Found(q) => list.push(q),
                        Search::NoneExists => break true,
                        Search::OutOfBudget => break false,
                    }
                };
                stable = Some((list, complete));
            }
        }
        Self { t, automaton, lr_permutative, has_quiescent, stable }
    }
}

struct CellResult {
    witness: Option<SimulationWitness>,
    searched: bool,
    events: Vec<PruneEvent>,
}

fn union_len(a: &Automaton, b: &Automaton) -> usize {
    let mut u: Vec<isize> = a.support().iter().chain(b.support()).copied().collect();
    u.sort_unstable();
    u.dedup();
    u.len()
}

fn run_cell(rel: Relation, a: &Automaton, sim: &Simulator, alpha: Transform, cell_budget: u64) -> CellResult {
    let mut res = CellResult { witness: None, searched: false, events: Vec::new() };
    let event = |subset_size, reason| PruneEvent { group_t: sim.t, alpha, subset_size, reason };
    let bp = match &sim.automaton {
        Ok(g) => g,
        Err(e) => {
            res.events.push(event(None, PruneReason::Construction(e.to_string())));
            return res;
        }
    };
    let na = pow_u128(a.states(), alpha.m);
    let nb = bp.states() as u128;
    // an injection into, or a surjection from, the simulator side
    if na > nb {
        res.events.push(event(None, PruneReason::StateCount { simulated: na as usize, simulator: nb as usize }));
        return res;
    }
    if rel == Relation::Surj && sim.lr_permutative && nb % na != 0 {
        res.events.push(event(None, PruneReason::Divisibility { simulated: na as usize, simulator: nb as usize }));
        return res;
    }
    let ap = match apply_transform(a, &alpha) {
        Ok(x) => x.materialized_within(SEARCH_TABLE_LIMIT),
        Err(e) => {
            res.events.push(event(None, PruneReason::Construction(e.to_string())));
            return res;
        }
    };
    if rel == Relation::Inj && !sim.has_quiescent && !property::quiescent_states(&ap).is_empty() {
        res.events.push(event(None, PruneReason::Quiescence));
        return res;
    }
    let k = union_len(&ap, bp);
    let mut budget = Budget::limited(cell_budget);
    let witness = |subset, map| SimulationWitness { relation: rel, alpha, group_t: sim.t, subset, map };
    match rel {
        Relation::Inj | Relation::Surj => {
            let source = if rel == Relation::Inj { na } else { nb };
            let count = pow_u128(source as usize, k);
            if count > NEIGHBORHOOD_CUTOFF {
                res.events.push(event(None, PruneReason::Cutoff { neighborhoods: count }));
                return res;
            }
            res.searched = true;
            let found = if rel == Relation::Inj {
                morphism::find_subautomaton_within(&ap, bp, &mut budget)
            } else {
                morphism::find_quotient_within(&ap, bp, &mut budget)
            };
            match found {
                Search::Found(map) => res.witness = Some(witness(None, map)),
                Search::NoneExists => {}
                Search::OutOfBudget => {
                    res.events.push(event(None, PruneReason::Budget { evaluations: cell_budget }))
                }
            }
        }
        Relation::Mixed => {
            let (subsets, complete) = sim.stable.as_ref().expect("computed for mixed");
            for q in subsets.iter().filter(|q| q.len() as u128 >= na) {
                let size = q.len();
                if sim.lr_permutative && size as u128 % na != 0 {
                    res.events.push(event(
                        Some(size),
                        PruneReason::Divisibility { simulated: na as usize, simulator: size },
                    ));
                    continue;
                }
                let count = pow_u128(size, k);
                if count > NEIGHBORHOOD_CUTOFF {
                    res.events.push(event(Some(size), PruneReason::Cutoff { neighborhoods: count }));
                    continue;
                }
                let restricted = match bp.restrict(q) {
                    Ok(r) => r,
                    Err(e) => {
                        res.events.push(event(Some(size), PruneReason::Construction(e.to_string())));
                        continue;
                    }
                };
                res.searched = true;
                match morphism::find_quotient_within(&ap, &restricted, &mut budget) {
                    Search::Found(map) => {
                        res.witness = Some(witness(Some(q.clone()), map));
                        return res;
                    }
                    Search::NoneExists => {}
                    Search::OutOfBudget => {
                        res.events.push(event(Some(size), PruneReason::Budget { evaluations: cell_budget }));
                        return res;
                    }
                }
            }
            if !complete {
                res.events.push(event(None, PruneReason::Budget { evaluations: cell_budget }));
            }
        }
    }
    res
}

fn search_cells(rel: Relation, a: &Automaton, b: &Automaton, bounds: &SearchBounds, alphas: &[Transform]) -> SearchOutcome {
    let mut report = SearchReport::default();
    for t in 1..=bounds.max_group {
        let sim = Simulator::new(b, t, rel, bounds.cell_budget);
        for batch in alphas.chunks(BATCH) {
            let results: Vec<CellResult> =
                batch.par_iter().map(|&alpha| run_cell(rel, a, &sim, alpha, bounds.cell_budget)).collect();
            for r in results {
                report.cells += 1;
                report.searched += r.searched as usize;
                report.events.extend(r.events);
                if let Some(w) = r.witness {
                    return SearchOutcome { verdict: Verdict::Holds(w), report };
                }
            }
        }
    }
    let note = format!(
        "no witness within bounds: {} cells, {} searched, {} left open",
        report.cells,
        report.searched,
        report.open()
    );
    SearchOutcome { verdict: Verdict::Unknown(note), report }
}

/// Searches `bulk(a, alpha) R b^[t]` over the bound box in the canonical
/// order `(t, m, T, |s|, s, tau)` and returns the first witness.
pub fn search(rel: Relation, a: &Automaton, b: &Automaton, bounds: &SearchBounds) -> SearchOutcome {
    search_cells(rel, a, b, bounds, &bounds.transforms())
}

/// As [`search`] with `alpha` pinned to the identity.
pub fn search_strong(rel: Relation, a: &Automaton, b: &Automaton, bounds: &SearchBounds) -> SearchOutcome {
    search_cells(rel, a, b, bounds, &[Transform::identity()])
}

/// Rebuilds both sides and re-checks the map.
pub fn verify_witness(w: &SimulationWitness, a: &Automaton, b: &Automaton) -> Result<bool> {
    let ap = apply_transform(a, &w.alpha)?;
    let bp = grouping(b, w.group_t)?;
    let shape_ok = match w.relation {
        Relation::Inj => w.map.source() == ap.states() && w.map.target() == bp.states(),
        Relation::Surj => w.map.source() == bp.states() && w.map.target() == ap.states(),
        Relation::Mixed => {
            w.map.target() == ap.states() && w.subset.as_ref().is_some_and(|q| q.len() == w.map.source())
        }
    };
    if !shape_ok {
        return Ok(false);
    }
    let check = match w.relation {
        Relation::Inj => morphism::check_subautomaton(&ap, &bp, &as_role(&w.map, MapRole::Injection)?)?,
        Relation::Surj => morphism::check_quotient(&ap, &bp, &as_role(&w.map, MapRole::Surjection)?)?,
        Relation::Mixed => {
            let q = w.subset.as_ref().expect("shape checked");
            if q.iter().any(|&x| x as usize >= bp.states()) {
                return Ok(false);
            }
            morphism::check_mixed(&ap, &bp, q, &as_role(&w.map, MapRole::Surjection)?)?
        }
    };
    Ok(check.holds)
}

fn as_role(m: &StateMap, role: MapRole) -> Result<StateMap> {
    StateMap::new(m.source(), m.target(), m.table().to_vec(), role)
}
