mod common;

use bulkca::morphism::{
    check_mixed, check_quotient, check_subautomaton, closure, congruences, find_isomorphism, find_mixed,
    find_quotient, find_quotient_within, find_subautomaton, quotient_by, stable_subsets, Budget, Search,
};
use bulkca::{zoo, Automaton, MapRole, State, StateMap};
use common::{globally_commutes, rule, words};
use proptest::prelude::*;

/// All maps `0..source -> 0..target` in lexicographic order of their tables.
fn all_maps(source: usize, target: usize) -> Vec<Vec<State>> {
    words(target, source)
}

fn injective(t: &[State]) -> bool {
    let mut s = t.to_vec();
    s.sort_unstable();
    s.windows(2).all(|w| w[0] != w[1])
}

fn onto(t: &[State], target: usize) -> bool {
    (0..target as State).all(|y| t.contains(&y))
}

fn brute_stable(b: &Automaton, subset: &[State]) -> bool {
    words(subset.len(), b.window_len())
        .iter()
        .all(|w| subset.contains(&b.eval(&w.iter().map(|&i| subset[i as usize]).collect::<Vec<_>>())))
}

fn two_rules() -> impl Strategy<Value = (Automaton, Automaton)> {
    (1usize..=3, 1usize..=4).prop_flat_map(|(na, nb)| (rule(na), rule(nb)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn subautomaton_search_is_lex_least((a, b) in two_rules()) {
        let brute = all_maps(a.states(), b.states())
            .into_iter()
            .find(|t| injective(t) && globally_commutes(&a, &b, t, 3));
        let found = find_subautomaton(&a, &b).unwrap();
        prop_assert_eq!(found.as_ref().map(|m| m.table().to_vec()), brute);
        if let Some(m) = found {
            prop_assert!(check_subautomaton(&a, &b, &m).unwrap().holds);
        }
    }

    #[test]
    fn quotient_search_is_lex_least((a, b) in two_rules()) {
        let brute = all_maps(b.states(), a.states())
            .into_iter()
            .find(|t| onto(t, a.states()) && globally_commutes(&b, &a, t, 3));
        let found = find_quotient(&a, &b).unwrap();
        prop_assert_eq!(found.as_ref().map(|m| m.table().to_vec()), brute);
    }

    #[test]
    fn isomorphism_of_a_relabelling(a in rule(3), shift in 0usize..3, swap in any::<bool>()) {
        let mut perm: Vec<State> = vec![0, 1, 2];
        perm.rotate_left(shift);
        if swap {
            perm.swap(0, 1);
        }
        let b = a.relabel(&perm).unwrap();
        let iso = find_isomorphism(&a, &b).unwrap().expect("relabelled copy");
        prop_assert!(globally_commutes(&a, &b, iso.table(), 3));
        let least = all_maps(3, 3).into_iter().find(|t| injective(t) && globally_commutes(&a, &b, t, 3));
        prop_assert_eq!(Some(iso.table().to_vec()), least);
    }

    #[test]
    fn stable_subsets_match_brute_force(b in (1usize..=5).prop_flat_map(rule)) {
        let n = b.states();
        let brute: Vec<Vec<State>> = (1u32..1 << n)
            .map(|mask| (0..n as State).filter(|s| mask >> s & 1 == 1).collect::<Vec<_>>())
            .filter(|q| brute_stable(&b, q))
            .collect();
        prop_assert_eq!(stable_subsets(&b).unwrap(), brute.clone());
        // closures are the least stable supersets
        for s in 0..n as State {
            let c = closure(&b, &[s]);
            let least = brute.iter().filter(|q| q.contains(&s)).min_by_key(|q| q.len()).unwrap();
            prop_assert_eq!(&c, least);
            prop_assert!(brute.iter().filter(|q| q.contains(&s)).all(|q| c.iter().all(|x| q.contains(x))));
        }
    }

    #[test]
    fn congruences_match_brute_force(b in (1usize..=4).prop_flat_map(rule)) {
        let n = b.states();
        let rgs = |w: &Vec<State>| {
            let mut max = 0;
            w.iter().enumerate().all(|(i, &x)| {
                let ok = if i == 0 { x == 0 } else { x <= max + 1 };
                max = max.max(x);
                ok
            })
        };
        let brute: Vec<Vec<usize>> = words(n, n)
            .into_iter()
            .filter(rgs)
            .filter(|p| {
                let k = *p.iter().max().unwrap() as usize + 1;
                let q = quotient_by(&b, &p.iter().map(|&x| x as usize).collect::<Vec<_>>());
                q.is_ok_and(|q| q.states() == k && globally_commutes(&b, &q, p, 3))
            })
            .map(|p| p.into_iter().map(|x| x as usize).collect())
            .collect();
        prop_assert_eq!(congruences(&b).unwrap(), brute);
    }

    #[test]
    fn mixed_witnesses_verify((a, b) in two_rules()) {
        if let Some(w) = find_mixed(&a, &b).unwrap() {
            prop_assert!(check_mixed(&a, &b, &w.subset, &w.map).unwrap().holds);
            prop_assert!(brute_stable(&b, &w.subset));
        } else {
            // neither a direct sub-automaton nor a direct quotient can exist
            prop_assert!(find_subautomaton(&a, &b).unwrap().is_none());
            prop_assert!(find_quotient(&a, &b).unwrap().is_none());
        }
    }

    #[test]
    fn lifting_respects_composition(f in prop::collection::vec(0u32..3, 3), g in prop::collection::vec(0u32..2, 3), m in 1usize..4) {
        let f = StateMap::new(3, 3, f, MapRole::Surjection);
        let g = StateMap::new(3, 2, g, MapRole::Surjection);
        if let (Ok(f), Ok(g)) = (f, g) {
            let fg = f.then(&g).unwrap();
            prop_assert_eq!(fg.lift(m).unwrap(), f.lift(m).unwrap().then(&g.lift(m).unwrap()).unwrap());
            prop_assert_eq!(f.lift(1).unwrap(), f.clone());
            for x in 0..3 {
                prop_assert_eq!(fg.apply(x), g.apply(f.apply(x)));
            }
        }
    }
}

#[test]
fn map_literals_and_roles() {
    let m = StateMap::parse("map 3: 0 1 1", 2, MapRole::Surjection).unwrap();
    assert_eq!(m.to_string(), "map 3: 0 1 1");
    assert!(m.is_surjective() && !m.is_injective() && !m.is_balanced());
    assert_eq!(m.preimage_sizes(), vec![1, 2]);
    assert!(StateMap::parse("map 3: 0 1 1", 2, MapRole::Injection).is_err());
    assert!(StateMap::parse("map 3: 0 1", 2, MapRole::Surjection).is_err());
    assert!(StateMap::parse("map 2: 0 5", 2, MapRole::Surjection).is_err());
    assert!(StateMap::new(2, 3, vec![2, 0], MapRole::Injection).is_ok());
}

#[test]
fn witness_shapes_are_checked() {
    let z2 = zoo::additive(2).unwrap();
    let pi = StateMap::new(3, 2, vec![0, 1, 1], MapRole::Surjection).unwrap();
    assert!(check_quotient(&z2, &z2, &pi).is_err());
    assert!(check_subautomaton(&z2, &zoo::additive(3).unwrap(), &pi).is_err());
}

#[test]
fn quotient_of_a_product_is_a_factor() {
    let a = zoo::additive(2).unwrap();
    let b = zoo::delta_max(3).unwrap();
    let p = a.product(&b).unwrap();
    let onto_b = find_quotient(&b, &p).unwrap().expect("projection");
    assert!(check_quotient(&b, &p, &onto_b).unwrap().holds);
    let onto_a = find_quotient(&a, &p).unwrap().expect("projection");
    assert!(onto_a.is_balanced());
}

#[test]
fn tiny_budgets_stop_the_search() {
    let (g, _) = zoo::nontransitivity_gadget(7).unwrap();
    let c2 = zoo::identity(2);
    let mut budget = Budget::limited(3);
    assert!(matches!(find_quotient_within(&c2, &g, &mut budget), Search::OutOfBudget));
    assert!(budget.exceeded());
    let mut budget = Budget::unlimited();
    assert!(matches!(find_quotient_within(&c2, &g, &mut budget), Search::NoneExists));
    assert!(budget.used > 0);
}
