mod common;

use bulkca::{Automaton, PeriodicConfig, State};
use common::{automaton_and_word, naive_iterate, naive_step};
use proptest::prelude::*;

fn cfg(n: usize, w: &[State]) -> PeriodicConfig {
    PeriodicConfig::new(n, w.to_vec()).unwrap()
}

proptest! {
    #[test]
    fn step_matches_window_oracle((a, w) in automaton_and_word(3, 9)) {
        prop_assert_eq!(a.step(&cfg(a.states(), &w)).unwrap().into_word(), naive_step(&a, &w));
    }

    #[test]
    fn step_commutes_with_rotation((a, w) in automaton_and_word(3, 9), k in -9isize..9) {
        let c = cfg(a.states(), &w);
        prop_assert_eq!(a.step(&c.rotate(k)).unwrap(), a.step(&c).unwrap().rotate(k));
    }

    #[test]
    fn replication_is_invisible((a, w) in automaton_and_word(3, 6), k in 1usize..4) {
        let c = cfg(a.states(), &w);
        prop_assert_eq!(a.iterate(&c.replicate(k), 3).unwrap(), a.iterate(&c, 3).unwrap());
    }

    #[test]
    fn power_is_iteration((a, w) in automaton_and_word(3, 8), t in 1usize..4) {
        let p = a.power(t).unwrap();
        prop_assert_eq!(p.radius(), a.radius() * t);
        prop_assert_eq!(p.step(&cfg(a.states(), &w)).unwrap().into_word(), naive_iterate(&a, &w, t));
    }

    #[test]
    fn product_projects_to_factors((a, w) in automaton_and_word(3, 7), (b, v) in automaton_and_word(2, 7)) {
        let len = w.len().min(v.len());
        let nb = b.states() as State;
        let joint: Vec<State> = (0..len).map(|i| w[i] * nb + v[i]).collect();
        let p = a.product(&b).unwrap();
        let next = naive_step(&p, &joint);
        let left: Vec<State> = next.iter().map(|s| s / nb).collect();
        let right: Vec<State> = next.iter().map(|s| s % nb).collect();
        prop_assert_eq!(left, naive_step(&a, &w[..len]));
        prop_assert_eq!(right, naive_step(&b, &v[..len]));
    }

    #[test]
    fn radius_padding_keeps_the_global_map((a, w) in automaton_and_word(3, 8), extra in 0usize..3) {
        let wide = a.canonicalize_radius(a.radius() + extra).unwrap();
        prop_assert_eq!(wide.radius(), a.radius() + extra);
        prop_assert_eq!(naive_step(&wide, &w), naive_step(&a, &w));
    }

    #[test]
    fn mirror_conjugates_by_reflection((a, w) in automaton_and_word(3, 8)) {
        let c = cfg(a.states(), &w);
        prop_assert_eq!(a.mirror().step(&c.mirrored()).unwrap(), a.step(&c).unwrap().mirrored());
        prop_assert_eq!(a.mirror().mirror().full_table().unwrap(), a.full_table().unwrap());
    }

    #[test]
    fn compaction_keeps_the_global_map((a, w) in automaton_and_word(3, 8)) {
        let c = a.compact().unwrap();
        prop_assert!(c.support().len() <= a.support().len());
        prop_assert_eq!(naive_step(&c, &w), naive_step(&a, &w));
        // every remaining offset matters
        for &d in c.support() {
            let matters = common::words(a.states(), a.window_len()).iter().any(|win| {
                (0..a.states() as State).any(|x| {
                    let mut other = win.clone();
                    other[(d + a.radius() as isize) as usize] = x;
                    a.eval(win) != a.eval(&other)
                })
            });
            prop_assert!(matters, "offset {} is inert", d);
        }
    }

    #[test]
    fn relabel_is_a_conjugacy((a, w) in automaton_and_word(3, 8), seed in any::<u64>()) {
        let n = a.states();
        let mut perm: Vec<State> = (0..n as State).collect();
        perm.rotate_left((seed % n as u64) as usize);
        let b = a.relabel(&perm).unwrap();
        let mapped: Vec<State> = w.iter().map(|&s| perm[s as usize]).collect();
        let expect: Vec<State> = naive_step(&a, &w).iter().map(|&s| perm[s as usize]).collect();
        prop_assert_eq!(naive_step(&b, &mapped), expect);
    }

    #[test]
    fn equality_is_by_primitive_root(w in prop::collection::vec(0u32..3, 1..6), k in 1usize..4) {
        let c = cfg(3, &w);
        prop_assert_eq!(c.replicate(k).primitive_root().to_vec(), c.primitive_root().to_vec());
        prop_assert_eq!(c.replicate(k), c.clone());
        prop_assert_eq!(c.shifted(2).shifted(-2), c);
    }

    #[test]
    fn orbit_cycle_is_minimal((a, w) in automaton_and_word(2, 6)) {
        let c = cfg(a.states(), &w);
        let cyc = a.orbit_cycle(&c, 200).unwrap().expect("period-6 orbits close within 64 steps");
        let at = |t| a.iterate(&c, t).unwrap();
        prop_assert_eq!(at(cyc.preperiod + cyc.period), at(cyc.preperiod));
        for p in 0..cyc.preperiod {
            prop_assert!((1..=64).all(|q| at(p + q) != at(p)));
        }
        for q in 1..cyc.period {
            prop_assert_ne!(at(cyc.preperiod + q), at(cyc.preperiod));
        }
    }
}

#[test]
fn table_constructors_validate() {
    assert!(Automaton::from_table(2, 1, vec![0; 7]).is_err());
    assert!(Automaton::from_table(2, 1, vec![2; 8]).is_err());
    assert!(Automaton::from_table(2, 0, vec![1, 0]).is_ok());
    assert!(PeriodicConfig::new(2, vec![0, 2]).is_err());
    let a = Automaton::from_table(2, 1, vec![0; 8]).unwrap();
    assert!(a.step(&cfg(3, &[0, 1])).is_err());
}

#[test]
fn minimal_neighborhood_of_known_rules() {
    let right = bulkca::zoo::shift(2, -1).unwrap().canonicalize_radius(2).unwrap();
    assert_eq!(right.minimal_neighborhood().unwrap().offsets, vec![1]);
    let w90 = bulkca::zoo::elementary(90);
    assert_eq!(w90.minimal_neighborhood().unwrap().offsets, vec![-1, 1]);
    assert!(bulkca::zoo::constant(3, 2).unwrap().minimal_neighborhood().unwrap().offsets.is_empty());
}
