//! Brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::HashSet;

use bulkca::{Automaton, State};
use proptest::prelude::*;

/// Global map on a cyclic word, reading windows by modular indexing.
pub fn naive_step(a: &Automaton, word: &[State]) -> Vec<State> {
    let len = word.len() as isize;
    let r = a.radius() as isize;
    (0..len)
        .map(|z| {
            let w: Vec<State> = (-r..=r).map(|d| word[(z + d).rem_euclid(len) as usize]).collect();
            a.eval(&w)
        })
        .collect()
}

pub fn naive_iterate(a: &Automaton, word: &[State], t: usize) -> Vec<State> {
    (0..t).fold(word.to_vec(), |w, _| naive_step(a, &w))
}

/// All words of length `len` in lexicographic order.
pub fn words(n: usize, len: usize) -> Vec<Vec<State>> {
    let mut out = vec![vec![]];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|w| {
                (0..n as State).map(move |s| {
                    let mut v = w.clone();
                    v.push(s);
                    v
                })
            })
            .collect();
    }
    out
}

pub fn words_up_to(n: usize, max: usize) -> Vec<Vec<State>> {
    (1..=max).flat_map(|l| words(n, l)).collect()
}

pub fn map_word(phi: &[State], w: &[State]) -> Vec<State> {
    w.iter().map(|&s| phi[s as usize]).collect()
}

/// `phi o G_src = G_dst o phi` on every cyclic word up to length `max`.
pub fn globally_commutes(src: &Automaton, dst: &Automaton, phi: &[State], max: usize) -> bool {
    words_up_to(src.states(), max)
        .iter()
        .all(|w| map_word(phi, &naive_step(src, w)) == naive_step(dst, &map_word(phi, w)))
}

/// Does some word map onto `w` under the open global map?
pub fn has_preimage(a: &Automaton, w: &[State]) -> bool {
    let k = a.window_len();
    let mut frontier: HashSet<Vec<State>> = words(a.states(), k - 1).into_iter().collect();
    for &target in w {
        let mut next = HashSet::new();
        for p in &frontier {
            for s in 0..a.states() as State {
                let mut win = p.clone();
                win.push(s);
                if a.eval(&win) == target {
                    next.insert(win[1..].to_vec());
                }
            }
        }
        if next.is_empty() {
            return false;
        }
        frontier = next;
    }
    true
}

pub fn shortest_orphan(a: &Automaton, max_len: usize) -> Option<Vec<State>> {
    (1..=max_len).find_map(|l| words(a.states(), l).into_iter().find(|w| !has_preimage(a, w)))
}

pub fn has_collision(a: &Automaton, max_period: usize) -> bool {
    (1..=max_period).any(|l| {
        let mut seen = HashSet::new();
        words(a.states(), l).into_iter().any(|w| !seen.insert(naive_step(a, &w)))
    })
}

/// Random rule on 1..=max_states states and radius 0..=1.
pub fn automaton(max_states: usize) -> impl Strategy<Value = Automaton> {
    (1..=max_states, 0..=1usize).prop_flat_map(|(n, r)| {
        let len = n.pow(2 * r as u32 + 1);
        prop::collection::vec(0..n as State, len)
            .prop_map(move |t| Automaton::from_table(n, r, t).expect("table length"))
    })
}

/// Random radius-1 rule on exactly `n` states.
pub fn rule(n: usize) -> impl Strategy<Value = Automaton> {
    prop::collection::vec(0..n as State, n * n * n).prop_map(move |t| Automaton::from_table(n, 1, t).expect("n^3"))
}

/// A random automaton together with a cyclic word over its states.
pub fn automaton_and_word(max_states: usize, max_len: usize) -> impl Strategy<Value = (Automaton, Vec<State>)> {
    automaton(max_states).prop_flat_map(move |a| {
        let n = a.states() as State;
        (Just(a), prop::collection::vec(0..n, 1..=max_len))
    })
}
