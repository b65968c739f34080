mod common;

use bulkca::transform::{apply_transform, block_base, grouping, normalize_composition, pack, unpack, Transform};
use bulkca::{zoo, Automaton, PeriodicConfig, State};
use common::{automaton, naive_step, words_up_to};
use proptest::prelude::*;

fn pack_word(cells: &[State], n: usize, m: usize) -> Vec<State> {
    cells.chunks(m).map(|c| c.iter().fold(0, |acc, &d| acc * n as State + d)).collect()
}

fn unpack_word(blocks: &[State], n: usize, m: usize) -> Vec<State> {
    blocks
        .iter()
        .flat_map(|&b| (0..m).rev().map(move |i| (b / (n as State).pow(i as u32)) % n as State))
        .collect()
}

/// pack o shift_s o G^T o unpack, conjugated by a reflection when mirrored.
fn bulk_oracle(a: &Automaton, t: &Transform, blocks: &[State]) -> Vec<State> {
    let n = a.states();
    let mut x = unpack_word(blocks, n, t.m);
    if t.mirrored() {
        x.reverse();
    }
    for _ in 0..t.time {
        x = naive_step(a, &x);
    }
    let len = x.len() as i64;
    x = (0..len).map(|z| x[(z - t.shift).rem_euclid(len) as usize]).collect();
    if t.mirrored() {
        x.reverse();
    }
    pack_word(&x, n, t.m)
}

fn transform() -> impl Strategy<Value = Transform> {
    (1usize..=3, prop_oneof![Just(1i8), Just(-1i8)], 1usize..=3, -2i64..=2)
        .prop_map(|(m, tau, time, s)| Transform::new(m, tau, time, s).unwrap())
}

fn plain_transform() -> impl Strategy<Value = Transform> {
    (1usize..=2, 1usize..=2, -2i64..=2).prop_map(|(m, time, s)| Transform::new(m, 1, time, s).unwrap())
}

proptest! {
    #[test]
    fn bulk_is_conjugate_to_rescaled_dynamics(a in automaton(3), t in transform(), blocks in prop::collection::vec(any::<u32>(), 1..5)) {
        let b = apply_transform(&a, &t).unwrap();
        prop_assert_eq!(b.states(), a.states().pow(t.m as u32));
        let blocks: Vec<State> = blocks.iter().map(|x| x % b.states() as State).collect();
        let got = b.step(&PeriodicConfig::new(b.states(), blocks.clone()).unwrap()).unwrap();
        prop_assert_eq!(got.into_word(), bulk_oracle(&a, &t, &blocks));
    }

    #[test]
    fn pack_then_unpack_is_identity(w in prop::collection::vec(0u32..3, 1..8), m in 1usize..4, mirror in any::<bool>()) {
        let tau = if mirror { -1 } else { 1 };
        let c = PeriodicConfig::new(3, w).unwrap();
        let packed = pack(&c, m, tau).unwrap();
        prop_assert_eq!(packed.config.len() * m, c.len() * packed.replication);
        prop_assert_eq!(unpack(&packed.config, m, tau).unwrap(), c.replicate(packed.replication));
    }

    #[test]
    fn then_composes_plain_transforms(a in automaton(2), s in plain_transform(), t in plain_transform(), blocks in prop::collection::vec(any::<u32>(), 1..4)) {
        let twice = apply_transform(&apply_transform(&a, &s).unwrap(), &t).unwrap();
        let once = apply_transform(&a, &s.then(&t).unwrap()).unwrap();
        prop_assert_eq!(twice.states(), once.states());
        let blocks: Vec<State> = blocks.iter().map(|x| x % once.states() as State).collect();
        prop_assert_eq!(naive_step(&twice, &blocks), naive_step(&once, &blocks));
    }

    #[test]
    fn literal_round_trip(t in transform()) {
        prop_assert_eq!(t.to_string().parse::<Transform>().unwrap(), t);
    }

    #[test]
    fn normalization_reaches_a_grouping(a in automaton(2), t in transform()) {
        let norm = normalize_composition(&t);
        prop_assert_eq!(norm.t % t.m, 0);
        prop_assert_eq!(norm.t % t.time, 0);
        prop_assert_eq!(norm.beta.m * t.m, norm.t);
        let twice = apply_transform(&apply_transform(&a, &t).unwrap(), &norm.beta).unwrap();
        let grouped = grouping(&a, norm.t).unwrap();
        let perm = norm.relabeling(a.states()).unwrap();
        prop_assert_eq!(norm.is_plain(), !t.mirrored());
        for w in words_up_to(grouped.states(), 2) {
            let rel: Vec<State> = w.iter().map(|&s| perm[s as usize]).collect();
            let back: Vec<State> = naive_step(&grouped, &rel).iter().map(|&s| perm[s as usize]).collect();
            prop_assert_eq!(naive_step(&twice, &w), back);
        }
    }
}

#[test]
fn literals() {
    let t: Transform = "~2:3:-1".parse().unwrap();
    assert_eq!((t.m, t.tau, t.time, t.shift), (2, -1, 3, -1));
    assert_eq!(Transform::grouping(3).unwrap().to_string(), "3:3:0");
    for bad in ["2:3", "0:1:0", "1:0:0", "a:1:0", "1:1:0:0"] {
        assert!(bad.parse::<Transform>().is_err(), "{bad}");
    }
    assert!(Transform::new(1, 0, 1, 0).is_err());
    let mirrored = Transform::new(1, -1, 1, 0).unwrap();
    assert!(mirrored.then(&Transform::identity()).is_err());
}

#[test]
fn grouping_examples() {
    // Z2^[2] on 4 states: blocks advance two steps
    let z2 = zoo::additive(2).unwrap();
    let g = grouping(&z2, 2).unwrap();
    assert_eq!(g.states(), 4);
    assert_eq!(g.radius(), 1);
    assert!(block_base(4, 2).unwrap() == 2 && block_base(5, 2).is_err());
    // a shift by 2 on cells becomes a shift by one block
    let s = grouping(&zoo::shift(2, 1).unwrap(), 2).unwrap();
    let c = PeriodicConfig::new(4, vec![1, 2, 3]).unwrap();
    assert_eq!(s.step(&c).unwrap(), c.shifted(1));
}

#[test]
fn normal_forms() {
    let n = normalize_composition(&Transform::new(2, 1, 3, 1).unwrap());
    assert_eq!(n.t, 6);
    assert_eq!(n.beta, Transform::new(3, 1, 2, -1).unwrap());
    let n = normalize_composition(&Transform::new(2, 1, 1, 1).unwrap());
    assert_eq!((n.t, n.beta), (2, Transform::new(1, 1, 2, -1).unwrap()));
    let n = normalize_composition(&Transform::identity());
    assert_eq!((n.t, n.beta), (1, Transform::identity()));
}
