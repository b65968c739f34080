use crate::automaton::{Automaton, State};
use crate::error::{Error, Result};

const ALPHA: State = 0;
const A: [State; 2] = [1, 2];
const B: [State; 2] = [3, 4];

fn is_prime(p: usize) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

/// The `p`-state radius-1 automaton whose only quotients are isomorphisms
/// although it has a 2-state quotient of a sub-automaton, together with the
/// 2-state identity. States `0..5` play the roles `alpha, a0, a1, b0, b1`.
pub fn nontransitivity_gadget(p: usize) -> Result<(Automaton, Automaton)> {
    if p < 5 || !is_prime(p) {
        return Err(Error::InvalidParameter(format!("gadget needs a prime p >= 5, got {p}")));
    }
    let a = Automaton::tabulate(p, 1, vec![0, 1], |v| {
        let (x, y) = (v[0], v[1]);
        match y {
            _ if x != ALPHA && A.contains(&y) => if y == A[0] { A[1] } else { A[0] },
            _ if x != ALPHA && B.contains(&y) => if y == B[0] { B[1] } else { B[0] },
            _ => (y + 1) % p as State,
        }
    })?
    .with_label(format!("gadget{p}"));
    Ok((a, super::identity(2).with_label("C2")))
}

/// The 2-state quotient of the gadget's `{a0, a1, b0, b1}` sub-automaton:
/// each cell copies its right neighbor.
pub fn nontransitivity_quotient() -> Automaton {
    super::shift(2, -1).expect("valid").with_label("B2")
}

/// The range-reducing pair: `Big` on `{0,1,2}` keeps the parity of each
/// non-zero range, `Small` on `{0,1}` is its image under `0 -> 0, x -> 1`.
/// Both have radius 2.
pub fn parity_range_pair() -> (Automaton, Automaton) {
    let p = |s: State| (s != 0) as u8;
    let big = Automaton::tabulate(3, 2, vec![-2, -1, 0, 1, 2], |v| {
        let (x, y, z, t, u) = (p(v[0]), p(v[1]), p(v[2]), p(v[3]), p(v[4]));
        let all = [x, y, z, t, u] == [0, 1, 1, 1, 0];
        if all {
            1
        } else if [y, z, t, u] == [0, 1, 1, 0] {
            2
        } else if [y, z, t] == [1, 1, 1] || [y, z, t] == [0, 1, 0] {
            v[2]
        } else {
            0
        }
    })
    .expect("3^5 entries")
    .with_label("Big");
    let small = Automaton::tabulate(2, 2, vec![-2, -1, 0, 1, 2], |v| {
        let (y, z, t, u) = (v[1], v[2], v[3], v[4]);
        let one = [y, z, t] == [1, 1, 1] || [y, z, t] == [0, 1, 0] || [y, z, t, u] == [0, 1, 1, 0];
        one as State
    })
    .expect("2^5 entries")
    .with_label("Small");
    (big, small)
}
