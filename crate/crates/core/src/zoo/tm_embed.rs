use crate::automaton::{Automaton, State};
use crate::config::PeriodicConfig;
use crate::tm::{Move, TmConfig, TuringMachine};

/// Decoded cell of the embedding.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TmCell {
    /// A tape symbol with an arrow pointing toward the head.
    Arrow { symbol: usize, points_right: bool },
    Head { symbol: usize, state: usize },
    Kappa,
}

/// State numbering of [`tm_embed`]: `(g, <-)` is `2g`, `(g, ->)` is
/// `2g + 1`, head `(g, q)` is `2|G| + g|Q| + q`, and the error state is last.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TmCodec {
    symbols: usize,
    states: usize,
}

impl TmCodec {
    pub fn new(tm: &TuringMachine) -> Self {
        Self { symbols: tm.symbols(), states: tm.states() }
    }

    pub fn state_count(&self) -> usize {
        2 * self.symbols + self.symbols * self.states + 1
    }

    pub fn kappa(&self) -> State {
        (self.state_count() - 1) as State
    }

    pub fn encode_cell(&self, cell: TmCell) -> State {
        match cell {
            TmCell::Arrow { symbol, points_right } => (2 * symbol + points_right as usize) as State,
            TmCell::Head { symbol, state } => (2 * self.symbols + symbol * self.states + state) as State,
            TmCell::Kappa => self.kappa(),
        }
    }

    pub fn decode_cell(&self, s: State) -> TmCell {
        let s = s as usize;
        if s < 2 * self.symbols {
            TmCell::Arrow { symbol: s / 2, points_right: s % 2 == 1 }
        } else if s < self.state_count() - 1 {
            let h = s - 2 * self.symbols;
            TmCell::Head { symbol: h / self.states, state: h % self.states }
        } else {
            TmCell::Kappa
        }
    }

    /// The tape positions `lo..=hi` of `c` as one spatial period.
    pub fn encode(&self, c: &TmConfig, lo: i64, hi: i64) -> PeriodicConfig {
        let word = (lo..=hi)
            .map(|p| {
                let symbol = c.read(p);
                let cell = match p.cmp(&c.head) {
                    std::cmp::Ordering::Less => TmCell::Arrow { symbol, points_right: true },
                    std::cmp::Ordering::Equal => TmCell::Head { symbol, state: c.state },
                    std::cmp::Ordering::Greater => TmCell::Arrow { symbol, points_right: false },
                };
                self.encode_cell(cell)
            })
            .collect();
        PeriodicConfig::new(self.state_count(), word).expect("in range")
    }
}

/// Radius-1 automaton simulating `tm` step by step on configurations with
/// one head and arrows pointing at it. An arrow inconsistency (a left arrow
/// directly left of a right arrow or of a head, a right arrow directly right
/// of a head, or two adjacent heads) creates the error state, which spreads.
pub fn tm_embed(tm: &TuringMachine) -> Automaton {
    let codec = TmCodec::new(tm);
    let kappa = codec.kappa();
    let forbidden = |l: TmCell, r: TmCell| {
        matches!(
            (l, r),
            (TmCell::Arrow { points_right: false, .. }, TmCell::Arrow { points_right: true, .. })
                | (TmCell::Arrow { points_right: false, .. }, TmCell::Head { .. })
                | (TmCell::Head { .. }, TmCell::Arrow { points_right: true, .. })
                | (TmCell::Head { .. }, TmCell::Head { .. })
        )
    };
    Automaton::tabulate(codec.state_count(), 1, vec![-1, 0, 1], |v| {
        let [l, c, r] = [v[0], v[1], v[2]].map(|s| codec.decode_cell(s));
        if [l, c, r].contains(&TmCell::Kappa) || forbidden(l, c) || forbidden(c, r) {
            return kappa;
        }
        let cell = match c {
            TmCell::Head { symbol, state } => {
                let tr = tm.transition(state, symbol);
                match tr.movement {
                    Move::Stay => TmCell::Head { symbol: tr.write, state: tr.next },
                    Move::Right => TmCell::Arrow { symbol: tr.write, points_right: true },
                    Move::Left => TmCell::Arrow { symbol: tr.write, points_right: false },
                }
            }
            TmCell::Arrow { symbol, .. } => {
                let incoming = |h: TmCell, from: Move| match h {
                    TmCell::Head { symbol: hs, state } => {
                        let tr = tm.transition(state, hs);
                        (tr.movement == from).then_some(tr.next)
                    }
                    _ => None,
                };
                match incoming(l, Move::Right).or_else(|| incoming(r, Move::Left)) {
                    Some(state) => TmCell::Head { symbol, state },
                    None => c,
                }
            }
            TmCell::Kappa => TmCell::Kappa,
        };
        codec.encode_cell(cell)
    })
    .expect("small table")
    .with_label("tm")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::property;
    use crate::tm::Transition;

    #[test]
    fn codec_round_trip() {
        let tm = TuringMachine::unary_incrementer();
        let codec = TmCodec::new(&tm);
        for s in 0..codec.state_count() as State {
            assert_eq!(codec.encode_cell(codec.decode_cell(s)), s);
        }
        assert_eq!(codec.decode_cell(codec.kappa()), TmCell::Kappa);
    }

    #[test]
    fn still_machine_is_fixed_after_write() {
        let t = Transition { next: 0, write: 1, movement: Move::Stay };
        let tm = TuringMachine::new(1, 2, 0, vec![t, t]).unwrap();
        let ca = tm_embed(&tm);
        let codec = TmCodec::new(&tm);
        let start = TmConfig::new(&tm, 0, 5, &[0; 12]);
        let c = codec.encode(&start, 0, 11);
        let one = ca.step(&c).unwrap();
        assert_eq!(codec.decode_cell(one.word()[5]), TmCell::Head { symbol: 1, state: 0 });
        let two = ca.step(&one).unwrap();
        assert_eq!(two.word()[3..8], one.word()[3..8]);
    }

    #[test]
    fn kappa_is_the_spreading_state() {
        let tm = TuringMachine::unary_incrementer();
        let ca = tm_embed(&tm);
        let codec = TmCodec::new(&tm);
        assert_eq!(property::spreading_states(&ca).unwrap(), vec![codec.kappa()]);
    }
}
