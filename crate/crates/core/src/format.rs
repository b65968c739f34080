//! Text formats: CA files and configuration literals.
//!
//! ```text
//! ca v1
//! # label: Z2
//! states 2
//! radius 1
//! rule table
//! 0 1 1 0 1 0 0 1
//! ```
//!
//! The rule line may instead be `rule additive <p>` or
//! `rule shiftprod <k>` followed by `k` pairs `<n_i> <z_i>`. Text after `#`
//! is ignored, except that `# label: <text>` names the automaton.

use std::fmt::Write as _;

use thiserror::Error;

use crate::automaton::{Automaton, State};
use crate::config::PeriodicConfig;
use crate::error::{Error, Result};
use crate::zoo::{self, ShiftProduct};

const ENTRIES_PER_LINE: usize = 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {line}: expected header `ca v1`, found {found:?}")]
    Header { line: usize, found: String },
    #[error("line {line}: expected `{key} <integer>`, found {found:?}")]
    Field { line: usize, key: &'static str, found: String },
    #[error("line {line}: unknown rule kind {kind:?}, expected table, additive or shiftprod")]
    RuleKind { line: usize, kind: String },
    #[error("line {line}: {token:?} is not a non-negative integer")]
    Integer { line: usize, token: String },
    #[error("line {line}: symbol {symbol} out of range for {states} states")]
    Symbol { line: usize, symbol: u64, states: usize },
    #[error("line {line}: rule table has {actual} entries, expected {expected}")]
    TableLength { line: usize, expected: u128, actual: usize },
    #[error("line {line}: {message}")]
    Rule { line: usize, message: String },
    #[error("unexpected end of input, expected {expected}")]
    Eof { expected: &'static str },
    #[error("malformed configuration literal {0:?}, expected `<L> : s0 s1 ...`")]
    Config(String),
}

impl ParseError {
    /// 1-based line of the offending input, when there is one.
    pub fn line(&self) -> Option<usize> {
        match self {
            Self::Header { line, .. }
            | Self::Field { line, .. }
            | Self::RuleKind { line, .. }
            | Self::Integer { line, .. }
            | Self::Symbol { line, .. }
            | Self::TableLength { line, .. }
            | Self::Rule { line, .. } => Some(*line),
            Self::Eof { .. } | Self::Config(_) => None,
        }
    }
}

struct Lines<'a> {
    lines: Vec<(usize, &'a str)>,
    pos: usize,
    label: Option<String>,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        let mut label = None;
        let lines = text
            .lines()
            .enumerate()
            .filter_map(|(i, raw)| {
                let (body, comment) = match raw.find('#') {
                    Some(p) => (&raw[..p], Some(&raw[p + 1..])),
                    None => (raw, None),
                };
                if let Some(l) = comment.and_then(|c| c.trim().strip_prefix("label:")) {
                    label = Some(l.trim().to_string());
                }
                let body = body.trim();
                (!body.is_empty()).then_some((i + 1, body))
            })
            .collect();
        Self { lines, pos: 0, label }
    }

    fn next(&mut self, expected: &'static str) -> std::result::Result<(usize, &'a str), ParseError> {
        let l = self.lines.get(self.pos).copied().ok_or(ParseError::Eof { expected })?;
        self.pos += 1;
        Ok(l)
    }

    fn field(&mut self, key: &'static str) -> std::result::Result<(usize, u64), ParseError> {
        let (line, body) = self.next(key)?;
        let mut it = body.split_whitespace();
        let bad = || ParseError::Field { line, key, found: body.to_string() };
        if it.next() != Some(key) {
            return Err(bad());
        }
        let v = it.next().and_then(|t| t.parse().ok()).ok_or_else(bad)?;
        if it.next().is_some() {
            return Err(bad());
        }
        Ok((line, v))
    }

    /// Remaining tokens with their line numbers.
    fn tokens(&mut self) -> Vec<(usize, &'a str)> {
        let rest = self.lines[self.pos..].iter().flat_map(|&(l, b)| b.split_whitespace().map(move |t| (l, t))).collect();
        self.pos = self.lines.len();
        rest
    }
}

fn integer(line: usize, token: &str) -> std::result::Result<u64, ParseError> {
    token.parse().map_err(|_| ParseError::Integer { line, token: token.to_string() })
}

/// Parses the CA file format.
pub fn parse_ca(text: &str) -> Result<Automaton> {
    let mut lines = Lines::new(text);
    let (line, header) = lines.next("header `ca v1`")?;
    if header.split_whitespace().collect::<Vec<_>>() != ["ca", "v1"] {
        return Err(ParseError::Header { line, found: header.to_string() }.into());
    }
    let (sline, states) = lines.field("states")?;
    if states == 0 || states > State::MAX as u64 {
        return Err(ParseError::Rule { line: sline, message: format!("state count {states} out of range") }.into());
    }
    let states = states as usize;
    let (rline, radius) = lines.field("radius")?;
    let radius = radius as usize;
    let (line, rule) = lines.next("rule line")?;
    let mut words = rule.split_whitespace();
    if words.next() != Some("rule") {
        return Err(ParseError::RuleKind { line, kind: rule.to_string() }.into());
    }
    let kind = words.next().unwrap_or("");
    let args: Vec<&str> = words.collect();
    let rule_err = |message: String| Error::from(ParseError::Rule { line, message });
    let a = match kind {
        "table" => {
            if !args.is_empty() {
                return Err(rule_err("`rule table` takes no arguments".into()));
            }
            let tokens = lines.tokens();
            let expected = crate::automaton::pow_u128(states, 2 * radius + 1);
            let last = tokens.last().map_or(line, |t| t.0);
            if tokens.len() as u128 != expected {
                return Err(ParseError::TableLength { line: last, expected, actual: tokens.len() }.into());
            }
            let table = tokens
                .iter()
                .map(|&(l, t)| {
                    let v = integer(l, t)?;
                    if v >= states as u64 {
                        return Err(ParseError::Symbol { line: l, symbol: v, states });
                    }
                    Ok(v as State)
                })
                .collect::<std::result::Result<Vec<_>, _>>()?;
            Automaton::from_table(states, radius, table)?.compact()?
        }
        "additive" => {
            let [p] = args[..] else { return Err(rule_err("expected `rule additive <p>`".into())) };
            let p = integer(line, p)? as usize;
            if p != states {
                return Err(ParseError::Rule { line: sline, message: format!("additive {p} needs states {p}") }.into());
            }
            if radius != 1 {
                return Err(ParseError::Rule { line: rline, message: "additive rules have radius 1".into() }.into());
            }
            zoo::additive(p).map_err(|e| rule_err(e.to_string()))?
        }
        "shiftprod" => {
            let [k] = args[..] else { return Err(rule_err("expected `rule shiftprod <k>`".into())) };
            let k = integer(line, k)? as usize;
            let tokens = lines.tokens();
            if tokens.len() != 2 * k {
                return Err(rule_err(format!("expected {k} pairs `<n_i> <z_i>`, found {} tokens", tokens.len())));
            }
            let mut factors = Vec::with_capacity(k);
            for pair in tokens.chunks(2) {
                let n = integer(pair[0].0, pair[0].1)? as usize;
                let z: i64 = pair[1]
                    .1
                    .parse()
                    .map_err(|_| ParseError::Integer { line: pair[1].0, token: pair[1].1.to_string() })?;
                factors.push((n, z));
            }
            let sp = ShiftProduct::new(factors).map_err(|e| rule_err(e.to_string()))?;
            let a = zoo::shift_product(&sp).map_err(|e| rule_err(e.to_string()))?;
            if a.states() != states {
                return Err(ParseError::Rule { line: sline, message: format!("shift product has {} states", a.states()) }.into());
            }
            if a.radius() > radius {
                return Err(ParseError::Rule { line: rline, message: format!("shift product needs radius {}", a.radius()) }.into());
            }
            a.canonicalize_radius(radius)?
        }
        _ => return Err(ParseError::RuleKind { line, kind: kind.to_string() }.into()),
    };
    Ok(match lines.label {
        Some(l) => a.with_label(l),
        None => a,
    })
}

/// Writes `a` as a full table, or as `rule shiftprod` when `a` was built
/// as a product of shifts. Table lines break every 16 entries.
pub fn write_ca(a: &Automaton) -> Result<String> {
    let mut out = String::from("ca v1\n");
    if !a.label().is_empty() {
        let _ = writeln!(out, "# label: {}", a.label().replace('\n', " "));
    }
    let _ = writeln!(out, "states {}\nradius {}", a.states(), a.radius());
    if let Some(sp) = a.shift_product() {
        let _ = writeln!(out, "rule shiftprod {}", sp.factors().len());
        for (n, z) in sp.factors() {
            let _ = writeln!(out, "{n} {z}");
        }
        return Ok(out);
    }
    let table = a.full_table()?;
    out.push_str("rule table\n");
    for chunk in table.chunks(ENTRIES_PER_LINE) {
        let row: Vec<String> = chunk.iter().map(|s| s.to_string()).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    Ok(out)
}

/// Parses `<L> : s0 s1 ... s_{L-1}`.
pub fn parse_config(text: &str, states: usize) -> Result<PeriodicConfig> {
    let bad = || Error::from(ParseError::Config(text.to_string()));
    let (len, body) = text.split_once(':').ok_or_else(bad)?;
    let len: usize = len.trim().parse().map_err(|_| bad())?;
    let word: Vec<State> = body.split_whitespace().map(|t| t.parse().map_err(|_| bad())).collect::<Result<_>>()?;
    if word.len() != len {
        return Err(bad());
    }
    PeriodicConfig::new(states, word)
}
