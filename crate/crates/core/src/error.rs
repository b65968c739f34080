use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("state count mismatch: automaton has {automaton} states, configuration has {config}")]
    StateMismatch { automaton: usize, config: usize },
    #[error("symbol {symbol} is out of range for {states} states")]
    SymbolOutOfRange { symbol: u64, states: usize },
    #[error("configuration word must be non-empty")]
    EmptyConfig,
    #[error("requested radius {requested} is smaller than the current radius {current}")]
    RadiusTooSmall { requested: usize, current: usize },
    #[error("rule table of {entries} entries exceeds the limit of {limit}; lower the radius or use sampling")]
    TableTooLarge { entries: u128, limit: u128 },
    #[error("rule table has {actual} entries, expected {expected}")]
    TableLength { expected: usize, actual: usize },
    #[error("state count {states} is not a perfect {m}-th power")]
    NotPerfectPower { states: usize, m: usize },
    #[error("state count overflow")]
    StateOverflow,
    #[error("map role mismatch: {0}")]
    RoleMismatch(String),
    #[error("map shape mismatch: map is {source_count} -> {target_count}, expected {expected_source} -> {expected_target}")]
    MapShape {
        source_count: usize,
        target_count: usize,
        expected_source: usize,
        expected_target: usize,
    },
    #[error("{states} states exceed the enumeration guard of {limit}; use the bounded variant")]
    EnumerationGuard { states: usize, limit: usize },
    #[error("automaton is not injective")]
    NotInjective,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error(transparent)]
    Parse(#[from] crate::format::ParseError),
}

pub type Result<T> = std::result::Result<T, Error>;
