use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("state count {d} outside supported range [2, {cap}]")]
    InvalidStateCount { d: u64, cap: u64 },

    #[error("state {value} out of range for d = {d}")]
    StateOutOfRange { value: u64, d: u32 },

    #[error("malformed rule text {text:?}: {reason}")]
    ParseRule { text: String, reason: String },

    #[error("malformed configuration {text:?}: {reason}")]
    ParseConfiguration { text: String, reason: String },

    #[error("configuration must have at least one cell")]
    EmptyConfiguration,

    #[error("state count mismatch: rule has d = {rule}, configuration has d = {config}")]
    StateCountMismatch { rule: u32, config: u32 },

    #[error("code {code} out of range for {d}^{n} configurations")]
    CodeOutOfRange { code: u64, d: u32, n: usize },

    #[error("{d}^{n} configurations do not fit in a 64-bit code")]
    EncodingOverflow { d: u32, n: usize },

    #[error("{d}^{n} configurations exceed the node budget of {cap}")]
    BudgetExceeded { d: u32, n: usize, cap: u64 },

    #[error("{d}^{n_max} configurations exceed the node budget of {cap}; largest feasible n is {largest_feasible:?}")]
    RangeBudgetExceeded { d: u32, n_max: usize, cap: u64, largest_feasible: Option<usize> },

    #[error("empty lattice-size range [{n_min}, {n_max}]")]
    EmptyRange { n_min: usize, n_max: usize },

    #[error("mixed state counts in one rule stream: expected d = {expected}, found d = {found}")]
    MixedStateCounts { expected: u32, found: u32 },

    #[error("reversible rule count for d = {d} does not fit in 128 bits")]
    CountOverflow { d: u32 },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
