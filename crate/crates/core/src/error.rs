use thiserror::Error;

/// Errors raised by the core library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("schema error in `{field}`: {message}")]
    Schema { field: String, message: String },

    #[error("degenerate rule: {0}")]
    DegenerateRule(String),

    #[error("rule is invalid: {0}")]
    InvalidRule(String),

    #[error("inconsistent rule: {0}")]
    InconsistentRule(String),

    #[error("gluing failed: {0}")]
    Gluing(String),

    #[error("level {requested} is not available (built up to {available})")]
    LevelUnavailable { requested: u32, available: u32 },

    #[error("level {requested} exceeds the configured cap {cap}")]
    LevelCap { requested: u32, cap: u32 },

    #[error("address depth {depth} is too shallow for level {needed}")]
    DepthExhausted { depth: usize, needed: usize },

    #[error("address depth {needed} exceeds the window of {window} levels")]
    DepthBudgetExceeded { needed: usize, window: usize },

    #[error("base point is not generic: {0}")]
    NonGenericBasePoint(String),

    #[error("no level up to {max_level} has tiles avoiding disjoint boundary edges")]
    ExpansionNotEstablished { max_level: u32 },

    #[error("the rule has a periodic critical point")]
    PeriodicCriticalPresent,

    #[error("the point set is empty")]
    EmptySet,

    #[error("invalid cell reference: {0}")]
    InvalidCell(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
