use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("empty ground set")]
    EmptyGroundSet,

    #[error("ground set of {0} points exceeds the finite capacity of {1}")]
    TooManyPoints(usize, usize),

    #[error("cover `{label}` is invalid: {reason}")]
    InvalidCover { label: String, reason: String },

    #[error("invalid multicover: {0}")]
    InvalidMulticover(String),

    #[error("point {0} is outside the ground set")]
    PointOutOfRange(String),

    #[error("search limit of {0} nodes hit before a decision")]
    SearchLimit(usize),

    #[error("state space limit of {0} memo entries exceeded")]
    StateLimit(usize),

    #[error("invalid game configuration: {0}")]
    InvalidConfig(String),

    #[error("strategy error: {0}")]
    Strategy(String),

    #[error("combinator precondition failed: {0}")]
    Precondition(String),

    #[error("invalid map: {0}")]
    InvalidMap(String),

    #[error("invalid group: {0}")]
    InvalidGroup(String),

    #[error("schedule violates condition ({condition}): {detail}")]
    Schedule { condition: String, detail: String },

    #[error("chain too short: {0}")]
    Range(String),

    #[error("corpus limits exceeded: {0}")]
    CorpusLimit(String),

    #[error("format error at `{pointer}`: {message}")]
    Format { pointer: String, message: String },
}

impl Error {
    pub fn format(pointer: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Format {
            pointer: pointer.into(),
            message: message.into(),
        }
    }
}
