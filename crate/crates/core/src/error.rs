use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("blocks must be nonempty")]
    EmptyBlock,

    #[error("point {point} does not belong to the window")]
    DomainMismatch { point: String },

    #[error("distance from {from} to {to} is not determinable inside the enumerated ball of radius {radius}")]
    OutOfWindow {
        from: String,
        to: String,
        radius: u32,
    },

    #[error("resource cap `{cap}` exceeded: limit {limit}, needed at least {requested}")]
    ResourceCap {
        cap: &'static str,
        limit: u64,
        requested: u64,
    },

    #[error("degenerate action: every generator fixes the basepoint on a space of {space_points} points")]
    DegenerateAction { space_points: usize },

    #[error("scale sequence too short: index {index} requested, {available} scales available and no extension rule")]
    InsufficientScales { index: usize, available: usize },

    #[error("invalid scale sequence: {0}")]
    InvalidScales(String),

    #[error("index pair ({i}, {j}) is out of range for n = {n}")]
    IndexDomain { i: usize, j: usize, n: usize },

    #[error("preimage of block {block} is empty inside the group window")]
    EmptyPreimage { block: String },

    #[error("precondition failed: {condition}: {detail}")]
    Precondition { condition: String, detail: String },

    #[error("internal consistency failure: {0}")]
    Consistency(String),

    #[error("unsupported scenario: {0}")]
    Unsupported(String),

    #[error("construction failed: {0}")]
    ConstructionFailed(String),

    #[error("invalid distance: {0}")]
    InvalidDistance(String),

    #[error("cannot parse `{text}` as {what}")]
    Parse { what: &'static str, text: String },

    #[error("validation error: {0}")]
    Validation(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn parse(what: &'static str, text: impl Into<String>) -> Self {
        Error::Parse {
            what,
            text: text.into(),
        }
    }

    pub(crate) fn precondition(condition: impl Into<String>, detail: impl Into<String>) -> Self {
        Error::Precondition {
            condition: condition.into(),
            detail: detail.into(),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}
