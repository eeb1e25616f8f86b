use thiserror::Error;


pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed document: {0}")]
    MalformedDocument(String),

    #[error("schema violation: {0}")]
    SchemaViolation(String),

    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    #[error("duplicate occurrence {occurrence} in equation {equation}")]
    DuplicateOccurrence { equation: usize, occurrence: String },

    #[error("equation {0} does not exist")]
    UnknownEquation(usize),

    #[error("equation {0} is not exposed with respect to the matching")]
    NotExposed(usize),

    #[error("invalid matching: {0}")]
    InvalidMatching(String),

    #[error("inconsistent reach report: {0}")]
    InconsistentReport(String),

    #[error("root {0} is not a node of the graph")]
    RootNotInGraph(usize),

    #[error("invalid digraph: {0}")]
    InvalidDigraph(String),

    #[error("arc ({0}, {1}) is not in the connection graph")]
    ArcNotInGraph(usize, usize),

    #[error("brute-force oracle cap exceeded: {0}")]
    CapExceeded(String),

    #[error("arborescence count overflows 128-bit arithmetic")]
    CountOverflow,

    #[error("scenario size must be at least 2, got {0}")]
    BadSize(usize),

    #[error("naive enumeration limit exceeded after {0} steps")]
    LimitExceeded(u64),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
