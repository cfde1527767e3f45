use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("agent index {index} out of range for side of size {n}")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("strict order is not a permutation of 0..{n}: {reason}")]
    InvalidOrder { n: usize, reason: String },

    #[error("preference relation contains self-pair ({0}, {0})")]
    SelfPair(usize),

    #[error("instance is malformed: {0}")]
    InvalidInstance(String),

    #[error("matching is malformed: {0}")]
    InvalidMatching(String),

    #[error("pair (man {man}, woman {woman}) is not acceptable")]
    UnacceptablePair { man: usize, woman: usize },

    #[error("operation requires asymmetric preferences")]
    NotAsymmetric,

    #[error("vector does not lie in the stability polytope")]
    InfeasiblePoint,

    #[error("rounding collision: men {0} and {1} both select woman {2}")]
    RoundingCollision(usize, usize, usize),

    #[error("enumeration budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
}
