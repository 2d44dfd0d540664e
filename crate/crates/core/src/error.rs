use thiserror::Error;

/// Errors raised by fan computations and surgeries.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("zero vector has no primitive direction")]
    ZeroVector,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("target sum is not in the span of the basis")]
    NotInSpan,
    #[error("malformed input: {0}")]
    MalformedInput(String),
    #[error("fan is not complete: {0}")]
    NotComplete(String),
    #[error("not a wall: {0}")]
    NotAWall(String),
    #[error("wall {0:?} is not extremal")]
    NotExtremal(Vec<usize>),
    #[error("center {0:?} is not a face of any maximal cone")]
    NotAFace(Vec<usize>),
    #[error("generator of ray {ray} is not the sum of rays {decomposition:?}")]
    SumMismatch {
        ray: usize,
        decomposition: Vec<usize>,
    },
    #[error("star of ray {0} is not an inverse star-subdivision pattern: {1}")]
    BadStarShape(usize, String),
    #[error("blow-down produces a singular cone {0:?}")]
    ResultSingular(Vec<usize>),
    #[error("blow-up record has no exceptional fiber wall")]
    NoFiberWall,
    #[error("invariant violation: {0}")]
    InvariantViolation(String),
    #[error("suspension vector does not match the generator of ray {0}")]
    VMismatch(usize),
    #[error("no divisor ray contains the curve {0:?}")]
    NoSuitableDivisor(Vec<usize>),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("unknown gallery entry {0:?}")]
    UnknownName(String),
    #[error("bad parameters for {name}: {reason}")]
    BadParams { name: String, reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;
