use thiserror::Error;

use crate::order::SpaceTag;

/// Everything that can go wrong in the library.
///
/// `Parse` is kept apart from the domain variants so that front ends can map
/// malformed input and rejected input to different exit codes.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("space mismatch: expected {expected}, found {found}")]
    TagMismatch { expected: SpaceTag, found: SpaceTag },
    #[error("invalid point: {0}")]
    InvalidPoint(String),
    #[error("order violation: {lo} > {hi}")]
    OrderViolation { lo: String, hi: String },
    #[error("empty input")]
    EmptyInput,
    #[error("empty open piece: {0}")]
    EmptyPiece(String),
    #[error("tuple entries are not non-decreasing at index {0}")]
    NotNonDecreasing(usize),
    #[error("tuple of odd length {0}")]
    OddLength(usize),
    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("union has {components} components, more than m = {m}")]
    TooManyComponents { components: usize, m: usize },
    #[error("finite set has {0} elements, bridge needs at most 2")]
    SetTooLarge(usize),
    #[error("union has {0} components, bridge needs exactly 1")]
    NotSingleComponent(usize),
    #[error("operation requires the double arrow space")]
    ArrowOnly,
    #[error("interval {0} is not clopen")]
    NotClopen(String),
    #[error("point {point} is not in {interval}")]
    NotInInterval { point: String, interval: String },
    #[error("union is not in [V]")]
    NotInLower,
    #[error("union does not meet V")]
    NotInUpper,
    #[error("upper-box construction needs exactly one basic piece, got {0}")]
    NotSinglePiece(usize),
    #[error("pieces do not partition the space: {0}")]
    PartitionViolation(String),
    #[error("invalid affine piece: {0}")]
    InvalidPiece(String),
    #[error("invalid convergent sequence: {0}")]
    InvalidSequence(String),
    #[error("no convergence modulus: {0}")]
    ModulusError(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("image is not a finite union of closed intervals: {0}")]
    NotClosedUnion(String),
    #[error("trials must be at least 1")]
    NoTrials,
}

impl Error {
    pub fn is_parse(&self) -> bool {
        matches!(self, Error::Parse(_))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
