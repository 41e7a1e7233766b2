use alloc::string::String;

use crate::point::Point;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("unsupported dimension {0}: exact geometry is limited to 1 <= d <= 3")]
    UnsupportedDimension(usize),

    #[error("window too small: {0}")]
    WindowTooSmall(String),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("vector {0} is not generated by the first-return set within the search budget")]
    NotGenerated(Point),

    #[error("substitution is not primitive")]
    NotPrimitive,

    #[error("no fixed-point seed found up to power {0}; supply an explicit seed configuration")]
    NoFixedPointSeed(usize),

    #[error("point {0} is not reachable within the computed levels; raise max_level")]
    Unreachable(Point),

    #[error("too few levels: need at least {needed}, have {have}")]
    TooFewLevels { needed: usize, have: usize },

    #[error("first-return set is empty")]
    EmptyFirstReturns,

    #[error("candidate set is empty")]
    EmptyCandidates,

    #[error("arithmetic overflow in exact computation")]
    Overflow,

    #[error("invariant violated: {0}")]
    Invariant(String),
}
