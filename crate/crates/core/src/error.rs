use thiserror::Error;

use crate::weights::MultiIndex;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("weight matrix has no rows")]
    EmptyMatrix,

    #[error("weight matrix has rows of length zero")]
    ZeroRank,

    #[error("ragged weight matrix: row {row} has length {found}, expected {expected}")]
    RaggedRows {
        row: usize,
        expected: usize,
        found: usize,
    },

    #[error("action is not admissible: z^{witness} is an invariant monomial")]
    Inadmissible { witness: MultiIndex },

    #[error("dimension mismatch in {context}: expected {expected}, found {found}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("machine integer overflow in {0}")]
    Overflow(&'static str),

    #[error("invalid weights: {0}")]
    InvalidWeights(String),

    #[error("determinant of a {n}x{n} Jacobian exceeds the supported size {max}")]
    SizeLimit { n: usize, max: usize },

    #[error("invalid domain: {0}")]
    InvalidDomain(String),

    #[error("acceptance ratio {ratio:e} after {candidates} candidates is below 1e-6; domain spec looks degenerate")]
    DegenerateDomain { ratio: f64, candidates: u64 },

    #[error("no exact inverse available for the map")]
    MissingInverse,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("internal invariant violated: {0}")]
    InvariantViolation(String),
}
