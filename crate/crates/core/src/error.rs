use num_bigint::BigInt;
use thiserror::Error;

/// Errors produced by the construction, evaluation and verification routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("enumeration of {count} elements exceeds the cap of {cap}")]
    CapExceeded { count: String, cap: u64 },

    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("square root of negative rational {0}")]
    NegativeSqrt(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    /// A combination could not be bounded away from zero. Either the
    /// input is Q-dependent or it is numerically indistinguishable from
    /// a dependent one at the given precision.
    #[error("independence unresolved at precision {precision_bits}: combination {combination:?} could not be bounded away from 0")]
    IndependenceUnresolved {
        precision_bits: u32,
        combination: Vec<i64>,
    },

    /// Exactly rational vectors satisfying an integer relation.
    #[error("independence unresolved: theta is Q-dependent, relation {combination:?} . Theta = 0")]
    RationalDependence { combination: Vec<BigInt> },

    #[error("precision exhausted at {precision_bits} bits: {what}")]
    PrecisionExhausted { precision_bits: u32, what: String },

    #[error("uncertified modulus q = {q}: certification requires q >= {required}")]
    UncertifiedModulus { q: String, required: String },

    #[error("duplicate point {0}")]
    DuplicatePoint(String),

    #[error("theta must be positive: {0}")]
    NonPositiveTheta(String),

    #[error(
        "enumeration of {total} sets exceeds the limit {limit} and no sampling seed was given"
    )]
    LimitExceeded { total: String, limit: u64 },
}

pub type Result<T> = std::result::Result<T, Error>;
