use thiserror::Error;

/// Errors produced anywhere in the census pipeline.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("unsupported type label `{0}`")]
    UnsupportedType(String),

    /// (type, q) pairs for which the derived subgroup of U^F is not U_0^F.
    #[error("{label}({q}) is excluded from the Borel parametrization")]
    ExcludedGroup { label: String, q: u64 },

    #[error("{what}: {value} exceeds the configured bound {bound}")]
    BoundExceeded {
        what: &'static str,
        value: String,
        bound: String,
    },

    #[error("endomorphism is not well defined on the group: {0}")]
    NotWellDefined(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("center of order {0} is neither trivial nor of prime order")]
    NonPrimeCenter(u64),

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("census mismatch: {0}")]
    CensusMismatch(String),

    #[error("no orbit-size preserving matching: {0}")]
    NoMatching(String),

    #[error("no stable representative: {0}")]
    NoStableRepresentative(String),

    #[error("invalid automorphism: {0}")]
    InvalidAutomorphism(String),

    #[error("internal error: {0}")]
    Internal(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
