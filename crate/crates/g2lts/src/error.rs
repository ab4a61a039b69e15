use thiserror::Error;

/// Errors raised by the library. Variants follow the failure classes of the
/// operations: shape mismatches, domain violations, failed validation of
/// structured input, and unsupported descriptors.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum G2Error {
    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("validation failed: {0}")]
    Validation(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("invalid descriptor: {0}")]
    Descriptor(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("numerically unstable: {0}")]
    Unstable(String),

    #[error("construction failed: {0}")]
    Construction(String),

    #[error("unrecognized subspace: {0}")]
    Unrecognized(String),
}

pub type Result<T> = std::result::Result<T, G2Error>;

pub(crate) fn shape(msg: impl Into<String>) -> G2Error {
    G2Error::Shape(msg.into())
}

pub(crate) fn domain(msg: impl Into<String>) -> G2Error {
    G2Error::Domain(msg.into())
}
