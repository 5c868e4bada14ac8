use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid quadratic form: {0}")]
    InvalidForm(String),
    #[error("degenerate form or lattice: {0}")]
    Degenerate(String),
    #[error("element is not a mirror")]
    NotMirror,
    #[error("element mixes primary components")]
    MixedPrimary,
    #[error("2-norm undefined for a mirror with square 0 mod 1")]
    UndefinedNorm,
    #[error("kernel is not isotropic")]
    NotIsotropic,
    #[error("unsupported case for {set}: {reason}")]
    Unsupported { set: String, reason: String },
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("reference data: {0}")]
    Data(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;
