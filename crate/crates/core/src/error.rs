use thiserror::Error;

/// Errors shared by every module in this crate.
///
/// Failed verification is never an `Error`: the checker reports verdicts.
/// Errors mean the computation itself could not be carried out or the
/// input was structurally unusable.
#[derive(Debug, Error)]
pub enum Error {
    /// A precondition on an argument was violated.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A string did not match the rational number grammar.
    #[error("cannot parse rational {input:?}: {reason}")]
    ParseRational { input: String, reason: String },

    /// A certificate file or JSON document is structurally invalid.
    #[error("malformed certificate: {0}")]
    Malformed(String),

    /// A floating-point computation failed to produce a usable result.
    #[error("numerical failure: {0}")]
    Numerical(String),

    /// The Galerkin space has too few terms to produce a negative window.
    #[error("basis too small for m = {m}: the approximate quadratic in b has no negative window")]
    BasisTooSmall { m: u32 },

    /// The negative window contains no pair of distinct integers.
    #[error("window too narrow: no integer pair survives inside ({lo}, {hi})")]
    WindowTooNarrow { lo: f64, hi: f64 },

    /// The exact endpoint evaluation rejected a candidate interval.
    #[error("candidate interval rejected for m = {m}: {detail}")]
    Rejected { m: u32, detail: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
