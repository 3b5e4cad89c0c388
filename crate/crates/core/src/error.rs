use thiserror::Error;

/// Errors raised by the exact pipeline.
///
/// Variants that signal an internal inconsistency (`NonIntegral`,
/// `CrossCheck`, `NonTerminating`, `InterpolationMismatch`) are never expected
/// on valid input; the CLI maps them to a distinct exit code.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("value is not rational: {0}")]
    NonRational(String),
    #[error("value is not an integer: {0}")]
    NonIntegral(String),
    #[error("rational function denominator must be nonzero with nonzero constant term")]
    BadDenominator,
    #[error("h* series does not terminate: coefficient of t^{degree} is {value}")]
    NonTerminating { degree: usize, value: String },
    #[error("quasipolynomial interpolation mismatch at m = {m}: expected {expected}, got {got}")]
    InterpolationMismatch { m: usize, expected: String, got: String },
    #[error(
        "polytope is not full-dimensional (affine dim {affine_dim} < ambient dim {ambient_dim}); re-coordinatize first"
    )]
    Degenerate { affine_dim: usize, ambient_dim: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("point is outside the span of the sublattice")]
    OutsideSpan,
    #[error("free sum summand does not contain the origin")]
    OriginMissing,
    #[error("vector {0} is not fixed by the group")]
    NotFixed(String),
    #[error("group element {element} does not map the polytope to a lattice translate of itself")]
    NotInvariant { element: usize },
    #[error("group closure exceeded {0} elements")]
    GroupTooLarge(usize),
    #[error("matrix is not invertible over the integers")]
    NotUnimodular,
    #[error("character table mismatch: {0}")]
    TableMismatch(String),
    #[error("no character table attached to the group")]
    NoCharacterTable,
    #[error("integer overflow in {0}")]
    Overflow(&'static str),
    #[error("cross-check failed: {0}")]
    CrossCheck(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
