use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("metric is not positive definite")]
    NotPositiveDefinite,
    #[error("value has no exact square root on the rational backend: {0}")]
    NotPerfectSquare(String),
    #[error("3-form is not stable (hitchin invariant {0} is not negative)")]
    NotStable(String),
    #[error("omega and re_omega are incompatible: omega ^ re_omega != 0")]
    Incompatible,
    #[error("2-form is degenerate")]
    Degenerate,
    #[error("induced metric is indefinite")]
    IndefiniteMetric,
    #[error("jet cannot be matched by torsion classes: {0}")]
    DecompositionInconsistent(String),
    #[error("4-form is not of invariant shape: {0}")]
    NotInvariantShape(String),
    #[error("p and q must be positive: {0}")]
    NonPositivePQ(String),
    #[error("inconsistent vertical data: {0}")]
    InconsistentVerticalData(String),
    #[error("degenerate constants, p0 and q0 must be positive: {0}")]
    DegenerateConstants(String),
    #[error("grid charts do not match: {0}")]
    ChartMismatch(String),
    #[error("sample point outside chart domain: {0}")]
    PatchDomain(String),
    #[error("field is not invariant along the fibre directions")]
    NotInvariant,
    #[error("kahler vector is orthogonal to everything (Qk = 0)")]
    DegenerateKahler,
    #[error("no solutions: {0}")]
    NoSolutions(String),
    #[error("inconsistent cup-rank table: {0}")]
    InconsistentRanks(String),
    #[error("integer overflow in lattice arithmetic")]
    Overflow,
    #[error("malformed input: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
