use thiserror::Error;

/// Everything that can go wrong while building or measuring a body.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum GeomError {
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("halfspace intersection is unbounded")]
    UnboundedRegion,
    #[error("halfspace intersection is empty")]
    EmptyRegion,
    #[error("direction vector is zero")]
    ZeroDirection,
    #[error("origin is not an interior point of the body")]
    OriginNotInterior,
    #[error("linear map is singular (|det| = {0:e})")]
    SingularMatrix(f64),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("body is not centrally symmetric")]
    NotCentrallySymmetric,
    #[error("body does not have tetrahedral symmetry")]
    NotSymmetric,
    #[error("point set is not closed under the group element")]
    NotClosed,
    #[error("point is not on the boundary (gauge = {0})")]
    NotOnBoundary(f64),
    #[error("no convergence after {0} iterations")]
    NoConvergence(usize),
    #[error("symmetry violation: {0}")]
    SymmetryViolation(String),
    #[error("certificate check `{check}` failed: lhs = {lhs}, rhs = {rhs}")]
    CertificateInvalid { check: String, lhs: f64, rhs: f64 },
    #[error("invariant violation: {0}")]
    InvariantViolation(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T, E = GeomError> = std::result::Result<T, E>;
