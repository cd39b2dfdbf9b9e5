use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix contains a non-finite entry")]
    NonFinite,

    #[error("expected a square matrix, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid tolerance `{name}`: {value} (must be finite and > 0)")]
    InvalidTolerance { name: &'static str, value: f64 },

    #[error("matrix is not symmetric/Hermitian (relative residual {residual:.3e})")]
    NotSymmetric { residual: f64 },

    #[error("matrix is not antisymmetric (relative residual {residual:.3e})")]
    NotAntisymmetric { residual: f64 },

    #[error("form is not positive-definite (smallest eigenvalue {min_eigenvalue:.6e})")]
    NotPositive { min_eigenvalue: f64 },

    #[error("not a complex structure: |J^2 + 1| = {residual:.3e}")]
    NotComplexStructure { residual: f64 },

    #[error("complex structure needs an even dimension, got {dim}")]
    OddDimension { dim: usize },

    #[error("operator is not self-adjoint for the metric (relative residual {residual:.3e})")]
    NotSelfAdjoint { residual: f64 },

    #[error("metric is not positive-definite")]
    SingularMetric,

    #[error("operator has a negative eigenvalue {eigenvalue:.6e}")]
    NegativeSpectrum { eigenvalue: f64 },

    #[error("starting vector is zero")]
    ZeroVector,

    #[error("not admissible: {0}")]
    NotAdmissible(String),

    #[error("symplectic form is degenerate (relative smallest singular value {ratio:.3e})")]
    DegenerateSymplectic { ratio: f64 },

    #[error("operator B is not skew for g (relative residual {residual:.3e})")]
    NotSkew { residual: f64 },

    #[error("spectrum is degenerate: cluster {cluster} has multiplicity {multiplicity}")]
    Degenerate { cluster: usize, multiplicity: usize },

    #[error("coefficient {index} is zero")]
    ZeroCoefficient { index: usize },

    #[error("operator does not commute with G (relative commutator {residual:.3e})")]
    NotInCommutant { residual: f64 },

    #[error("forms are not in generic position: fiber {fiber} has dimension {dim}")]
    NotGeneric { fiber: usize, dim: usize },

    #[error("connecting operator invariant violated: {0}")]
    InvariantViolation(String),

    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),

    #[error("numerical failure: {0}")]
    Numerical(String),
}
