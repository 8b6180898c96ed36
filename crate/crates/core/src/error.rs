use thiserror::Error;

use crate::operator::DensityOperator;

/// Errors raised by operator construction and the detection/attack routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is empty")]
    Empty,

    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error(
        "symmetry violation: max |A_ij - conj(A_ji)| = {deviation:.3e} exceeds {tolerance:.1e}"
    )]
    NotHermitian { deviation: f64, tolerance: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("trace must be 1 within {tolerance:.1e}, got {trace}")]
    InvalidTrace { trace: f64, tolerance: f64 },

    #[error("operator is not positive semidefinite: eigenvalue {index} is {eigenvalue:.6e}")]
    NotPositive { index: usize, eigenvalue: f64 },

    #[error("operator has no eigenvalue above {eps:.1e}; its support is empty")]
    EmptySupport { eps: f64 },

    #[error("Tr(AB) has imaginary residue {residue:.3e}")]
    ImaginaryTrace { residue: f64 },

    #[error("priors must be nonnegative with c1 > 0 and c0 + c1 = 1, got c0 = {c0}, c1 = {c1}")]
    InvalidPriors { c0: f64, c1: f64 },

    #[error("lambda must satisfy lambda > 0 (finite), got {0}")]
    InvalidLambda(f64),

    #[error("operator is not an orthogonal projector: ||P^2 - P||_F = {residual:.3e}")]
    NotProjector { residual: f64 },

    #[error("Kraus operators are not complete: ||sum E^dag E - 1||_F = {residual:.3e}")]
    Incomplete { residual: f64 },

    #[error("Kraus channel has no operators")]
    NoOperators,

    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error(
        "oracle did not converge after {iterations} iterations (gradient norm {gradient_norm:.3e})"
    )]
    OracleNotConverged {
        iterations: usize,
        gradient_norm: f64,
        best: Box<DensityOperator>,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
