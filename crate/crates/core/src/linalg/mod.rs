//! Dense real linear algebra written against [`Scalar`](crate::Scalar).
//!
//! Everything here is a pure function of its inputs: LU with partial
//! pivoting, determinants with a tolerance band, Kronecker products and the
//! column-stacking `vec` operator, singular-value extremes via one-sided
//! Jacobi, and two spectral-radius estimators.

mod kron;
mod lu;
mod matrix;
mod spectral;
mod svd;

use thiserror::Error;

pub use kron::{entrywise_abs, kron, kron_capped, unvec, vec, DEFAULT_KRON_CAP};
pub use lu::{affine_solution_set, det, det_classified, lu_factor, solve, AffineSolution, DetClass, LuFactorization};
pub use matrix::Matrix;
pub use spectral::{spectral_radius_general, spectral_radius_nonneg, POWER_MAX_ITER};
pub use svd::{singular_extremes, singular_values, SingularExtremes};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LinalgError {
    #[error("matrix dimensions must be positive, got {rows}x{cols}")]
    EmptyDimension { rows: usize, cols: usize },
    #[error("expected {expected} entries, found {found}")]
    DataLength { expected: usize, found: usize },
    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("{op}: incompatible shapes {left:?} and {right:?}")]
    DimensionMismatch { op: &'static str, left: (usize, usize), right: (usize, usize) },
    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is singular (pivot {pivot} below tolerance)")]
    Singular { pivot: usize },
    #[error("result would have {requested} entries, cap is {cap}")]
    SizeCap { requested: usize, cap: usize },
    #[error("entry ({row}, {col}) = {value} is negative")]
    NegativeEntry { row: usize, col: usize, value: f64 },
    #[error("no convergence after {iterations} iterations (last estimate {estimate})")]
    NoConvergence { iterations: usize, estimate: f64 },
}

pub(crate) fn require_square<T: crate::Scalar>(m: &Matrix<T>) -> Result<usize, LinalgError> {
    if m.is_square() {
        Ok(m.rows())
    } else {
        Err(LinalgError::NotSquare { rows: m.rows(), cols: m.cols() })
    }
}
