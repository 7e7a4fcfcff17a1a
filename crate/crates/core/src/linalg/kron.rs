use super::{LinalgError, Matrix};
use crate::Scalar;

/// Default upper bound on the number of entries a Kronecker product may have.
pub const DEFAULT_KRON_CAP: usize = 1 << 24;

/// Kronecker product `m ⊗ n`: block `(i, j)` is `m[i, j] · n`.
pub fn kron<T: Scalar>(m: &Matrix<T>, n: &Matrix<T>) -> Result<Matrix<T>, LinalgError> {
    kron_capped(m, n, DEFAULT_KRON_CAP)
}

pub fn kron_capped<T: Scalar>(m: &Matrix<T>, n: &Matrix<T>, cap: usize) -> Result<Matrix<T>, LinalgError> {
    let rows = m.rows().checked_mul(n.rows());
    let cols = m.cols().checked_mul(n.cols());
    let requested = rows.zip(cols).and_then(|(r, c)| r.checked_mul(c)).unwrap_or(usize::MAX);
    if requested > cap {
        return Err(LinalgError::SizeCap { requested, cap });
    }
    let (nr, nc) = n.shape();
    Ok(Matrix::from_fn(m.rows() * nr, m.cols() * nc, |i, j| {
        m.get(i / nr, j / nc) * n.get(i % nr, j % nc)
    }))
}

/// Column-stacking: the columns of `m` concatenated top to bottom.
pub fn vec<T: Scalar>(m: &Matrix<T>) -> Matrix<T> {
    let (r, c) = m.shape();
    Matrix::from_fn(r * c, 1, |k, _| m.get(k % r, k / r))
}

/// Inverse of [`vec`].
pub fn unvec<T: Scalar>(v: &Matrix<T>, rows: usize, cols: usize) -> Result<Matrix<T>, LinalgError> {
    if v.cols() != 1 || rows == 0 || cols == 0 || v.rows() != rows * cols {
        return Err(LinalgError::DimensionMismatch { op: "unvec", left: v.shape(), right: (rows, cols) });
    }
    Ok(Matrix::from_fn(rows, cols, |i, j| v.get(j * rows + i, 0)))
}

pub fn entrywise_abs<T: Scalar>(m: &Matrix<T>) -> Matrix<T> {
    m.map(T::abs)
}
