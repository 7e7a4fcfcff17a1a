use serde::Serialize;

use super::LinalgError;
use crate::Scalar;

/// Dense real matrix stored row-major.
///
/// Both dimensions are at least one and every entry is finite; the checked
/// constructors enforce this. Arithmetic helpers assume finite inputs and do
/// not re-validate their outputs.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> Matrix<T> {
    /// Builds a matrix from row-major data, validating shape and finiteness.
    pub fn from_row_major(rows: usize, cols: usize, data: Vec<T>) -> Result<Self, LinalgError> {
        if rows == 0 || cols == 0 {
            return Err(LinalgError::EmptyDimension { rows, cols });
        }
        let expected = rows
            .checked_mul(cols)
            .ok_or(LinalgError::SizeCap { requested: usize::MAX, cap: usize::MAX })?;
        if data.len() != expected {
            return Err(LinalgError::DataLength { expected, found: data.len() });
        }
        if let Some(index) = data.iter().position(|x| !x.is_finite()) {
            return Err(LinalgError::NonFinite { row: index / cols, col: index % cols });
        }
        Ok(Self { rows, cols, data })
    }

    /// Builds a matrix from nested rows. All rows must have equal length.
    pub fn from_rows<R: AsRef<[T]>>(rows: &[R]) -> Result<Self, LinalgError> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.as_ref().len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            let row = row.as_ref();
            if row.len() != c {
                return Err(LinalgError::DataLength { expected: c, found: row.len() });
            }
            data.extend_from_slice(row);
        }
        Self::from_row_major(r, c, data)
    }

    /// Column vector from a slice.
    pub fn column(values: &[T]) -> Result<Self, LinalgError> {
        Self::from_row_major(values.len(), 1, values.to_vec())
    }

    /// Single-entry matrix.
    pub fn scalar(value: T) -> Result<Self, LinalgError> {
        Self::from_row_major(1, 1, vec![value])
    }

    pub(crate) fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        Self { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        assert!(n > 0, "matrix dimensions must be positive");
        Self::from_fn(n, n, |i, j| if i == j { T::one() } else { T::zero() })
    }

    /// Square diagonal matrix with the given diagonal.
    pub fn from_diagonal(diag: &[T]) -> Result<Self, LinalgError> {
        if diag.is_empty() {
            return Err(LinalgError::EmptyDimension { rows: 0, cols: 0 });
        }
        if let Some(i) = diag.iter().position(|x| !x.is_finite()) {
            return Err(LinalgError::NonFinite { row: i, col: i });
        }
        let n = diag.len();
        Ok(Self::from_fn(n, n, |i, j| if i == j { diag[i] } else { T::zero() }))
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    #[inline]
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Row-major entries.
    #[inline]
    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<T> {
        self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> T {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub(crate) fn set(&mut self, i: usize, j: usize, value: T) {
        self.data[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub fn matmul(&self, other: &Self) -> Result<Self, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::DimensionMismatch {
                op: "matmul",
                left: self.shape(),
                right: other.shape(),
            });
        }
        let mut out = vec![T::zero(); self.rows * other.cols];
        for i in 0..self.rows {
            let out_row = &mut out[i * other.cols..(i + 1) * other.cols];
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == T::zero() {
                    continue;
                }
                for (o, &b) in out_row.iter_mut().zip(other.row(k)) {
                    *o = *o + a * b;
                }
            }
        }
        Ok(Self { rows: self.rows, cols: other.cols, data: out })
    }

    fn zip_with(&self, other: &Self, op: &'static str, f: impl Fn(T, T) -> T) -> Result<Self, LinalgError> {
        if self.shape() != other.shape() {
            return Err(LinalgError::DimensionMismatch { op, left: self.shape(), right: other.shape() });
        }
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f(a, b)).collect();
        Ok(Self { rows: self.rows, cols: self.cols, data })
    }

    pub fn add(&self, other: &Self) -> Result<Self, LinalgError> {
        self.zip_with(other, "add", |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, LinalgError> {
        self.zip_with(other, "sub", |a, b| a - b)
    }

    pub fn scale(&self, factor: T) -> Self {
        self.map(|x| x * factor)
    }

    pub fn map(&self, f: impl Fn(T) -> T) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&x| f(x)).collect() }
    }

    /// Multiplies row `i` by `diag[i]`, i.e. `diag(d) * self`.
    pub fn scale_rows(&self, diag: &[T]) -> Result<Self, LinalgError> {
        if diag.len() != self.rows {
            return Err(LinalgError::DimensionMismatch {
                op: "scale_rows",
                left: (diag.len(), diag.len()),
                right: self.shape(),
            });
        }
        Ok(Self::from_fn(self.rows, self.cols, |i, j| diag[i] * self.get(i, j)))
    }

    /// Square submatrix on the given index set.
    pub fn principal_submatrix(&self, indices: &[usize]) -> Self {
        let k = indices.len();
        Self::from_fn(k, k, |i, j| self.get(indices[i], indices[j]))
    }

    pub fn frobenius_norm(&self) -> T {
        // scaled to avoid overflow on large entries
        let scale = self.max_abs();
        if scale == T::zero() {
            return T::zero();
        }
        let sum: T = self.data.iter().map(|&x| (x / scale) * (x / scale)).sum();
        scale * sum.sqrt()
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> T {
        self.data.iter().fold(T::zero(), |m, &x| m.max(x.abs()))
    }

    /// Largest absolute entry of each row.
    pub fn row_max_abs(&self) -> Vec<T> {
        (0..self.rows)
            .map(|i| self.row(i).iter().fold(T::zero(), |m, &x| m.max(x.abs())))
            .collect()
    }

    pub fn is_nonnegative(&self) -> bool {
        self.data.iter().all(|&x| x >= T::zero())
    }

    /// Converts to another scalar type, entry by entry.
    pub fn cast<U: Scalar>(&self) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&x| U::lit(x.to_f64_lossy())).collect(),
        }
    }
}
