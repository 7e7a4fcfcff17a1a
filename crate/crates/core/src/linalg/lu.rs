use std::cmp::Ordering;

use super::{require_square, LinalgError, Matrix};
use crate::Scalar;

/// `P·A = L·U` with unit-lower `L`, packed into a single buffer.
#[derive(Debug, Clone)]
pub struct LuFactorization<T> {
    n: usize,
    packed: Vec<T>,
    perm: Vec<usize>,
    sign: i8,
    singular_pivot: Option<usize>,
}

/// Factors a square matrix with partial pivoting.
///
/// A pivot is flagged when its magnitude is below `pivot_tol` times the
/// largest absolute entry of the input (an exactly zero pivot is always
/// flagged). Factorization continues past a flagged pivot so that `L`, `U`
/// still reconstruct the input.
pub fn lu_factor<T: Scalar>(m: &Matrix<T>) -> Result<LuFactorization<T>, LinalgError> {
    lu_factor_with_tol(m, T::PIVOT_TOL)
}

pub(crate) fn lu_factor_with_tol<T: Scalar>(
    m: &Matrix<T>,
    pivot_tol: T,
) -> Result<LuFactorization<T>, LinalgError> {
    let n = require_square(m)?;
    let threshold = pivot_tol * m.max_abs();
    let mut a = m.as_slice().to_vec();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut sign = 1i8;
    let mut singular_pivot = None;

    for k in 0..n {
        let (p, pmax) = (k..n)
            .map(|i| (i, a[i * n + k].abs()))
            .fold((k, T::zero()), |best, cur| if cur.1 > best.1 { cur } else { best });
        if p != k {
            for j in 0..n {
                a.swap(k * n + j, p * n + j);
            }
            perm.swap(k, p);
            sign = -sign;
        }
        if pmax == T::zero() || pmax < threshold {
            singular_pivot.get_or_insert(k);
        }
        if pmax == T::zero() {
            continue;
        }
        let pivot = a[k * n + k];
        for i in k + 1..n {
            let factor = a[i * n + k] / pivot;
            a[i * n + k] = factor;
            if factor != T::zero() {
                for j in k + 1..n {
                    a[i * n + j] = a[i * n + j] - factor * a[k * n + j];
                }
            }
        }
    }
    Ok(LuFactorization { n, packed: a, perm, sign, singular_pivot })
}

impl<T: Scalar> LuFactorization<T> {
    pub fn dim(&self) -> usize {
        self.n
    }

    /// Row `i` of `P·A` is row `permutation()[i]` of `A`.
    pub fn permutation(&self) -> &[usize] {
        &self.perm
    }

    /// Parity of the row permutation, `+1` or `-1`.
    pub fn sign(&self) -> i8 {
        self.sign
    }

    pub fn is_singular(&self) -> bool {
        self.singular_pivot.is_some()
    }

    /// First pivot index that fell under tolerance, if any.
    pub fn singular_pivot(&self) -> Option<usize> {
        self.singular_pivot
    }

    pub fn lower(&self) -> Matrix<T> {
        let n = self.n;
        Matrix::from_fn(n, n, |i, j| match i.cmp(&j) {
            Ordering::Greater => self.packed[i * n + j],
            Ordering::Equal => T::one(),
            Ordering::Less => T::zero(),
        })
    }

    pub fn upper(&self) -> Matrix<T> {
        let n = self.n;
        Matrix::from_fn(n, n, |i, j| if i <= j { self.packed[i * n + j] } else { T::zero() })
    }

    pub fn permutation_matrix(&self) -> Matrix<T> {
        let n = self.n;
        Matrix::from_fn(n, n, |i, j| if self.perm[i] == j { T::one() } else { T::zero() })
    }

    /// Product of pivots times the permutation sign; exactly zero when flagged singular.
    pub fn det(&self) -> T {
        if self.is_singular() {
            return T::zero();
        }
        let n = self.n;
        let prod = (0..n).fold(T::one(), |acc, i| acc * self.packed[i * n + i]);
        if self.sign < 0 {
            -prod
        } else {
            prod
        }
    }

    /// Solves `A·Z = rhs` column by column.
    pub fn solve(&self, rhs: &Matrix<T>) -> Result<Matrix<T>, LinalgError> {
        if let Some(pivot) = self.singular_pivot {
            return Err(LinalgError::Singular { pivot });
        }
        let n = self.n;
        if rhs.rows() != n {
            return Err(LinalgError::DimensionMismatch {
                op: "solve",
                left: (n, n),
                right: rhs.shape(),
            });
        }
        let cols = rhs.cols();
        let mut z = Matrix::zeros(n, cols);
        let mut y = vec![T::zero(); n];
        for c in 0..cols {
            for i in 0..n {
                let mut acc = rhs.get(self.perm[i], c);
                for (j, &yj) in y.iter().enumerate().take(i) {
                    acc = acc - self.packed[i * n + j] * yj;
                }
                y[i] = acc;
            }
            for i in (0..n).rev() {
                let mut acc = y[i];
                for j in i + 1..n {
                    acc = acc - self.packed[i * n + j] * z.get(j, c);
                }
                z.set(i, c, acc / self.packed[i * n + i]);
            }
        }
        Ok(z)
    }
}

pub fn det<T: Scalar>(m: &Matrix<T>) -> Result<T, LinalgError> {
    Ok(lu_factor(m)?.det())
}

/// Determinant with an explicit confidence class.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DetClass<T> {
    /// LU flagged a pivot under tolerance.
    Zero,
    /// Nonzero value whose magnitude is below the relative band.
    WithinTolerance(T),
    /// Confidently nonzero.
    Nonzero(T),
}

impl<T: Scalar> DetClass<T> {
    pub fn value(&self) -> T {
        match *self {
            DetClass::Zero => T::zero(),
            DetClass::WithinTolerance(v) | DetClass::Nonzero(v) => v,
        }
    }

    /// Sign of a confidently nonzero determinant.
    pub fn strict_sign(&self) -> Option<Ordering> {
        match *self {
            DetClass::Nonzero(v) if v > T::zero() => Some(Ordering::Greater),
            DetClass::Nonzero(_) => Some(Ordering::Less),
            _ => None,
        }
    }
}

/// Classifies `det(m)`: values under `SINGULAR_BAND` times the product of the
/// row max-norms are reported as singular within tolerance rather than signed.
pub fn det_classified<T: Scalar>(m: &Matrix<T>) -> Result<DetClass<T>, LinalgError> {
    let lu = lu_factor(m)?;
    if lu.is_singular() {
        return Ok(DetClass::Zero);
    }
    let d = lu.det();
    let scale = m.row_max_abs().into_iter().fold(T::one(), |acc, r| acc * r);
    if d.abs() < T::SINGULAR_BAND * scale {
        Ok(DetClass::WithinTolerance(d))
    } else {
        Ok(DetClass::Nonzero(d))
    }
}

pub fn solve<T: Scalar>(m: &Matrix<T>, rhs: &Matrix<T>) -> Result<Matrix<T>, LinalgError> {
    lu_factor(m)?.solve(rhs)
}

/// Solution set `{particular + N·z}` of a possibly singular square system.
#[derive(Debug, Clone)]
pub struct AffineSolution<T> {
    pub particular: Vec<T>,
    /// Basis of the numerical null space, one vector per free column.
    pub null_basis: Vec<Vec<T>>,
}

/// Gauss-Jordan elimination with complete pivoting on `m·x = rhs`.
///
/// Pivots below `rank_tol · max|m|` end the elimination. Returns `None` when
/// the remaining equations are inconsistent, judged by the residual of the
/// particular solution against `rank_tol · (‖m‖·‖x‖ + ‖rhs‖)`.
pub fn affine_solution_set<T: Scalar>(
    m: &Matrix<T>,
    rhs: &[T],
    rank_tol: T,
) -> Result<Option<AffineSolution<T>>, LinalgError> {
    let n = require_square(m)?;
    if rhs.len() != n {
        return Err(LinalgError::DimensionMismatch { op: "affine_solution_set", left: (n, n), right: (rhs.len(), 1) });
    }
    let threshold = rank_tol * m.max_abs();
    let mut a = m.as_slice().to_vec();
    let mut b = rhs.to_vec();
    let mut colperm: Vec<usize> = (0..n).collect();
    let mut rank = 0;

    for r in 0..n {
        let mut best = (r, r, T::zero());
        for i in r..n {
            for j in r..n {
                let v = a[i * n + j].abs();
                if v > best.2 {
                    best = (i, j, v);
                }
            }
        }
        let (pi, pj, pv) = best;
        if pv == T::zero() || pv <= threshold {
            break;
        }
        if pi != r {
            for j in 0..n {
                a.swap(r * n + j, pi * n + j);
            }
            b.swap(r, pi);
        }
        if pj != r {
            for i in 0..n {
                a.swap(i * n + r, i * n + pj);
            }
            colperm.swap(r, pj);
        }
        let pivot = a[r * n + r];
        for j in 0..n {
            a[r * n + j] = a[r * n + j] / pivot;
        }
        b[r] = b[r] / pivot;
        for i in 0..n {
            if i == r {
                continue;
            }
            let factor = a[i * n + r];
            if factor != T::zero() {
                for j in 0..n {
                    a[i * n + j] = a[i * n + j] - factor * a[r * n + j];
                }
                b[i] = b[i] - factor * b[r];
            }
        }
        rank += 1;
    }

    let mut particular = vec![T::zero(); n];
    for j in 0..rank {
        particular[colperm[j]] = b[j];
    }
    let null_basis = (rank..n)
        .map(|f| {
            let mut v = vec![T::zero(); n];
            v[colperm[f]] = T::one();
            for j in 0..rank {
                v[colperm[j]] = -a[j * n + f];
            }
            v
        })
        .collect();

    let x = Matrix::column(&particular)?;
    let rhs_m = Matrix::column(rhs)?;
    let resid = m.matmul(&x)?.sub(&rhs_m)?.frobenius_norm();
    let scale = m.frobenius_norm() * x.frobenius_norm() + rhs_m.frobenius_norm();
    if resid > rank_tol * scale.max(T::min_positive_value()) {
        return Ok(None);
    }
    Ok(Some(AffineSolution { particular, null_basis }))
}
