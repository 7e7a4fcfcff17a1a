use super::Matrix;
use crate::Scalar;

const MAX_SWEEPS: usize = 80;

/// Largest and smallest singular value of a (possibly rectangular) matrix.
///
/// `sigma_min` is the smallest of the `min(rows, cols)` singular values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingularExtremes<T> {
    pub sigma_max: T,
    pub sigma_min: T,
}

/// All `min(rows, cols)` singular values in descending order.
///
/// One-sided Jacobi (Hestenes) on the columns of the taller orientation, so
/// small singular values keep high relative accuracy.
pub fn singular_values<T: Scalar>(m: &Matrix<T>) -> Vec<T> {
    let tall = if m.rows() >= m.cols() { m.clone() } else { m.transpose() };
    let (rows, cols) = tall.shape();
    let scale = tall.max_abs();
    if scale == T::zero() {
        return vec![T::zero(); cols];
    }
    // column-major working copy, pre-scaled to keep squares in range
    let mut a: Vec<Vec<T>> =
        (0..cols).map(|j| (0..rows).map(|i| tall.get(i, j) / scale).collect()).collect();
    let tol = T::epsilon();

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..cols {
            for q in p + 1..cols {
                let (alpha, beta, gamma) = a[p].iter().zip(&a[q]).fold(
                    (T::zero(), T::zero(), T::zero()),
                    |(al, be, ga), (&x, &y)| (al + x * x, be + y * y, ga + x * y),
                );
                if gamma == T::zero() || gamma.abs() <= tol * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (gamma + gamma);
                let t = zeta.signum() / (zeta.abs() + (T::one() + zeta * zeta).sqrt());
                let c = T::one() / (T::one() + t * t).sqrt();
                let s = c * t;
                let (left, right) = a.split_at_mut(q);
                for (x, y) in left[p].iter_mut().zip(right[0].iter_mut()) {
                    let (xp, yq) = (*x, *y);
                    *x = c * xp - s * yq;
                    *y = s * xp + c * yq;
                }
            }
        }
        if !rotated {
            break;
        }
    }

    let mut sv: Vec<T> = a
        .iter()
        .map(|col| scale * col.iter().map(|&x| x * x).sum::<T>().sqrt())
        .collect();
    sv.sort_by(|x, y| y.partial_cmp(x).expect("finite singular values"));
    sv
}

pub fn singular_extremes<T: Scalar>(m: &Matrix<T>) -> SingularExtremes<T> {
    let sv = singular_values(m);
    SingularExtremes { sigma_max: sv[0], sigma_min: sv[sv.len() - 1] }
}
