use super::{require_square, LinalgError, Matrix};
use crate::Scalar;

pub const POWER_MAX_ITER: usize = 10_000;
const GELFAND_MAX_SQUARINGS: u32 = 40;

/// Perron root of an entrywise nonnegative square matrix.
///
/// Power iteration on `m + εI` with `ε = max|m| / 2`, started from the
/// normalized all-ones vector. The shift breaks periodicity (e.g. permutation
/// matrices) and moves the Perron root by exactly `ε`. Stops when the
/// Collatz-Wielandt bounds `min/max (Mv)ᵢ/vᵢ` agree to `T::POWER_TOL`
/// relative, or when successive norm estimates stall.
pub fn spectral_radius_nonneg<T: Scalar>(m: &Matrix<T>) -> Result<T, LinalgError> {
    let n = require_square(m)?;
    for i in 0..n {
        for j in 0..n {
            let v = m.get(i, j);
            if v < T::zero() {
                return Err(LinalgError::NegativeEntry { row: i, col: j, value: v.to_f64_lossy() });
            }
        }
    }
    let max = m.max_abs();
    if max == T::zero() {
        return Ok(T::zero());
    }
    let shift = max / T::lit(2.0);
    let mut v = vec![T::one() / T::lit(n as f64).sqrt(); n];
    let mut w = vec![T::zero(); n];
    let mut prev = T::zero();
    let mut estimate = T::zero();
    for _ in 0..POWER_MAX_ITER {
        for (i, wi) in w.iter_mut().enumerate() {
            *wi = m.row(i).iter().zip(&v).map(|(&a, &x)| a * x).sum::<T>() + shift * v[i];
        }
        estimate = w.iter().map(|&x| x * x).sum::<T>().sqrt();
        if estimate == T::zero() {
            return Ok(T::zero());
        }
        // Collatz-Wielandt bounds bracket the Perron root when v > 0
        let (lo, hi) = v.iter().zip(&w).fold((T::infinity(), T::zero()), |(lo, hi), (&vi, &wi)| {
            if vi > T::zero() { (lo.min(wi / vi), hi.max(wi / vi)) } else { (T::zero(), hi) }
        });
        if hi - lo <= T::POWER_TOL * hi {
            return Ok(((lo + hi) / T::lit(2.0) - shift).max(T::zero()));
        }
        for (vi, &wi) in v.iter_mut().zip(&w) {
            *vi = wi / estimate;
        }
        // reducible matrices can keep zero or vanishing components
        if (estimate - prev).abs() < T::lit(1e-3) * T::POWER_TOL * estimate {
            return Ok((estimate - shift).max(T::zero()));
        }
        prev = estimate;
    }
    Err(LinalgError::NoConvergence {
        iterations: POWER_MAX_ITER,
        estimate: (estimate - shift).to_f64_lossy(),
    })
}

/// Gelfand-formula estimate `‖m^(2^j)‖^(1/2^j)` of the spectral radius.
///
/// Uses the Frobenius norm, which bounds the spectral norm from above, so
/// every term of the sequence over-estimates ρ and the sequence tends to ρ.
/// Powers are kept normalized with the scale carried in log space, so the
/// squaring cannot overflow. Stops once two consecutive estimates agree to
/// `T::GELFAND_TOL` relative, or after 40 squarings.
pub fn spectral_radius_general<T: Scalar>(m: &Matrix<T>) -> Result<T, LinalgError> {
    require_square(m)?;
    let norm = m.frobenius_norm();
    if norm == T::zero() {
        return Ok(T::zero());
    }
    let mut current = m.scale(T::one() / norm);
    let mut log_scale = norm.ln();
    let mut exponent = T::one();
    let mut estimate = norm;
    for _ in 0..GELFAND_MAX_SQUARINGS {
        let squared = current.matmul(&current)?;
        let n = squared.frobenius_norm();
        if n == T::zero() {
            return Ok(T::zero());
        }
        current = squared.scale(T::one() / n);
        log_scale = log_scale + log_scale + n.ln();
        exponent = exponent + exponent;
        let next = (log_scale / exponent).exp();
        let converged = (next - estimate).abs() < T::GELFAND_TOL * next;
        estimate = next;
        if converged {
            break;
        }
    }
    Ok(estimate)
}
