//! Solvers for `A·X·B − |C·X·D| = F`.
//!
//! [`solve_picard`] iterates `X ← A⁻¹·(|C·X·D| + F)·B⁻¹`. Since
//! `||M| − |N|| ≤ |M − N|` entrywise, the map is Lipschitz in the Frobenius
//! norm with constant `σ₁(C)σ₁(D) / (σ_min(A)σ_min(B))`, a contraction exactly
//! when the `THM_2_4` certificate passes. [`solve_small_exact`] enumerates
//! the flattened system instead.

use serde::Serialize;
use thiserror::Error;

use crate::certify::{check_thm_2_2, check_thm_2_3, check_thm_2_4, ConditionId, Verdict};
use crate::linalg::{entrywise_abs, lu_factor, unvec, vec, LinalgError, LuFactorization, Matrix};
use crate::model::{reformulate, residual, ModelError, SylvesterAveInstance};
use crate::oracle::{enumerate_solutions, OracleConfig, OracleError};
use crate::Scalar;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolveError {
    #[error("{which} must be square and nonsingular for the fixed-point solver; use the exact enumeration solver instead")]
    SingularCoefficient { which: &'static str },
    #[error("expected exactly one solution, found {count}{}", if *family { " plus a continuum" } else { "" })]
    Multiplicity { count: usize, family: bool, solutions: Vec<Matrix<f64>> },
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolveReport<T> {
    #[serde(skip)]
    pub x: Matrix<T>,
    pub iterations: usize,
    pub final_residual: T,
    /// `final_residual <= residual_tol`.
    pub converged: bool,
    /// Geometric mean of successive update-norm ratios; 0 when fewer than two
    /// updates were made.
    pub rate_estimate: T,
    /// First passing certificate among `THM_2_4`, `THM_2_2`, `THM_2_3`.
    pub certificate_used: Option<ConditionId>,
    /// Stopped because the residual grew tenfold over 50 iterations.
    pub diverged: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PicardConfig<T> {
    pub max_iter: usize,
    pub residual_tol: T,
}

impl<T: Scalar> Default for PicardConfig<T> {
    fn default() -> Self {
        Self { max_iter: 10_000, residual_tol: T::RESIDUAL_TOL }
    }
}

const DIVERGENCE_WINDOW: usize = 50;
const DIVERGENCE_GROWTH: f64 = 10.0;
const MAX_STALLS: usize = 3;

fn factor_square<T: Scalar>(m: &Matrix<T>, which: &'static str) -> Result<LuFactorization<T>, SolveError> {
    match lu_factor(m) {
        Ok(lu) if !lu.is_singular() => Ok(lu),
        _ => Err(SolveError::SingularCoefficient { which }),
    }
}

fn passing_certificate<T: Scalar>(inst: &SylvesterAveInstance<T>) -> Option<ConditionId> {
    [check_thm_2_4(inst), check_thm_2_2(inst), check_thm_2_3(inst)]
        .into_iter()
        .find(|c| c.verdict == Verdict::Pass)
        .map(|c| c.condition_id)
}

/// Fixed-point iteration; `x0` defaults to `A⁻¹·F·B⁻¹`.
///
/// Once the residual is within `residual_tol` the iteration continues until
/// the update stops shrinking or vanishes, so the returned `X`
/// is as accurate as the conditioning allows rather than merely within the
/// residual tolerance.
pub fn solve_picard<T: Scalar>(
    inst: &SylvesterAveInstance<T>,
    x0: Option<&Matrix<T>>,
    config: &PicardConfig<T>,
) -> Result<SolveReport<T>, SolveError> {
    let lu_a = factor_square(inst.a(), "A")?;
    let lu_bt = factor_square(&inst.b().transpose(), "B")?;
    // A⁻¹·Y·B⁻¹ through the cached factors
    let apply = |y: &Matrix<T>| -> Result<Matrix<T>, LinalgError> {
        let z = lu_a.solve(y)?;
        Ok(lu_bt.solve(&z.transpose())?.transpose())
    };
    let mut x = match x0 {
        Some(x0) => {
            let dims = inst.dims();
            if x0.shape() != (dims.n, dims.p) {
                return Err(ModelError::Shape { name: "X0", expected: (dims.n, dims.p), found: x0.shape() }.into());
            }
            x0.clone()
        }
        None => apply(inst.f())?,
    };

    let noise = T::lit(1e3) * T::epsilon();
    let mut history: Vec<T> = Vec::new();
    let mut log_ratio_sum = T::zero();
    let mut ratio_count = 0usize;
    let mut iterations = 0;
    let mut diverged = false;
    let mut last_step: Option<T> = None;
    // consecutive updates that failed to shrink
    let mut stalls = 0usize;

    loop {
        let r = residual(inst, &x)?;
        if iterations >= config.max_iter {
            break;
        }
        // past the tolerance, keep polishing until the update vanishes or stalls
        if r <= config.residual_tol && (r == T::zero() || last_step == Some(T::zero()) || stalls >= MAX_STALLS) {
            break;
        }
        if !r.is_finite() {
            diverged = true;
            break;
        }
        if history.len() >= DIVERGENCE_WINDOW && r >= T::lit(DIVERGENCE_GROWTH) * history[history.len() - DIVERGENCE_WINDOW] {
            diverged = true;
            break;
        }
        history.push(r);

        let cxd = inst.c().matmul(&x)?.matmul(inst.d())?;
        let next = apply(&entrywise_abs(&cxd).add(inst.f())?)?;
        let step = next.sub(&x)?.frobenius_norm();
        if let Some(prev) = last_step {
            if prev > noise * (T::one() + x.frobenius_norm()) && step > T::zero() {
                log_ratio_sum = log_ratio_sum + (step / prev).ln();
                ratio_count += 1;
            }
            stalls = if step >= prev { stalls + 1 } else { 0 };
        }
        last_step = Some(step);
        x = next;
        iterations += 1;
    }

    let final_residual = residual(inst, &x)?;
    let rate_estimate = if ratio_count == 0 {
        T::zero()
    } else {
        (log_ratio_sum / T::lit(ratio_count as f64)).exp()
    };
    Ok(SolveReport {
        converged: final_residual <= config.residual_tol,
        x,
        iterations,
        final_residual,
        rate_estimate,
        certificate_used: passing_certificate(inst),
        diverged,
    })
}

/// Unique solution by sign enumeration of the flattened system (`k = n·p` at
/// most `config.enum_cap`).
pub fn solve_small_exact<T: Scalar>(
    inst: &SylvesterAveInstance<T>,
    config: &OracleConfig,
) -> Result<SolveReport<T>, SolveError> {
    let form = reformulate(inst)?;
    let set = enumerate_solutions(&form, &vec(inst.f()), config)?;
    let dims = inst.dims();
    if !set.is_unique() {
        let solutions = set
            .solutions
            .iter()
            .map(|s| unvec(&s.cast::<f64>(), dims.n, dims.p))
            .collect::<Result<Vec<_>, _>>()?;
        return Err(SolveError::Multiplicity {
            count: solutions.len(),
            family: set.family_detected || set.unresolved_branches > 0,
            solutions,
        });
    }
    let x = unvec(&set.solutions[0], dims.n, dims.p)?;
    let final_residual = residual(inst, &x)?;
    Ok(SolveReport {
        converged: final_residual <= T::RESIDUAL_TOL,
        x,
        iterations: 0,
        final_residual,
        rate_estimate: T::zero(),
        certificate_used: passing_certificate(inst),
        diverged: false,
    })
}
