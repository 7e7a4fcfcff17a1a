//! Sufficient conditions for `A·X·B − |C·X·D| = F` to have exactly one
//! solution for every right-hand side.
//!
//! Each check returns a [`Certificate`] holding the two sides of its strict
//! inequality and a three-valued verdict: PASS only when the margin exceeds
//! the strictness tolerance, FAIL only when it is below minus that tolerance.
//! Quantities that could not be computed are reported as NaN.

use rayon::prelude::*;
use serde::Serialize;

use crate::linalg::{
    entrywise_abs, kron, lu_factor, singular_extremes, singular_values, solve, spectral_radius_general,
    spectral_radius_nonneg, LinalgError, Matrix,
};
use crate::model::{NgaveForm, SylvesterAveInstance, DEFAULT_FLAT_CAP};
use crate::rng::SeededRng;
use crate::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum ConditionId {
    /// Spectral radius of `(I−2Λ)·((B⁻¹D)ᵀ⊗CA⁻¹)` below one, probed by sampling Λ.
    #[serde(rename = "THM_2_1_SAMPLED")]
    Thm21Sampled,
    /// `ρ(|B⁻¹D|)·ρ(|CA⁻¹|) < 1`.
    #[serde(rename = "THM_2_2")]
    Thm22,
    /// `σ₁(B⁻¹D)·σ₁(CA⁻¹) < 1`.
    #[serde(rename = "THM_2_3")]
    Thm23,
    /// `σ₁(C)·σ₁(D) < σ_min(A)·σ_min(B)`.
    #[serde(rename = "THM_2_4")]
    Thm24,
    /// `σ₁(T) < σ_min(S)` on the flattened system.
    #[serde(rename = "LEM_2_4_FLAT")]
    Lem24Flat,
}

impl ConditionId {
    pub fn as_str(&self) -> &'static str {
        match self {
            ConditionId::Thm21Sampled => "THM_2_1_SAMPLED",
            ConditionId::Thm22 => "THM_2_2",
            ConditionId::Thm23 => "THM_2_3",
            ConditionId::Thm24 => "THM_2_4",
            ConditionId::Lem24Flat => "LEM_2_4_FLAT",
        }
    }
}

impl std::fmt::Display for ConditionId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

impl Verdict {
    /// Three-valued reading of a margin against `tol`.
    pub fn from_margin<T: Scalar>(margin: T, tol: T) -> Self {
        if margin > tol {
            Verdict::Pass
        } else if margin < -tol {
            Verdict::Fail
        } else {
            Verdict::Inconclusive
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::Inconclusive => "INCONCLUSIVE",
        }
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Certificate<T> {
    pub condition_id: ConditionId,
    pub verdict: Verdict,
    pub lhs: T,
    pub rhs: T,
    pub margin: T,
    /// Diagonal of a violating Λ (falsifier only).
    pub witness: Option<Vec<T>>,
    pub notes: String,
}

impl<T: Scalar> Certificate<T> {
    fn from_sides(condition_id: ConditionId, lhs: T, rhs: T, notes: String) -> Self {
        let margin = rhs - lhs;
        Self {
            condition_id,
            verdict: Verdict::from_margin(margin, T::STRICTNESS_TOL),
            lhs,
            rhs,
            margin,
            witness: None,
            notes,
        }
    }

    fn not_applicable(condition_id: ConditionId, rhs: T, notes: impl Into<String>) -> Self {
        Self {
            condition_id,
            verdict: Verdict::Inconclusive,
            lhs: T::nan(),
            rhs,
            margin: T::nan(),
            witness: None,
            notes: notes.into(),
        }
    }

    /// Ratio `lhs / rhs`; for the singular-value bound this is the contraction
    /// factor of the fixed-point map.
    pub fn ratio(&self) -> T {
        self.lhs / self.rhs
    }
}

const NEEDS_SQUARE_AB: &str = "requires square nonsingular A,B";

/// `B⁻¹D` and `C·A⁻¹`, or a note explaining why they do not exist.
fn inverse_products<T: Scalar>(inst: &SylvesterAveInstance<T>) -> Result<(Matrix<T>, Matrix<T>), String> {
    let (a, b) = (inst.a(), inst.b());
    if !a.is_square() || !b.is_square() {
        return Err(NEEDS_SQUARE_AB.to_string());
    }
    let singular = |name: &str, e: LinalgError| format!("{NEEDS_SQUARE_AB}: {name} {e}");
    let b_inv_d = solve(b, inst.d()).map_err(|e| singular("B", e))?;
    let ca_inv = solve(&a.transpose(), &inst.c().transpose()).map_err(|e| singular("A", e))?.transpose();
    Ok((b_inv_d, ca_inv))
}

/// `ρ(|B⁻¹D|)·ρ(|CA⁻¹|) < 1`.
pub fn check_thm_2_2<T: Scalar>(inst: &SylvesterAveInstance<T>) -> Certificate<T> {
    let id = ConditionId::Thm22;
    let (b_inv_d, ca_inv) = match inverse_products(inst) {
        Ok(p) => p,
        Err(note) => return Certificate::not_applicable(id, T::one(), note),
    };
    let rho_left = spectral_radius_nonneg(&entrywise_abs(&b_inv_d));
    let rho_right = spectral_radius_nonneg(&entrywise_abs(&ca_inv));
    match (rho_left, rho_right) {
        (Ok(l), Ok(r)) => Certificate::from_sides(
            id,
            l * r,
            T::one(),
            format!("rho(|B^-1 D|) = {l:e}, rho(|C A^-1|) = {r:e}"),
        ),
        (l, r) => {
            let describe = |x: Result<T, LinalgError>| match x {
                Ok(v) => format!("{v:e}"),
                Err(e) => e.to_string(),
            };
            Certificate::not_applicable(
                id,
                T::one(),
                format!("power iteration inconclusive: left {}, right {}", describe(l), describe(r)),
            )
        }
    }
}

/// `σ₁(B⁻¹D)·σ₁(CA⁻¹) < 1`.
pub fn check_thm_2_3<T: Scalar>(inst: &SylvesterAveInstance<T>) -> Certificate<T> {
    let id = ConditionId::Thm23;
    let (b_inv_d, ca_inv) = match inverse_products(inst) {
        Ok(p) => p,
        Err(note) => return Certificate::not_applicable(id, T::one(), note),
    };
    let l = singular_extremes(&b_inv_d).sigma_max;
    let r = singular_extremes(&ca_inv).sigma_max;
    Certificate::from_sides(id, l * r, T::one(), format!("sigma1(B^-1 D) = {l:e}, sigma1(C A^-1) = {r:e}"))
}

/// `σ₁(C)·σ₁(D) < σ_min(A)·σ_min(B)`, for any shapes.
///
/// With rectangular `A` or `B` the inequality is still evaluated, but the
/// notes flag that the flattened `S = Bᵀ⊗A` is then non-square or
/// rank-deficient, so it does not establish uniqueness.
pub fn check_thm_2_4<T: Scalar>(inst: &SylvesterAveInstance<T>) -> Certificate<T> {
    let (a, b) = (singular_extremes(inst.a()), singular_extremes(inst.b()));
    let (c, d) = (singular_extremes(inst.c()), singular_extremes(inst.d()));
    let mut notes = format!(
        "sigma1(C) = {:e}, sigma1(D) = {:e}, sigma_min(A) = {:e}, sigma_min(B) = {:e}",
        c.sigma_max, d.sigma_max, a.sigma_min, b.sigma_min
    );
    let dims = inst.dims();
    let (rows, cols) = dims.flat_shape();
    if rows != cols {
        notes.push_str(&format!(
            "; flattened system is {rows}x{cols} (not square): unique solvability for every F \
             is outside the exact oracle's reach"
        ));
    } else if !inst.a().is_square() || !inst.b().is_square() {
        notes.push_str(
            "; A or B is rectangular: the flattened S = B^T (x) A is rank-deficient, \
             so this inequality does not imply unique solvability",
        );
    }
    Certificate::from_sides(ConditionId::Thm24, c.sigma_max * d.sigma_max, a.sigma_min * b.sigma_min, notes)
}

/// `σ₁(T) < σ_min(S)` evaluated on the flattened matrices.
pub fn check_lem_2_4_flat<T: Scalar>(form: &NgaveForm<T>) -> Certificate<T> {
    let id = ConditionId::Lem24Flat;
    if !form.is_square() {
        let (r, c) = form.s().shape();
        return Certificate::not_applicable(id, T::nan(), format!("flattened system is {r}x{c}, not square"));
    }
    let lhs = singular_values(form.t())[0];
    let rhs = *singular_values(form.s()).last().expect("nonempty");
    Certificate::from_sides(id, lhs, rhs, format!("sigma1(T) = {lhs:e}, sigma_min(S) = {rhs:e}"))
}

/// Settings for [`falsify_thm_2_1`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FalsifierConfig {
    /// Uniform random Λ samples evaluated after the vertices.
    pub samples: usize,
    pub seed: u64,
    /// All `2^k` binary vertices are included when `k` is at most this.
    pub vertex_cap: usize,
    /// Entry cap for the `k×k` Kronecker matrix.
    pub flat_cap: usize,
}

impl Default for FalsifierConfig {
    fn default() -> Self {
        Self { samples: 512, seed: 0, vertex_cap: 12, flat_cap: DEFAULT_FLAT_CAP }
    }
}

/// Estimates at or above `1 + VIOLATION_MARGIN` count as a violation.
pub const VIOLATION_MARGIN: f64 = 1e-6;

/// Searches for a diagonal Λ with entries in `[0, 1]` at which
/// `ρ((I−2Λ)·((B⁻¹D)ᵀ⊗CA⁻¹)) ≥ 1`.
///
/// Never returns PASS: the condition quantifies over a continuum of Λ, so
/// sampling can only refute it. A violation gives FAIL with the first
/// violating Λ (vertices in index order, then samples in draw order);
/// otherwise the verdict is INCONCLUSIVE and `lhs` is the largest estimate
/// seen. Verdicts use [`VIOLATION_MARGIN`] rather than the strictness
/// tolerance because the estimates are over-estimates.
pub fn falsify_thm_2_1<T: Scalar>(inst: &SylvesterAveInstance<T>, config: &FalsifierConfig) -> Certificate<T> {
    let id = ConditionId::Thm21Sampled;
    let (b_inv_d, ca_inv) = match inverse_products(inst) {
        Ok(p) => p,
        Err(note) => return Certificate::not_applicable(id, T::one(), note),
    };
    let k = b_inv_d.cols() * ca_inv.cols();
    if k.saturating_mul(k) > config.flat_cap {
        return Certificate::not_applicable(
            id,
            T::one(),
            format!("flattened dimension {k} exceeds cap of {} entries", config.flat_cap),
        );
    }
    let kron_mat = match kron(&b_inv_d.transpose(), &ca_inv) {
        Ok(m) => m,
        Err(e) => return Certificate::not_applicable(id, T::one(), e.to_string()),
    };

    let mut lambdas: Vec<Vec<T>> = Vec::new();
    let vertices = k <= config.vertex_cap;
    if vertices {
        for idx in 0..1usize << k {
            lambdas.push((0..k).map(|i| if idx >> i & 1 == 1 { T::one() } else { T::zero() }).collect());
        }
    }
    let mut rng = SeededRng::new(config.seed);
    for _ in 0..config.samples {
        lambdas.push((0..k).map(|_| T::lit(rng.uniform01())).collect());
    }

    let estimates: Vec<Result<T, LinalgError>> = lambdas
        .par_iter()
        .map(|lambda| {
            let signs: Vec<T> = lambda.iter().map(|&l| T::one() - (l + l)).collect();
            spectral_radius_general(&kron_mat.scale_rows(&signs)?)
        })
        .collect();

    let threshold = T::one() + T::lit(VIOLATION_MARGIN);
    let mut max_seen = T::zero();
    let mut failures = 0usize;
    for (lambda, est) in lambdas.iter().zip(&estimates) {
        match est {
            Ok(rho) if *rho >= threshold => {
                return Certificate {
                    condition_id: id,
                    verdict: Verdict::Fail,
                    lhs: *rho,
                    rhs: T::one(),
                    margin: T::one() - *rho,
                    witness: Some(lambda.clone()),
                    notes: format!("violation at the witness Lambda after evaluating up to {} Lambdas", lambdas.len()),
                };
            }
            Ok(rho) => max_seen = max_seen.max(*rho),
            Err(_) => failures += 1,
        }
    }
    let mut notes = format!(
        "sampled only - condition is quantified over all Lambda ({} evaluated{})",
        lambdas.len(),
        if vertices { ", including all binary vertices" } else { "" }
    );
    if failures > 0 {
        notes.push_str(&format!("; {failures} estimates failed"));
    }
    Certificate {
        condition_id: id,
        verdict: Verdict::Inconclusive,
        lhs: max_seen,
        rhs: T::one(),
        margin: T::one() - max_seen,
        witness: None,
        notes,
    }
}

/// The spectral-radius, scaled-norm and singular-value certificates, in that order.
pub fn check_all<T: Scalar>(inst: &SylvesterAveInstance<T>) -> [Certificate<T>; 3] {
    [check_thm_2_2(inst), check_thm_2_3(inst), check_thm_2_4(inst)]
}

/// True iff `A` and `B` are square and LU-nonsingular.
pub fn ab_nonsingular<T: Scalar>(inst: &SylvesterAveInstance<T>) -> bool {
    [inst.a(), inst.b()]
        .iter()
        .all(|m| m.is_square() && lu_factor(m).map(|lu| !lu.is_singular()).unwrap_or(false))
}
