//! Exact uniqueness decision for small flattened systems `S·x − |T·x| = f`.
//!
//! The system has exactly one solution for every `f` iff `S + (I−2Λ)·T` is
//! nonsingular for every diagonal `Λ` with entries in `[0, 1]`. Row `i` of
//! that matrix depends affinely on `λᵢ` alone, so the determinant is affine in
//! each `λᵢ` and its range over the unit cube is spanned by the `2^k` vertex
//! values: nonvanishing on the cube iff all vertex determinants share one
//! strict sign. Three methods evaluate this criterion:
//!
//! * [`vertex_det_oracle`] sweeps `det(S + diag(1−2b)·T)` over bit vectors `b`;
//! * [`row_rep_oracle`] sweeps row-representative matrices whose row `i` is
//!   taken from `S+T` or `S−T`, which coincide with the vertices above;
//! * [`p_matrix_oracle`] tests every principal minor of `(S−T)(S+T)⁻¹`.
//!
//! [`enumerate_solutions`] independently lists every solution for one `f` by
//! fixing the sign pattern of `T·x`.

use std::cmp::Ordering;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::linalg::{affine_solution_set, det_classified, lu_factor, solve, DetClass, LinalgError, Matrix};
use crate::model::{ModelError, NgaveForm};
use crate::Scalar;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("flattened system is {rows}x{cols}; the oracle needs a square system")]
    NotSquare { rows: usize, cols: usize },
    #[error("flattened dimension k = {k} exceeds the enumeration cap {cap}")]
    TooLarge { k: usize, cap: usize },
    #[error("right-hand side has length {found}, expected {expected}")]
    RhsLength { expected: usize, found: usize },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Model(#[from] ModelError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleConfig {
    /// Largest `k` for determinant and principal-minor sweeps.
    pub det_cap: usize,
    /// Largest `k` for [`enumerate_solutions`].
    pub enum_cap: usize,
    /// Sweeps with at least this many terms run on the rayon pool.
    pub parallel_threshold: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self { det_cap: 20, enum_cap: 16, parallel_threshold: 1 << 12 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Uniqueness {
    Unique,
    NotUnique,
    InconclusiveSingular,
}

impl Uniqueness {
    pub fn as_str(&self) -> &'static str {
        match self {
            Uniqueness::Unique => "UNIQUE",
            Uniqueness::NotUnique => "NOT_UNIQUE",
            Uniqueness::InconclusiveSingular => "INCONCLUSIVE_SINGULAR",
        }
    }
}

impl std::fmt::Display for Uniqueness {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum OracleMethod {
    VertexDet,
    PMatrix,
    RowRep,
}

impl OracleMethod {
    pub fn as_str(&self) -> &'static str {
        match self {
            OracleMethod::VertexDet => "VERTEX_DET",
            OracleMethod::PMatrix => "P_MATRIX",
            OracleMethod::RowRep => "ROW_REP",
        }
    }
}

/// Binary diagonal: bit `i` set means `λᵢ = 1` (factor `−1` on row `i` of `T`).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct SignPattern {
    pub bits: Vec<bool>,
}

impl SignPattern {
    /// Bit `i` is bit `i` of `index`.
    pub fn from_index(index: usize, k: usize) -> Self {
        Self { bits: (0..k).map(|i| index >> i & 1 == 1).collect() }
    }

    pub fn index(&self) -> usize {
        self.bits.iter().enumerate().fold(0, |acc, (i, &b)| acc | (usize::from(b) << i))
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    /// Diagonal of `Λ`.
    pub fn lambda<T: Scalar>(&self) -> Vec<T> {
        self.bits.iter().map(|&b| if b { T::one() } else { T::zero() }).collect()
    }

    /// Diagonal of `I − 2Λ`.
    pub fn signs<T: Scalar>(&self) -> Vec<T> {
        self.bits.iter().map(|&b| if b { -T::one() } else { T::one() }).collect()
    }

    /// Indices of set bits.
    pub fn support(&self) -> Vec<usize> {
        self.bits.iter().enumerate().filter_map(|(i, &b)| b.then_some(i)).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "status", content = "detail", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum MethodOutcome {
    Decided(Uniqueness),
    Abstained(String),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MethodResult<T> {
    pub method: OracleMethod,
    pub outcome: MethodOutcome,
    /// Determinants (or minors) evaluated.
    pub evaluated: usize,
    pub witness: Option<SignPattern>,
    /// Smallest and largest value among the evaluated determinants.
    pub value_range: Option<(T, T)>,
}

impl<T> MethodResult<T> {
    pub fn verdict(&self) -> Option<Uniqueness> {
        match self.outcome {
            MethodOutcome::Decided(v) => Some(v),
            MethodOutcome::Abstained(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UniquenessVerdict<T> {
    pub verdict: Uniqueness,
    pub method_results: Vec<MethodResult<T>>,
    /// Vertex where the determinant sign flips or vanishes.
    pub witness: Option<SignPattern>,
    /// `[min, max]` of the vertex determinants.
    pub det_range: (T, T),
    /// Every method that reached a verdict reached the vertex verdict.
    pub methods_agree: bool,
}

impl<T> UniquenessVerdict<T> {
    pub fn method(&self, method: OracleMethod) -> Option<&MethodResult<T>> {
        self.method_results.iter().find(|r| r.method == method)
    }
}

/// Order-independent summary of a determinant sweep.
#[derive(Debug, Clone, Copy)]
struct Sweep<T> {
    count: usize,
    min: T,
    max: T,
    first_pos: Option<usize>,
    first_neg: Option<usize>,
    first_zero: Option<usize>,
    first_band: Option<usize>,
}

fn min_opt(a: Option<usize>, b: Option<usize>) -> Option<usize> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

impl<T: Scalar> Sweep<T> {
    fn empty() -> Self {
        Self {
            count: 0,
            min: T::infinity(),
            max: T::neg_infinity(),
            first_pos: None,
            first_neg: None,
            first_zero: None,
            first_band: None,
        }
    }

    fn record(mut self, index: usize, class: DetClass<T>) -> Self {
        let v = class.value();
        self.count += 1;
        self.min = self.min.min(v);
        self.max = self.max.max(v);
        let slot = match class {
            DetClass::Zero => &mut self.first_zero,
            DetClass::WithinTolerance(_) => &mut self.first_band,
            DetClass::Nonzero(_) => match class.strict_sign() {
                Some(Ordering::Greater) => &mut self.first_pos,
                _ => &mut self.first_neg,
            },
        };
        *slot = min_opt(*slot, Some(index));
        self
    }

    fn merge(self, o: Self) -> Self {
        Self {
            count: self.count + o.count,
            min: self.min.min(o.min),
            max: self.max.max(o.max),
            first_pos: min_opt(self.first_pos, o.first_pos),
            first_neg: min_opt(self.first_neg, o.first_neg),
            first_zero: min_opt(self.first_zero, o.first_zero),
            first_band: min_opt(self.first_band, o.first_band),
        }
    }

    /// Constant strict sign across the sweep.
    fn classify_common_sign(&self) -> (Uniqueness, Option<usize>) {
        if let (Some(p), Some(n)) = (self.first_pos, self.first_neg) {
            // first vertex whose sign differs from the earliest signed vertex
            return (Uniqueness::NotUnique, Some(p.max(n)));
        }
        if let Some(z) = self.first_zero {
            return (Uniqueness::NotUnique, Some(z));
        }
        if let Some(b) = self.first_band {
            return (Uniqueness::InconclusiveSingular, Some(b));
        }
        (Uniqueness::Unique, None)
    }

    /// All values strictly positive.
    fn classify_positive(&self) -> (Uniqueness, Option<usize>) {
        if let Some(bad) = min_opt(self.first_neg, self.first_zero) {
            return (Uniqueness::NotUnique, Some(bad));
        }
        if let Some(b) = self.first_band {
            return (Uniqueness::InconclusiveSingular, Some(b));
        }
        (Uniqueness::Unique, None)
    }
}

fn run_sweep<T, F>(range: std::ops::Range<usize>, parallel: bool, eval: F) -> Result<Sweep<T>, LinalgError>
where
    T: Scalar,
    F: Fn(usize) -> Result<DetClass<T>, LinalgError> + Sync,
{
    if parallel {
        range
            .into_par_iter()
            .try_fold(Sweep::empty, |acc, i| eval(i).map(|c| acc.record(i, c)))
            .try_reduce(Sweep::empty, |a, b| Ok(a.merge(b)))
    } else {
        range.into_iter().try_fold(Sweep::empty(), |acc, i| eval(i).map(|c| acc.record(i, c)))
    }
}

fn check_sweepable<T: Scalar>(form: &NgaveForm<T>, cap: usize) -> Result<usize, OracleError> {
    if !form.is_square() {
        let (rows, cols) = form.s().shape();
        return Err(OracleError::NotSquare { rows, cols });
    }
    let k = form.unknowns();
    if k > cap {
        return Err(OracleError::TooLarge { k, cap });
    }
    Ok(k)
}

fn sweep_result<T: Scalar>(
    method: OracleMethod,
    k: usize,
    sweep: &Sweep<T>,
    (verdict, witness): (Uniqueness, Option<usize>),
) -> MethodResult<T> {
    MethodResult {
        method,
        outcome: MethodOutcome::Decided(verdict),
        evaluated: sweep.count,
        witness: witness.map(|i| SignPattern::from_index(i, k)),
        value_range: Some((sweep.min, sweep.max)),
    }
}

/// Sweeps `det(S + diag(1−2b)·T)` over all `2^k` bit vectors.
pub fn vertex_det_oracle<T: Scalar>(form: &NgaveForm<T>, config: &OracleConfig) -> Result<MethodResult<T>, OracleError> {
    let k = check_sweepable(form, config.det_cap)?;
    let total = 1usize << k;
    let (s, t) = (form.s(), form.t());
    let sweep = run_sweep(0..total, total >= config.parallel_threshold, |idx| {
        let signs = SignPattern::from_index(idx, k).signs::<T>();
        det_classified(&s.add(&t.scale_rows(&signs)?)?)
    })?;
    Ok(sweep_result(OracleMethod::VertexDet, k, &sweep, sweep.classify_common_sign()))
}

/// Row-representative sweep of the pair `{S+T, S−T}`: every matrix whose row
/// `i` is row `i` of `S+T` (bit clear) or of `S−T` (bit set) must have a
/// nonzero determinant of one common sign.
pub fn row_rep_oracle<T: Scalar>(form: &NgaveForm<T>, config: &OracleConfig) -> Result<MethodResult<T>, OracleError> {
    let k = check_sweepable(form, config.det_cap)?;
    let total = 1usize << k;
    let plus = form.s().add(form.t())?;
    let minus = form.s().sub(form.t())?;
    let sweep = run_sweep(0..total, total >= config.parallel_threshold, |idx| {
        let rep = Matrix::from_fn(k, k, |i, j| if idx >> i & 1 == 1 { minus.get(i, j) } else { plus.get(i, j) });
        det_classified(&rep)
    })?;
    Ok(sweep_result(OracleMethod::RowRep, k, &sweep, sweep.classify_common_sign()))
}

/// Tests whether `W = (S−T)(S+T)⁻¹` is a P-matrix by computing each of its
/// `2^k − 1` principal minors with its own LU. Abstains when `S+T` is
/// singular. The witness is the index set of a nonpositive minor.
pub fn p_matrix_oracle<T: Scalar>(form: &NgaveForm<T>, config: &OracleConfig) -> Result<MethodResult<T>, OracleError> {
    let k = check_sweepable(form, config.det_cap)?;
    let plus = form.s().add(form.t())?;
    let minus = form.s().sub(form.t())?;
    let plus_lu = lu_factor(&plus)?;
    if plus_lu.is_singular() {
        return Ok(MethodResult {
            method: OracleMethod::PMatrix,
            outcome: MethodOutcome::Abstained("S+T is singular; the vertex sweep decides".into()),
            evaluated: 0,
            witness: None,
            value_range: None,
        });
    }
    // W = minus · plus⁻¹  ⇔  plusᵀ · Wᵀ = minusᵀ
    let w = solve(&plus.transpose(), &minus.transpose())?.transpose();
    let total = 1usize << k;
    let sweep = run_sweep(1..total, total >= config.parallel_threshold, |mask| {
        let idx = SignPattern::from_index(mask, k).support();
        det_classified(&w.principal_submatrix(&idx))
    })?;
    Ok(sweep_result(OracleMethod::PMatrix, k, &sweep, sweep.classify_positive()))
}

/// Runs all three methods; the vertex sweep is authoritative and the others
/// are cross-checks recorded in `methods_agree`.
pub fn decide<T: Scalar>(form: &NgaveForm<T>, config: &OracleConfig) -> Result<UniquenessVerdict<T>, OracleError> {
    let vertex = vertex_det_oracle(form, config)?;
    let row = row_rep_oracle(form, config)?;
    let pm = p_matrix_oracle(form, config)?;
    let verdict = vertex.verdict().expect("vertex sweep always decides");
    let methods_agree = [&row, &pm].iter().all(|r| r.verdict().is_none_or(|v| v == verdict));
    Ok(UniquenessVerdict {
        verdict,
        witness: vertex.witness.clone(),
        det_range: vertex.value_range.expect("vertex sweep records a range"),
        method_results: vec![vertex, pm, row],
        methods_agree,
    })
}

/// Every solution of `S·x − |T·x| = f` found by sign enumeration.
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionSet<T> {
    /// Distinct isolated solutions, as column vectors.
    pub solutions: Vec<Matrix<T>>,
    /// Some sign branch holds a continuum of solutions.
    pub family_detected: bool,
    /// Sign branches whose linear system was singular.
    pub singular_branches: usize,
    /// Singular branches with a null space of dimension ≥ 2 that could not be
    /// fully characterized.
    pub unresolved_branches: usize,
}

impl<T> SolutionSet<T> {
    /// Exactly one solution and nothing left unresolved.
    pub fn is_unique(&self) -> bool {
        self.solutions.len() == 1 && !self.family_detected && self.unresolved_branches == 0
    }
}

struct Collector<T> {
    solutions: Vec<Vec<T>>,
}

impl<T: Scalar> Collector<T> {
    fn push(&mut self, x: Vec<T>) {
        let norm = x.iter().fold(T::zero(), |m, v| m.max(v.abs()));
        let tol = T::DEDUP_TOL * (T::one() + norm);
        let dup = self
            .solutions
            .iter()
            .any(|y| y.iter().zip(&x).all(|(a, b)| (*a - *b).abs() <= tol));
        if !dup {
            self.solutions.push(x);
        }
    }
}

fn mat_vec<T: Scalar>(m: &Matrix<T>, x: &[T]) -> Vec<T> {
    (0..m.rows()).map(|i| m.row(i).iter().zip(x).map(|(&a, &b)| a * b).sum()).collect()
}

fn consistency_slack<T: Scalar>(tx: &[T]) -> T {
    T::CONSISTENCY_TOL * (T::one() + tx.iter().fold(T::zero(), |m, v| m.max(v.abs())))
}

fn sign_consistent<T: Scalar>(signs: &[T], tx: &[T]) -> bool {
    let slack = consistency_slack(tx);
    signs.iter().zip(tx).all(|(&s, &y)| s * y >= -slack)
}

/// Feasible `t` for `sᵢ·(u + t·w)ᵢ ≥ −slack`, or `None` when empty.
fn line_interval<T: Scalar>(signs: &[T], u: &[T], w: &[T], slack: T) -> Option<(T, T)> {
    let (mut lo, mut hi) = (T::neg_infinity(), T::infinity());
    let wscale = w.iter().fold(T::zero(), |m, v| m.max(v.abs()));
    for ((&s, &ui), &wi) in signs.iter().zip(u).zip(w) {
        let a = s * wi;
        let b = -slack - s * ui;
        if a.abs() <= T::epsilon() * wscale {
            if b > T::zero() {
                return None;
            }
        } else if a > T::zero() {
            lo = lo.max(b / a);
        } else {
            hi = hi.min(b / a);
        }
    }
    (lo <= hi).then_some((lo, hi))
}

enum LineOutcome<T> {
    Empty,
    Point(Vec<T>),
    Segment,
}

/// Intersects the line `base + t·dir` with the sign cone of a branch.
fn probe_line<T: Scalar>(t_mat: &Matrix<T>, signs: &[T], base: &[T], dir: &[T]) -> LineOutcome<T> {
    let u = mat_vec(t_mat, base);
    let w = mat_vec(t_mat, dir);
    let slack = consistency_slack(&u);
    let Some((lo, hi)) = line_interval(signs, &u, &w, slack) else {
        return LineOutcome::Empty;
    };
    let dir_norm = dir.iter().fold(T::zero(), |m, v| m.max(v.abs()));
    let base_norm = base.iter().fold(T::zero(), |m, v| m.max(v.abs()));
    // width judged without slack so tolerance alone never creates a family
    if let Some((lo0, hi0)) = line_interval(signs, &u, &w, T::zero()) {
        if (hi0 - lo0) * dir_norm > T::DEDUP_TOL * (T::one() + base_norm) {
            return LineOutcome::Segment;
        }
    }
    let t = if lo.is_finite() && hi.is_finite() {
        (lo + hi) / T::lit(2.0)
    } else if lo.is_finite() {
        lo
    } else if hi.is_finite() {
        hi
    } else {
        T::zero()
    };
    LineOutcome::Point(base.iter().zip(dir).map(|(&b, &d)| b + t * d).collect())
}

/// Solves `(S − diag(s)·T)·x = f` for every sign vector `s ∈ {±1}^k` and keeps
/// the `x` with `sᵢ·(T·x)ᵢ ≥ 0` (up to a small slack), i.e. `|T·x| = diag(s)·T·x`.
/// Singular branches are resolved through their affine solution set: a
/// one-dimensional null space is intersected exactly with the sign cone;
/// higher-dimensional ones are probed along each null-space direction.
pub fn enumerate_solutions<T: Scalar>(
    form: &NgaveForm<T>,
    f: &Matrix<T>,
    config: &OracleConfig,
) -> Result<SolutionSet<T>, OracleError> {
    let k = check_sweepable(form, config.enum_cap)?;
    if f.shape() != (k, 1) {
        return Err(OracleError::RhsLength { expected: k, found: f.rows() * f.cols() });
    }
    let (s_mat, t_mat) = (form.s(), form.t());
    let rhs = f.as_slice();
    let mut collector = Collector { solutions: Vec::new() };
    let mut family_detected = false;
    let mut singular_branches = 0;
    let mut unresolved_branches = 0;

    for idx in 0..1usize << k {
        let signs = SignPattern::from_index(idx, k).signs::<T>();
        let branch = s_mat.sub(&t_mat.scale_rows(&signs)?)?;
        let lu = lu_factor(&branch)?;
        if !lu.is_singular() {
            let x = lu.solve(f)?.into_vec();
            if sign_consistent(&signs, &mat_vec(t_mat, &x)) {
                collector.push(x);
            }
            continue;
        }
        singular_branches += 1;
        let Some(affine) = affine_solution_set(&branch, rhs, T::STRICTNESS_TOL)? else {
            continue;
        };
        let base = affine.particular;
        match affine.null_basis.len() {
            0 => {
                if sign_consistent(&signs, &mat_vec(t_mat, &base)) {
                    collector.push(base);
                }
            }
            1 => match probe_line(t_mat, &signs, &base, &affine.null_basis[0]) {
                LineOutcome::Segment => family_detected = true,
                LineOutcome::Point(x) => collector.push(x),
                LineOutcome::Empty => {}
            },
            _ => {
                let mut found = None;
                for dir in &affine.null_basis {
                    match probe_line(t_mat, &signs, &base, dir) {
                        LineOutcome::Segment => {
                            family_detected = true;
                            found = None;
                            break;
                        }
                        LineOutcome::Point(x) => {
                            found.get_or_insert(x);
                        }
                        LineOutcome::Empty => {}
                    }
                }
                if !family_detected {
                    unresolved_branches += 1;
                    if let Some(x) = found {
                        collector.push(x);
                    }
                }
            }
        }
    }

    let solutions = collector
        .solutions
        .into_iter()
        .map(|x| Matrix::column(&x))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(SolutionSet { solutions, family_detected, singular_branches, unresolved_branches })
}
