//! Seeded instance generation.
//!
//! Matrices are drawn in the order A, B, C, D, F, each row-major from one
//! [`SeededRng`] stream; resampling of A or B (when requested) consumes the
//! stream right after the rejected draw. With a target margin γ, C and D are
//! both scaled by `sqrt(γ/γ₀)` so that `σ₁(C)σ₁(D) = γ·σ_min(A)σ_min(B)`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{singular_extremes, Matrix};
use crate::model::{ModelError, SylvesterAveInstance};
use crate::rng::SeededRng;

/// Resamples allowed before falling back to a diagonal shift.
pub const MAX_RESAMPLES: usize = 16;
/// Smallest acceptable σ_min of A and B when nonsingularity is requested.
pub const MIN_SIGMA: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GenError {
    #[error("dimensions must be positive, got ({m}, {n}, {p}, {q})")]
    Dimensions { m: usize, n: usize, p: usize, q: usize },
    #[error("margin must be positive and finite, got {0}")]
    Margin(f64),
    #[error("could not draw a well-conditioned {which} after {MAX_RESAMPLES} resamples and a diagonal shift")]
    RetryExhausted { which: &'static str },
    #[error("cannot rescale to a margin: {0}")]
    Degenerate(&'static str),
    #[error(transparent)]
    Model(#[from] ModelError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum EntryDist {
    /// Uniform on `(-1, 1)`.
    #[default]
    Uniform,
    /// Standard normal.
    Gaussian,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GenSpec {
    pub m: usize,
    pub n: usize,
    pub p: usize,
    pub q: usize,
    pub seed: u64,
    /// Target `σ₁(C)σ₁(D) / (σ_min(A)σ_min(B))`.
    pub margin: Option<f64>,
    #[serde(default)]
    pub entry_dist: EntryDist,
    #[serde(default = "default_true")]
    pub ensure_nonsingular_ab: bool,
}

fn default_true() -> bool {
    true
}

impl GenSpec {
    /// Uniform entries, nonsingular A and B, no margin.
    pub fn new(m: usize, n: usize, p: usize, q: usize, seed: u64) -> Self {
        Self { m, n, p, q, seed, margin: None, entry_dist: EntryDist::Uniform, ensure_nonsingular_ab: true }
    }

    pub fn with_margin(mut self, margin: f64) -> Self {
        self.margin = Some(margin);
        self
    }

    pub fn with_dist(mut self, dist: EntryDist) -> Self {
        self.entry_dist = dist;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<(), GenError> {
        let GenSpec { m, n, p, q, .. } = *self;
        if m == 0 || n == 0 || p == 0 || q == 0 {
            return Err(GenError::Dimensions { m, n, p, q });
        }
        if let Some(g) = self.margin {
            if !(g > 0.0 && g.is_finite()) {
                return Err(GenError::Margin(g));
            }
        }
        Ok(())
    }
}

fn draw(rng: &mut SeededRng, dist: EntryDist, rows: usize, cols: usize) -> Matrix<f64> {
    Matrix::from_fn(rows, cols, |_, _| match dist {
        EntryDist::Uniform => rng.uniform_pm1(),
        EntryDist::Gaussian => rng.gaussian(),
    })
}

fn draw_well_conditioned(
    rng: &mut SeededRng,
    spec: &GenSpec,
    rows: usize,
    cols: usize,
    which: &'static str,
) -> Result<Matrix<f64>, GenError> {
    let mut m = draw(rng, spec.entry_dist, rows, cols);
    if !spec.ensure_nonsingular_ab {
        return Ok(m);
    }
    for _ in 0..MAX_RESAMPLES {
        if singular_extremes(&m).sigma_min > MIN_SIGMA {
            return Ok(m);
        }
        m = draw(rng, spec.entry_dist, rows, cols);
    }
    if singular_extremes(&m).sigma_min > MIN_SIGMA {
        return Ok(m);
    }
    let shift = 1.0 + m.max_abs();
    let shifted = Matrix::from_fn(rows, cols, |i, j| m.get(i, j) + if i == j { shift } else { 0.0 });
    if singular_extremes(&shifted).sigma_min > MIN_SIGMA {
        Ok(shifted)
    } else {
        Err(GenError::RetryExhausted { which })
    }
}

pub fn generate(spec: &GenSpec) -> Result<SylvesterAveInstance<f64>, GenError> {
    spec.validate()?;
    let GenSpec { m, n, p, q, .. } = *spec;
    let mut rng = SeededRng::new(spec.seed);
    let a = draw_well_conditioned(&mut rng, spec, m, n, "A")?;
    let b = draw_well_conditioned(&mut rng, spec, p, q, "B")?;
    let mut c = draw(&mut rng, spec.entry_dist, m, n);
    let mut d = draw(&mut rng, spec.entry_dist, p, q);
    let f = draw(&mut rng, spec.entry_dist, m, q);

    if let Some(gamma) = spec.margin {
        let denom = singular_extremes(&a).sigma_min * singular_extremes(&b).sigma_min;
        let numer = singular_extremes(&c).sigma_max * singular_extremes(&d).sigma_max;
        if denom == 0.0 {
            return Err(GenError::Degenerate("sigma_min(A)·sigma_min(B) is zero"));
        }
        if numer == 0.0 {
            return Err(GenError::Degenerate("C or D is zero"));
        }
        let alpha = (gamma / (numer / denom)).sqrt();
        c = c.scale(alpha);
        d = d.scale(alpha);
    }
    Ok(SylvesterAveInstance::new(a, b, c, d, f)?)
}

/// `count` instances with seeds `spec.seed + i` (wrapping).
pub fn generate_ensemble(spec: &GenSpec, count: usize) -> Result<Vec<SylvesterAveInstance<f64>>, GenError> {
    (0..count)
        .map(|i| generate(&spec.with_seed(spec.seed.wrapping_add(i as u64))))
        .collect()
}
