//! Unique-solvability certificates, exact small-scale oracles and solvers for
//! the Sylvester-like absolute value equation
//!
//! ```text
//! A·X·B − |C·X·D| = F,    A, C ∈ R^{m×n},  B, D ∈ R^{p×q},  F ∈ R^{m×q}
//! ```
//!
//! All numerical code is generic over [`Scalar`] (`f32` or `f64`); the `*64`
//! aliases below fix the scalar to `f64`, which is what the tolerances are
//! specified for and what the instance generator produces.

pub mod certify;
pub mod gen;
pub mod linalg;
pub mod model;
pub mod oracle;
pub mod rng;
mod scalar;
pub mod solver;

pub use certify::{Certificate, ConditionId, Verdict};
pub use linalg::{LinalgError, Matrix};
pub use model::{Dims, NgaveForm, SylvesterAveInstance};
pub use oracle::{Uniqueness, UniquenessVerdict};
pub use scalar::Scalar;
pub use solver::SolveReport;

pub type Matrix64 = Matrix<f64>;
pub type Matrix32 = Matrix<f32>;
pub type Instance64 = SylvesterAveInstance<f64>;
pub type Instance32 = SylvesterAveInstance<f32>;
pub type NgaveForm64 = NgaveForm<f64>;
pub type Certificate64 = Certificate<f64>;
pub type UniquenessVerdict64 = UniquenessVerdict<f64>;
pub type SolveReport64 = SolveReport<f64>;
