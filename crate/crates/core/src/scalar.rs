//! Floating-point scalar abstraction shared by every numerical routine.

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Real floating-point type the library can compute with.
///
/// The associated constants are the default tolerances. For `f64` they are
/// the documented values (pivot tolerance `1e-13`, strictness `1e-10`, ...);
/// for `f32` they are scaled to its much coarser unit roundoff.
pub trait Scalar:
    Float + FromPrimitive + ToPrimitive + Sum + Debug + Display + LowerExp + Default + Send + Sync + 'static
{
    /// LU pivots smaller than this times the largest input entry flag singularity.
    const PIVOT_TOL: Self;
    /// Relative band below which a determinant is "singular within tolerance".
    const SINGULAR_BAND: Self;
    /// Margin needed before a strict inequality is declared to hold.
    const STRICTNESS_TOL: Self;
    /// Successive-estimate tolerance for power iteration.
    const POWER_TOL: Self;
    /// Successive-estimate tolerance for the Gelfand squaring estimate.
    const GELFAND_TOL: Self;
    /// Sign-consistency slack used when validating candidate solutions.
    const CONSISTENCY_TOL: Self;
    /// Distance under which two solution vectors are considered the same.
    const DEDUP_TOL: Self;
    /// Default residual tolerance for iterative solves.
    const RESIDUAL_TOL: Self;

    /// Converts an `f64` literal. Panics only for values the type cannot hold,
    /// which never happens for the literals used in this crate.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable in scalar type")
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f64 {
    const PIVOT_TOL: Self = 1e-13;
    const SINGULAR_BAND: Self = 1e-12;
    const STRICTNESS_TOL: Self = 1e-10;
    const POWER_TOL: Self = 1e-10;
    const GELFAND_TOL: Self = 1e-6;
    const CONSISTENCY_TOL: Self = 1e-9;
    const DEDUP_TOL: Self = 1e-8;
    const RESIDUAL_TOL: Self = 1e-10;
}

impl Scalar for f32 {
    const PIVOT_TOL: Self = 1e-6;
    const SINGULAR_BAND: Self = 1e-5;
    const STRICTNESS_TOL: Self = 1e-4;
    const POWER_TOL: Self = 1e-5;
    const GELFAND_TOL: Self = 1e-4;
    const CONSISTENCY_TOL: Self = 1e-4;
    const DEDUP_TOL: Self = 1e-3;
    const RESIDUAL_TOL: Self = 1e-4;
}
