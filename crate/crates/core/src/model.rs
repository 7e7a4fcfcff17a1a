//! Instances of `A·X·B − |C·X·D| = F` and their Kronecker-flattened form
//! `S·x − |T·x| = f` with `S = Bᵀ⊗A`, `T = Dᵀ⊗C`, `x = vec(X)`, `f = vec(F)`.

use thiserror::Error;

use crate::linalg::{entrywise_abs, kron_capped, vec, LinalgError, Matrix};
use crate::Scalar;

/// Default cap on the entry count of each flattened matrix `S`, `T`.
pub const DEFAULT_FLAT_CAP: usize = 65_536;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("{name} has shape {found:?}, expected {expected:?}")]
    Shape { name: &'static str, expected: (usize, usize), found: (usize, usize) },
    #[error(
        "flattened system would need {requested} entries per matrix (cap {cap}); \
         use the matrix-form certifiers and solver instead"
    )]
    TooLarge { requested: usize, cap: usize },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// `A, C ∈ R^{m×n}`, `B, D ∈ R^{p×q}`, `F ∈ R^{m×q}`; the unknown `X` is `n×p`.
#[derive(Debug, Clone, PartialEq)]
pub struct SylvesterAveInstance<T> {
    a: Matrix<T>,
    b: Matrix<T>,
    c: Matrix<T>,
    d: Matrix<T>,
    f: Matrix<T>,
}

/// Dimensions `(m, n, p, q)` of an instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Dims {
    pub m: usize,
    pub n: usize,
    pub p: usize,
    pub q: usize,
}

impl Dims {
    /// Rows and columns of the flattened `S`, `T`: `(m·q, n·p)`.
    pub fn flat_shape(&self) -> (usize, usize) {
        (self.m * self.q, self.n * self.p)
    }

    pub fn is_flat_square(&self) -> bool {
        self.m * self.q == self.n * self.p
    }
}

/// Coefficients and right-hand side, in the order `(A, B, C, D, F)`.
pub type Parts<T> = (Matrix<T>, Matrix<T>, Matrix<T>, Matrix<T>, Matrix<T>);

impl<T: Scalar> SylvesterAveInstance<T> {
    pub fn new(
        a: Matrix<T>,
        b: Matrix<T>,
        c: Matrix<T>,
        d: Matrix<T>,
        f: Matrix<T>,
    ) -> Result<Self, ModelError> {
        let (m, n) = a.shape();
        let (p, q) = b.shape();
        let check = |name, mat: &Matrix<T>, expected: (usize, usize)| {
            if mat.shape() == expected {
                Ok(())
            } else {
                Err(ModelError::Shape { name, expected, found: mat.shape() })
            }
        };
        check("C", &c, (m, n))?;
        check("D", &d, (p, q))?;
        check("F", &f, (m, q))?;
        Ok(Self { a, b, c, d, f })
    }

    pub fn a(&self) -> &Matrix<T> {
        &self.a
    }
    pub fn b(&self) -> &Matrix<T> {
        &self.b
    }
    pub fn c(&self) -> &Matrix<T> {
        &self.c
    }
    pub fn d(&self) -> &Matrix<T> {
        &self.d
    }
    pub fn f(&self) -> &Matrix<T> {
        &self.f
    }

    pub fn dims(&self) -> Dims {
        let (m, n) = self.a.shape();
        let (p, q) = self.b.shape();
        Dims { m, n, p, q }
    }

    /// Same coefficients with a different right-hand side.
    pub fn with_rhs(&self, f: Matrix<T>) -> Result<Self, ModelError> {
        Self::new(self.a.clone(), self.b.clone(), self.c.clone(), self.d.clone(), f)
    }

    /// Replaces `C`, `D` (shapes must match).
    pub fn with_cd(&self, c: Matrix<T>, d: Matrix<T>) -> Result<Self, ModelError> {
        Self::new(self.a.clone(), self.b.clone(), c, d, self.f.clone())
    }

    /// `(A, B, C, D, F)`.
    pub fn into_parts(self) -> Parts<T> {
        (self.a, self.b, self.c, self.d, self.f)
    }

    fn check_unknown(&self, x: &Matrix<T>) -> Result<(), ModelError> {
        let Dims { n, p, .. } = self.dims();
        if x.shape() != (n, p) {
            return Err(ModelError::Shape { name: "X", expected: (n, p), found: x.shape() });
        }
        Ok(())
    }

    /// `A·X·B − |C·X·D| − F`, computed without forming `S` or `T`.
    pub fn residual_matrix(&self, x: &Matrix<T>) -> Result<Matrix<T>, ModelError> {
        self.check_unknown(x)?;
        let axb = self.a.matmul(x)?.matmul(&self.b)?;
        let cxd = self.c.matmul(x)?.matmul(&self.d)?;
        Ok(axb.sub(&entrywise_abs(&cxd))?.sub(&self.f)?)
    }
}

/// Frobenius norm of `A·X·B − |C·X·D| − F`.
pub fn residual<T: Scalar>(inst: &SylvesterAveInstance<T>, x: &Matrix<T>) -> Result<T, ModelError> {
    Ok(inst.residual_matrix(x)?.frobenius_norm())
}

/// The flattened system `S·x − |T·x| = f`.
#[derive(Debug, Clone, PartialEq)]
pub struct NgaveForm<T> {
    s: Matrix<T>,
    t: Matrix<T>,
    f: Matrix<T>,
}

impl<T: Scalar> NgaveForm<T> {
    /// Builds a form directly. `s` and `t` must share a shape; `f` is a column
    /// with as many rows as `s`.
    pub fn new(s: Matrix<T>, t: Matrix<T>, f: Matrix<T>) -> Result<Self, ModelError> {
        if t.shape() != s.shape() {
            return Err(ModelError::Shape { name: "T", expected: s.shape(), found: t.shape() });
        }
        if f.shape() != (s.rows(), 1) {
            return Err(ModelError::Shape { name: "f", expected: (s.rows(), 1), found: f.shape() });
        }
        Ok(Self { s, t, f })
    }

    pub fn s(&self) -> &Matrix<T> {
        &self.s
    }
    pub fn t(&self) -> &Matrix<T> {
        &self.t
    }
    pub fn rhs(&self) -> &Matrix<T> {
        &self.f
    }

    /// True iff `S` and `T` are square (`m·q = n·p`).
    pub fn is_square(&self) -> bool {
        self.s.is_square()
    }

    /// Number of unknowns `n·p`.
    pub fn unknowns(&self) -> usize {
        self.s.cols()
    }

    pub fn with_rhs(&self, f: Matrix<T>) -> Result<Self, ModelError> {
        Self::new(self.s.clone(), self.t.clone(), f)
    }
}

/// Flattens an instance, rejecting it when either Kronecker factor would
/// exceed [`DEFAULT_FLAT_CAP`] entries.
pub fn reformulate<T: Scalar>(inst: &SylvesterAveInstance<T>) -> Result<NgaveForm<T>, ModelError> {
    reformulate_capped(inst, DEFAULT_FLAT_CAP)
}

pub fn reformulate_capped<T: Scalar>(
    inst: &SylvesterAveInstance<T>,
    cap: usize,
) -> Result<NgaveForm<T>, ModelError> {
    let (rows, cols) = inst.dims().flat_shape();
    let requested = rows.saturating_mul(cols);
    if requested > cap {
        return Err(ModelError::TooLarge { requested, cap });
    }
    let s = kron_capped(&inst.b().transpose(), inst.a(), cap)?;
    let t = kron_capped(&inst.d().transpose(), inst.c(), cap)?;
    NgaveForm::new(s, t, vec(inst.f()))
}

/// Euclidean norm of `S·x − |T·x| − f`.
pub fn ngave_residual<T: Scalar>(form: &NgaveForm<T>, x: &Matrix<T>) -> Result<T, ModelError> {
    let expected = (form.unknowns(), 1);
    if x.shape() != expected {
        return Err(ModelError::Shape { name: "x", expected, found: x.shape() });
    }
    let sx = form.s.matmul(x)?;
    let tx = form.t.matmul(x)?;
    Ok(sx.sub(&entrywise_abs(&tx))?.sub(&form.f)?.frobenius_norm())
}
