//! Dense Hermitian linear algebra.
//!
//! Everything downstream works with [`CMat`], a dense complex matrix. Real
//! inputs are carried as complex matrices with zero imaginary part; the text
//! format keeps track of the field so real data round-trips as real.

mod eig;
pub mod io;
mod norms;
mod spectral;
mod svd;

pub use eig::{eig_herm, MAX_SWEEPS};
pub use norms::{hs_norm, norms, op_norm, Norms};
pub use spectral::{
    apply_spectral_fn, orthonormal_span, spectral_projector, Projection, SpectralDecomposition,
    DEFAULT_ZERO_TOL,
};
pub use svd::{singular_values, svd, Svd};

use crate::error::{Error, Result};
use nalgebra::DMatrix;
pub use num_complex::Complex64 as C64;

/// Dense complex matrix, column major.
pub type CMat = DMatrix<C64>;

/// Relative asymmetry accepted by [`HermitianMatrix::new`] before the input
/// is rejected. Accepted inputs are symmetrized exactly.
const HERMITIAN_INPUT_TOL: f64 = 1e-8;

#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

#[inline]
pub fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// Builds a complex matrix from real rows.
pub fn real_matrix(rows: &[&[f64]]) -> CMat {
    let n = rows.len();
    let m = rows.first().map_or(0, |r| r.len());
    CMat::from_fn(n, m, |i, j| re(rows[i][j]))
}

pub fn real_diag(d: &[f64]) -> CMat {
    let n = d.len();
    CMat::from_fn(n, n, |i, j| if i == j { re(d[i]) } else { C64::new(0.0, 0.0) })
}

/// Frobenius norm.
pub fn fro(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn is_real(m: &CMat) -> bool {
    m.iter().all(|z| z.im == 0.0)
}

/// Column `j` as an `n x 1` matrix.
pub fn column(m: &CMat, j: usize) -> CMat {
    CMat::from_column_slice(m.nrows(), 1, m.column(j).as_slice())
}

/// `(x, y) = x* y`, conjugate linear in the first argument.
pub fn inner(x: &CMat, y: &CMat) -> C64 {
    x.iter().zip(y.iter()).map(|(a, b)| a.conj() * b).sum()
}

/// Dense self-adjoint matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianMatrix {
    inner: CMat,
}

impl HermitianMatrix {
    /// Validates conjugate symmetry (up to a small relative defect) and
    /// symmetrizes.
    pub fn new(m: CMat) -> Result<Self> {
        check_square(&m)?;
        let scale = fro(&m);
        let asym = fro(&(&m - m.adjoint()));
        if scale > 0.0 && asym > HERMITIAN_INPUT_TOL * scale {
            return Err(Error::NotHermitian {
                asymmetry: asym / scale,
            });
        }
        Ok(Self::symmetrize(m).expect("square checked"))
    }

    /// Replaces `m` by `(m + m*)/2` without checking how far from Hermitian it was.
    pub fn symmetrize(m: CMat) -> Result<Self> {
        check_square(&m)?;
        let h = (&m + m.adjoint()).scale(0.5);
        Ok(Self { inner: h })
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        Self::new(real_matrix(rows))
    }

    pub fn from_real_diagonal(d: &[f64]) -> Self {
        assert!(!d.is_empty(), "dimension must be positive");
        Self { inner: real_diag(d) }
    }

    pub fn identity(n: usize) -> Self {
        assert!(n > 0, "dimension must be positive");
        Self {
            inner: CMat::identity(n, n),
        }
    }

    pub fn dim(&self) -> usize {
        self.inner.nrows()
    }

    pub fn as_mat(&self) -> &CMat {
        &self.inner
    }

    pub fn into_mat(self) -> CMat {
        self.inner
    }

    pub fn is_real(&self) -> bool {
        is_real(&self.inner)
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self {
            inner: self.inner.scale(s),
        }
    }

    pub fn plus(&self, other: &HermitianMatrix) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::Dimension(format!(
                "{} vs {}",
                self.dim(),
                other.dim()
            )));
        }
        Self::symmetrize(&self.inner + &other.inner)
    }

    /// `u* A u`, the compression of `A` to the column space of `u`.
    pub fn compress(&self, u: &CMat) -> Self {
        let m = u.adjoint() * &self.inner * u;
        Self::symmetrize(m).expect("compression is square")
    }

    pub fn eig(&self) -> Result<SpectralDecomposition> {
        eig_herm(self)
    }
}

fn check_square(m: &CMat) -> Result<()> {
    if m.nrows() != m.ncols() {
        return Err(Error::NotSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    if m.nrows() == 0 {
        return Err(Error::Empty);
    }
    Ok(())
}
