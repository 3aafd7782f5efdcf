//! Spectral calculus: functions of Hermitian matrices, spectral projectors.

use super::{column, fro, inner, CMat, HermitianMatrix, C64};
use crate::error::{Error, Result};

/// Eigenvalues with `|lambda| <= DEFAULT_ZERO_TOL * max|lambda|` are treated as zero.
pub const DEFAULT_ZERO_TOL: f64 = 1e-12;

/// `A = V diag(values) V*`, values ascending, `V` unitary.
#[derive(Clone, Debug)]
pub struct SpectralDecomposition {
    pub values: Vec<f64>,
    pub vectors: CMat,
}

impl SpectralDecomposition {
    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn min(&self) -> f64 {
        self.values[0]
    }

    pub fn max(&self) -> f64 {
        self.values[self.dim() - 1]
    }

    /// Absolute threshold below which an eigenvalue counts as zero.
    pub fn zero_threshold(&self, zero_tol: f64) -> f64 {
        zero_tol * self.max_abs()
    }

    pub fn reconstruct(&self) -> CMat {
        self.apply_unchecked(|x| x, 0.0).into_mat()
    }

    /// `V diag(f(lambda_i)) V*` with near-zero eigenvalues snapped to zero first.
    pub fn apply<F: Fn(f64) -> f64>(&self, f: F, zero_tol: f64) -> HermitianMatrix {
        self.apply_unchecked(f, self.zero_threshold(zero_tol))
    }

    fn apply_unchecked<F: Fn(f64) -> f64>(&self, f: F, thr: f64) -> HermitianMatrix {
        let n = self.dim();
        let fv: Vec<f64> = self
            .values
            .iter()
            .map(|&l| f(if l.abs() <= thr { 0.0 } else { l }))
            .collect();
        let mut scaled = self.vectors.clone();
        for j in 0..n {
            for i in 0..n {
                scaled[(i, j)] *= fv[j];
            }
        }
        HermitianMatrix::symmetrize(scaled * self.vectors.adjoint()).expect("square")
    }

    /// Positive semidefinite check against the zero threshold.
    pub fn check_psd(&self, zero_tol: f64) -> Result<()> {
        let thr = self.zero_threshold(zero_tol);
        if self.min() < -thr {
            return Err(Error::NegativeEigenvalue { value: self.min() });
        }
        Ok(())
    }

    /// `A^p` on the range, zero on the kernel. Negative `p` gives the pseudo power.
    pub fn power(&self, p: f64, zero_tol: f64) -> Result<HermitianMatrix> {
        self.check_psd(zero_tol)?;
        Ok(self.apply(|l| if l > 0.0 { l.powf(p) } else { 0.0 }, zero_tol))
    }

    pub fn pseudo_inverse(&self, zero_tol: f64) -> HermitianMatrix {
        self.apply(|l| if l != 0.0 { 1.0 / l } else { 0.0 }, zero_tol)
    }

    /// Projector onto eigenvectors with eigenvalue in the closed interval `[a, b]`.
    pub fn projector_interval(&self, a: f64, b: f64) -> Result<Projection> {
        if a > b {
            return Err(Error::Domain(format!("empty interval [{a}, {b}]")));
        }
        Ok(self.select(|l| l >= a && l <= b))
    }

    /// Projector onto eigenvectors with eigenvalue strictly below `d`.
    pub fn projector_below(&self, d: f64) -> Projection {
        self.select(|l| l < d)
    }

    pub fn kernel(&self, zero_tol: f64) -> Projection {
        let thr = self.zero_threshold(zero_tol);
        self.select(|l| l.abs() <= thr)
    }

    pub fn range(&self, zero_tol: f64) -> Projection {
        let thr = self.zero_threshold(zero_tol);
        self.select(|l| l.abs() > thr)
    }

    fn select<F: Fn(f64) -> bool>(&self, keep: F) -> Projection {
        let n = self.dim();
        let cols: Vec<usize> = (0..n).filter(|&j| keep(self.values[j])).collect();
        let basis = CMat::from_fn(n, cols.len(), |i, k| self.vectors[(i, cols[k])]);
        Projection::from_basis_unchecked(basis, n)
    }
}

/// Free-function form of [`SpectralDecomposition::apply`].
pub fn apply_spectral_fn<F: Fn(f64) -> f64>(
    h: &HermitianMatrix,
    f: F,
    zero_tol: f64,
) -> Result<HermitianMatrix> {
    Ok(h.eig()?.apply(f, zero_tol))
}

pub fn spectral_projector(h: &HermitianMatrix, a: f64, b: f64) -> Result<Projection> {
    h.eig()?.projector_interval(a, b)
}

/// Orthogonal projector stored with an orthonormal basis of its range.
#[derive(Clone, Debug)]
pub struct Projection {
    basis: CMat,
    projector: CMat,
}

impl Projection {
    fn from_basis_unchecked(basis: CMat, n: usize) -> Self {
        let projector = if basis.ncols() == 0 {
            CMat::zeros(n, n)
        } else {
            &basis * basis.adjoint()
        };
        Self { basis, projector }
    }

    /// Wraps an orthonormal basis. Fails if the columns are not orthonormal.
    pub fn from_orthonormal(basis: CMat) -> Result<Self> {
        let k = basis.ncols();
        let g = basis.adjoint() * &basis;
        let d = fro(&(g - CMat::identity(k, k)));
        if d > 1e-10 {
            return Err(Error::Precondition(format!(
                "basis is not orthonormal (defect {d:.3e})"
            )));
        }
        let n = basis.nrows();
        Ok(Self::from_basis_unchecked(basis, n))
    }

    /// Projector onto the span of the columns of `vectors`.
    pub fn span(vectors: &CMat, rank_tol: f64) -> Self {
        let n = vectors.nrows();
        Self::from_basis_unchecked(orthonormal_span(vectors, rank_tol), n)
    }

    pub fn zero(n: usize) -> Self {
        Self::from_basis_unchecked(CMat::zeros(n, 0), n)
    }

    pub fn full(n: usize) -> Self {
        Self::from_basis_unchecked(CMat::identity(n, n), n)
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.nrows()
    }

    pub fn rank(&self) -> usize {
        self.basis.ncols()
    }

    pub fn basis(&self) -> &CMat {
        &self.basis
    }

    pub fn matrix(&self) -> &CMat {
        &self.projector
    }

    /// `I - P`.
    pub fn complement(&self) -> Projection {
        let n = self.ambient_dim();
        let comp = CMat::identity(n, n) - &self.projector;
        let mut basis = orthonormal_span(&comp, 1e-8);
        let want = n - self.rank();
        if basis.ncols() > want {
            basis = basis.columns(0, want).into_owned();
        }
        Self::from_basis_unchecked(basis, n)
    }

    /// `P - N` for a subprojection `N <= P`.
    pub fn minus(&self, sub: &Projection) -> Projection {
        let n = self.ambient_dim();
        let cand = (CMat::identity(n, n) - &sub.projector) * &self.basis;
        let mut basis = orthonormal_span(&cand, 1e-8);
        let want = self.rank().saturating_sub(sub.rank());
        if basis.ncols() > want {
            basis = basis.columns(0, want).into_owned();
        }
        Self::from_basis_unchecked(basis, n)
    }

    /// `||P H - H P||_F`.
    pub fn commutator_norm(&self, h: &CMat) -> f64 {
        fro(&(&self.projector * h - h * &self.projector))
    }
}

/// Orthonormal basis of the column span, by modified Gram-Schmidt with column
/// pivoting and one reorthogonalization pass. Columns whose residual falls
/// below `rank_tol` times the largest input column norm are dropped.
pub fn orthonormal_span(vectors: &CMat, rank_tol: f64) -> CMat {
    let n = vectors.nrows();
    let m = vectors.ncols();
    let mut work: Vec<CMat> = (0..m).map(|j| column(vectors, j)).collect();
    let ref_norm = work.iter().map(fro).fold(0.0, f64::max);
    let mut out: Vec<CMat> = Vec::new();
    let mut used = vec![false; m];
    if ref_norm == 0.0 {
        return CMat::zeros(n, 0);
    }
    loop {
        let mut best = None;
        let mut best_norm = rank_tol * ref_norm;
        for (j, w) in work.iter().enumerate() {
            if used[j] {
                continue;
            }
            let nj = fro(w);
            if nj > best_norm {
                best_norm = nj;
                best = Some(j);
            }
        }
        let Some(j) = best else { break };
        used[j] = true;
        let mut q = work[j].clone();
        for b in &out {
            let r = inner(b, &q);
            q -= b * r;
        }
        let nq = fro(&q);
        if nq <= rank_tol * ref_norm {
            continue;
        }
        q /= C64::new(nq, 0.0);
        for (k, w) in work.iter_mut().enumerate() {
            if !used[k] {
                let r = inner(&q, w);
                *w -= &q * r;
            }
        }
        out.push(q);
        if out.len() == n {
            break;
        }
    }
    let mut basis = CMat::zeros(n, out.len());
    for (k, q) in out.iter().enumerate() {
        basis.set_column(k, &q.column(0));
    }
    basis
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::real_matrix;

    #[test]
    fn square_root_of_spd() {
        let h = HermitianMatrix::from_real_rows(&[&[4.0, 1.0], &[1.0, 3.0]]).unwrap();
        let r = h.eig().unwrap().power(0.5, DEFAULT_ZERO_TOL).unwrap();
        let sq = r.as_mat() * r.as_mat();
        assert!(fro(&(sq - h.as_mat())) < 1e-14);
    }

    #[test]
    fn pseudo_power_of_singular_matrix() {
        let h = HermitianMatrix::from_real_diagonal(&[0.0, 4.0, 1e-20]);
        let d = h.eig().unwrap();
        let p = d.power(-0.5, DEFAULT_ZERO_TOL).unwrap();
        assert_eq!(p.as_mat()[(0, 0)].re, 0.0);
        assert_eq!(p.as_mat()[(2, 2)].re, 0.0);
        assert!((p.as_mat()[(1, 1)].re - 0.5).abs() < 1e-15);
        assert_eq!(d.range(DEFAULT_ZERO_TOL).rank(), 1);
        assert_eq!(d.kernel(DEFAULT_ZERO_TOL).rank(), 2);
    }

    #[test]
    fn power_rejects_negative() {
        let h = HermitianMatrix::from_real_diagonal(&[-1.0, 2.0]);
        assert!(matches!(
            h.eig().unwrap().power(0.5, DEFAULT_ZERO_TOL),
            Err(Error::NegativeEigenvalue { .. })
        ));
    }

    #[test]
    fn projector_interval_and_complement() {
        let h = HermitianMatrix::from_real_diagonal(&[1.0, 2.0, 3.0, 4.0]);
        let p = spectral_projector(&h, 1.5, 3.0).unwrap();
        assert_eq!(p.rank(), 2);
        let q = p.complement();
        assert_eq!(q.rank(), 2);
        let sum = p.matrix() + q.matrix();
        assert!(fro(&(sum - CMat::identity(4, 4))) < 1e-14);
        assert!(p.commutator_norm(h.as_mat()) < 1e-14);
        assert!(spectral_projector(&h, 3.0, 1.0).is_err());
    }

    #[test]
    fn span_drops_dependent_columns_and_minus() {
        let v = real_matrix(&[&[1.0, 2.0, 0.0], &[0.0, 0.0, 1.0], &[0.0, 0.0, 0.0]]);
        let p = Projection::span(&v, 1e-10);
        assert_eq!(p.rank(), 2);
        let e1 = Projection::span(&real_matrix(&[&[1.0], &[0.0], &[0.0]]), 1e-10);
        let rest = p.minus(&e1);
        assert_eq!(rest.rank(), 1);
        assert!((rest.matrix()[(1, 1)].re - 1.0).abs() < 1e-15);
    }
}
