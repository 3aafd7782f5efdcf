//! A posteriori bounds for a trial subspace `range(P)` of a positive definite `H`.
//!
//! The construction splits `H` into its block-diagonal part
//! `H_P = P H P + P_perp H P_perp` and measures the off-diagonal remainder
//! relative to `H_P`: the numbers `eta_i` are the singular values of
//! `dH_s P` with `dH_s = H_P^{-1/2} (H - H_P) H_P^{-1/2}`.

use crate::error::{Error, Result};
use crate::matcore::{fro, hs_norm, op_norm, singular_values, CMat, HermitianMatrix, Projection, DEFAULT_ZERO_TOL};
use crate::report::{BoundReport, NormKind};
use serde::Serialize;

/// Agreement expected between the two routes to the eta spectrum.
pub const ETA_ROUTE_TOL: f64 = 1e-9;
/// Disagreement beyond this is treated as an internal error.
pub const ETA_ROUTE_FATAL: f64 = 1e-7;

fn check_pd(h: &HermitianMatrix) -> Result<crate::matcore::SpectralDecomposition> {
    let e = h.eig()?;
    if e.min() <= DEFAULT_ZERO_TOL * e.max_abs() {
        return Err(Error::NotPositiveDefinite {
            min_eigenvalue: e.min(),
        });
    }
    Ok(e)
}

fn check_dims(h: &HermitianMatrix, p: &Projection) -> Result<()> {
    if p.ambient_dim() != h.dim() {
        return Err(Error::Dimension(format!(
            "projection acts on C^{}, H is {}x{}",
            p.ambient_dim(),
            h.dim(),
            h.dim()
        )));
    }
    Ok(())
}

/// `H_P = P H P + P_perp H P_perp`.
pub fn build_hp(h: &HermitianMatrix, p: &Projection) -> Result<HermitianMatrix> {
    check_dims(h, p)?;
    check_pd(h)?;
    let n = h.dim();
    let pm = p.matrix();
    let qm = CMat::identity(n, n) - pm;
    HermitianMatrix::symmetrize(pm * h.as_mat() * pm + &qm * h.as_mat() * &qm)
}

/// `dH_s = H_P^{-1/2} (H - H_P) H_P^{-1/2}`.
pub fn delta_hs(h: &HermitianMatrix, p: &Projection) -> Result<CMat> {
    let hp = build_hp(h, p)?;
    let r = hp.eig()?.power(-0.5, DEFAULT_ZERO_TOL)?;
    Ok(r.as_mat() * (h.as_mat() - hp.as_mat()) * r.as_mat())
}

#[derive(Clone, Debug, Serialize)]
pub struct EtaSpectrum {
    /// Singular values of `dH_s P`, ascending, one per dimension of `range(P)`.
    pub svd_route: Vec<f64>,
    /// Square roots of the pencil eigenvalues, ascending.
    pub pencil_route: Vec<f64>,
    pub max_disagreement: f64,
}

impl EtaSpectrum {
    pub fn etas(&self) -> &[f64] {
        &self.svd_route
    }

    pub fn eta_max(&self) -> f64 {
        self.svd_route.last().copied().unwrap_or(0.0)
    }
}

/// Computes the eta values twice and cross-checks.
///
/// Route (b) uses the pencil `(B*(H^{-1} - H_P^{-1})B, B* H^{-1} B)` on an
/// orthonormal basis `B` of `range(P)`. Its eigenvalues are the squares
/// `eta_i^2`; the square roots are returned. Zero `eta_i` occur whenever
/// `rank P > n/2`, so the first matrix is kept in factored form.
pub fn eta_spectrum(h: &HermitianMatrix, p: &Projection) -> Result<EtaSpectrum> {
    check_dims(h, p)?;
    let k = p.rank();
    if k == 0 {
        return Ok(EtaSpectrum {
            svd_route: vec![],
            pencil_route: vec![],
            max_disagreement: 0.0,
        });
    }
    let hp = build_hp(h, p)?;
    let he = check_pd(h)?;
    let hpe = hp.eig()?;
    let r = hpe.power(-0.5, DEFAULT_ZERO_TOL)?;
    let d = r.as_mat() * (h.as_mat() - hp.as_mat()) * r.as_mat();
    let mut a: Vec<f64> = singular_values(&(d * p.basis()))?;
    a.reverse();

    // On range(P), H_P^{-1} acts as Hc^{-1} with Hc = B* H B, and
    // B*(H^{-1} - H_P^{-1})B = Hc^{-1} Z* H^{-1} Z Hc^{-1} with Z = P_perp H B.
    // Forming it as W* W, W = H^{-1/2} Z Hc^{-1}, avoids the cancellation in
    // the difference, so the pencil eigenvalues are squared singular values.
    let basis = p.basis();
    let n = h.dim();
    let z = (CMat::identity(n, n) - p.matrix()) * h.as_mat() * basis;
    let hc_inv = check_pd(&h.compress(basis))?.power(-1.0, DEFAULT_ZERO_TOL)?;
    let w = he.power(-0.5, DEFAULT_ZERO_TOL)?.as_mat() * z * hc_inv.as_mat();
    let y = he.power(-1.0, DEFAULT_ZERO_TOL)?.compress(basis);
    let yr = check_pd(&y)?.power(-0.5, DEFAULT_ZERO_TOL)?;
    let mut b = singular_values(&(w * yr.as_mat()))?;
    b.reverse();

    let max_disagreement = a
        .iter()
        .zip(&b)
        .fold(0.0f64, |m, (x, y)| m.max((x - y).abs()));
    if max_disagreement > ETA_ROUTE_FATAL {
        return Err(Error::Consistency(format!(
            "eta routes disagree by {max_disagreement:.3e}"
        )));
    }
    Ok(EtaSpectrum {
        svd_route: a,
        pencil_route: b,
        max_disagreement,
    })
}

/// Pencil route from compressed data alone: `hc = B* H B` and
/// `hinv_c = B* H^{-1} B` for an orthonormal basis `B` of the trial space.
///
/// Useful when `H` is only known through its form on the trial space and
/// through `H^{-1}`, as for differential operators.
pub fn pencil_etas(hc: &HermitianMatrix, hinv_c: &HermitianMatrix) -> Result<Vec<f64>> {
    if hc.dim() != hinv_c.dim() {
        return Err(Error::Dimension("compressions differ in size".into()));
    }
    let hc_inv = check_pd(hc)?.power(-1.0, DEFAULT_ZERO_TOL)?;
    let x = HermitianMatrix::symmetrize(hinv_c.as_mat() - hc_inv.as_mat())?;
    let yr = check_pd(hinv_c)?.power(-0.5, DEFAULT_ZERO_TOL)?;
    let mut b: Vec<f64> = x
        .compress(yr.as_mat())
        .eig()?
        .values
        .iter()
        .map(|&v| v.max(0.0).sqrt())
        .collect();
    b.sort_by(f64::total_cmp);
    Ok(b)
}

/// Rayleigh-Ritz data of `range(P)`: Ritz values ascending and Ritz vectors
/// (columns, in ambient coordinates).
pub fn ritz_pairs(h: &HermitianMatrix, p: &Projection) -> Result<(Vec<f64>, CMat)> {
    check_dims(h, p)?;
    if p.rank() == 0 {
        return Ok((vec![], CMat::zeros(h.dim(), 0)));
    }
    let e = h.compress(p.basis()).eig()?;
    Ok((e.values.clone(), p.basis() * &e.vectors))
}

#[derive(Clone, Debug, Serialize)]
pub struct RitzEstimate {
    pub norm: NormKind,
    pub etas: Vec<f64>,
    /// Largest Ritz value.
    pub ritz_max: f64,
    /// Smallest Ritz value.
    pub ritz_min: f64,
    /// Lower bound for the next eigenvalue `lambda_{n+1}`.
    pub next: f64,
    /// `sqrt(D D_P)/(D - D_P)`.
    pub factor: f64,
    /// `eta_n/(1-eta_n) < (D - D_P)/(D + D_P)`.
    pub hypothesis_ok: bool,
    pub bound_op: Option<f64>,
    pub bound_hs: Option<f64>,
    /// `sqrt(D d_P)/(D - d_P) * eta_n / sqrt(1 - eta_n)`.
    pub single_vector_bound: Option<f64>,
    pub dk_bound: Option<f64>,
    /// `|||E_H(lambda_n)_perp P|||` from the exact spectral data of `H`.
    pub true_op: f64,
    pub true_hs: f64,
    pub report: BoundReport,
}

impl RitzEstimate {
    pub fn true_err(&self) -> f64 {
        match self.norm {
            NormKind::Op => self.true_op,
            NormKind::Hs => self.true_hs,
        }
    }
}

/// The functional form of the bound, given precomputed ingredients.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RitzBoundParts {
    pub factor: f64,
    pub hypothesis_ok: bool,
    pub bound_op: Option<f64>,
    pub bound_hs: Option<f64>,
    pub single_vector_bound: Option<f64>,
}

/// Evaluates the bound formulas. Values are produced whenever they are
/// finite (`D > D_P`, `eta_n < 1`); the hypothesis flag is reported separately.
pub fn ritz_bound_parts(etas: &[f64], ritz_min: f64, ritz_max: f64, next: f64) -> RitzBoundParts {
    let eta_n = etas.iter().copied().fold(0.0, f64::max);
    let computable = next > ritz_max && eta_n < 1.0 && ritz_max > 0.0;
    let factor = if next > ritz_max {
        (next * ritz_max).sqrt() / (next - ritz_max)
    } else {
        f64::INFINITY
    };
    let hypothesis_ok = computable && eta_n / (1.0 - eta_n) < (next - ritz_max) / (next + ritz_max);
    let damp = (1.0 - eta_n).sqrt();
    let hs = etas.iter().map(|e| e * e).sum::<f64>().sqrt();
    let single = (next > ritz_min && eta_n < 1.0 && ritz_min > 0.0)
        .then(|| (next * ritz_min).sqrt() / (next - ritz_min) * eta_n / damp);
    RitzBoundParts {
        factor,
        hypothesis_ok,
        bound_op: computable.then(|| factor * eta_n / damp),
        bound_hs: computable.then(|| factor * hs / damp),
        single_vector_bound: single,
    }
}

/// Bounds `|||E_H(lambda_n)_perp P|||` for `n = rank P`, given `next`, a
/// lower bound for `lambda_{n+1}(H)`.
pub fn ritz_bounds(h: &HermitianMatrix, p: &Projection, next: f64, norm: NormKind) -> Result<RitzEstimate> {
    let eta = eta_spectrum(h, p)?;
    let (ritz, _) = ritz_pairs(h, p)?;
    let k = p.rank();
    if k == 0 {
        return Err(Error::Precondition("trial subspace is empty".into()));
    }
    let (ritz_min, ritz_max) = (ritz[0], ritz[k - 1]);
    let parts = ritz_bound_parts(eta.etas(), ritz_min, ritz_max, next);

    let he = h.eig()?;
    let low = he.vectors.columns(0, k).into_owned();
    let n = h.dim();
    let e_perp = CMat::identity(n, n) - &low * low.adjoint();
    let err = e_perp * p.matrix();
    let true_op = op_norm(&err)?;
    let true_hs = hs_norm(&err);

    let value = match norm {
        NormKind::Op => parts.bound_op,
        NormKind::Hs => parts.bound_hs,
    };
    let name = format!("ritz_{norm}");
    let truth = match norm {
        NormKind::Op => true_op,
        NormKind::Hs => true_hs,
    };
    let mut report = match value {
        Some(v) => BoundReport::ok(name, v),
        None => BoundReport::not_applicable(name, "next eigenvalue bound does not exceed the largest Ritz value, or eta_n >= 1"),
    }
    .with_truth(truth);
    report.hypothesis_ok = parts.hypothesis_ok;
    Ok(RitzEstimate {
        norm,
        etas: eta.svd_route,
        ritz_max,
        ritz_min,
        next,
        factor: parts.factor,
        hypothesis_ok: parts.hypothesis_ok,
        bound_op: parts.bound_op,
        bound_hs: parts.bound_hs,
        single_vector_bound: parts.single_vector_bound,
        dk_bound: None,
        true_op,
        true_hs,
        report,
    })
}

/// Residual-based competitor, from the Gram matrix `R_ij = (r_i, r_j)` of
/// the residuals `r = H w - (w, H w) w` of unit trial vectors.
///
/// HS: `sqrt(tr R)/(D - D_P)`. Operator: `sqrt(s_1(R))/(D - d_P)`.
pub fn dk_bound_from_residual_gram(
    gram: &CMat,
    ritz_min: f64,
    ritz_max: f64,
    next: f64,
    norm: NormKind,
) -> Result<BoundReport> {
    let g = HermitianMatrix::new(gram.clone())?;
    let e = g.eig()?;
    let name = format!("dk_{norm}");
    let (num, den) = match norm {
        NormKind::Hs => (e.values.iter().map(|v| v.max(0.0)).sum::<f64>().sqrt(), next - ritz_max),
        NormKind::Op => (e.max().max(0.0).sqrt(), next - ritz_min),
    };
    Ok(if den > 0.0 {
        BoundReport::ok(name, num / den)
    } else {
        BoundReport::not_applicable(name, "denominator is not positive")
    })
}

/// Residual bound for the trial vectors given as the orthonormal columns of `w`.
pub fn dk_residual_bound(h: &HermitianMatrix, w: &CMat, next: f64, norm: NormKind) -> Result<BoundReport> {
    if w.nrows() != h.dim() {
        return Err(Error::Dimension("trial basis has the wrong number of rows".into()));
    }
    let k = w.ncols();
    let defect = fro(&(w.adjoint() * w - CMat::identity(k, k)));
    if defect > 1e-10 {
        return Err(Error::Precondition(format!(
            "trial vectors must be orthonormal (defect {defect:.3e})"
        )));
    }
    let hw = h.as_mat() * w;
    let mut res = hw.clone();
    for j in 0..k {
        let q = (w.column(j).adjoint() * hw.column(j))[(0, 0)].re;
        for i in 0..w.nrows() {
            res[(i, j)] -= w[(i, j)] * q;
        }
    }
    let gram = res.adjoint() * &res;
    let ritz = h.compress(w).eig()?.values;
    dk_bound_from_residual_gram(&gram, ritz[0], ritz[k - 1], next, norm)
}
