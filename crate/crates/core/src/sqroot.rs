//! Perturbation of the square root of a positive definite matrix.
//!
//! With `T = M^{1/2} H^{-1/2} - M^{-1/2} H^{1/2}` and
//! `X = M^{1/4} H^{-1/4} - M^{-1/4} H^{1/4}` one has
//! `M^{1/4} X H^{-1/4} + M^{-1/4} X H^{1/4} = T` and `||X|| <= ||T||/2`,
//! the matrix version of `|sqrt m - sqrt h| / (mh)^{1/4} <= |m - h| / (2 sqrt(mh))`.

use crate::error::{Error, Result};
use crate::matcore::{op_norm, CMat, HermitianMatrix, SpectralDecomposition, C64, DEFAULT_ZERO_TOL};
use crate::quad::{integrate, QuadOptions};
use serde::Serialize;

#[derive(Clone, Debug, Serialize)]
pub struct SqrtPerturbation {
    #[serde(skip)]
    pub t: CMat,
    #[serde(skip)]
    pub x: CMat,
    pub norm_t: f64,
    pub norm_x: f64,
    /// `||T||/2 - ||X||`, nonnegative up to roundoff.
    pub margin: f64,
    /// `||M^{1/4} X H^{-1/4} + M^{-1/4} X H^{1/4} - T||`.
    pub sylvester_defect: f64,
}

fn pd_eig(h: &HermitianMatrix) -> Result<SpectralDecomposition> {
    let e = h.eig()?;
    if e.min() <= DEFAULT_ZERO_TOL * e.max_abs() {
        return Err(Error::NotPositiveDefinite {
            min_eigenvalue: e.min(),
        });
    }
    Ok(e)
}

fn same_dim(h: &HermitianMatrix, m: &HermitianMatrix) -> Result<()> {
    if h.dim() != m.dim() {
        return Err(Error::Dimension(format!("{} vs {}", h.dim(), m.dim())));
    }
    Ok(())
}

pub fn sqrt_pair(h: &HermitianMatrix, m: &HermitianMatrix) -> Result<SqrtPerturbation> {
    same_dim(h, m)?;
    let he = pd_eig(h)?;
    let me = pd_eig(m)?;
    let pw = |e: &SpectralDecomposition, p: f64| e.power(p, DEFAULT_ZERO_TOL).map(HermitianMatrix::into_mat);
    let (h2, hm2, h4, hm4) = (pw(&he, 0.5)?, pw(&he, -0.5)?, pw(&he, 0.25)?, pw(&he, -0.25)?);
    let (m2, mm2, m4, mm4) = (pw(&me, 0.5)?, pw(&me, -0.5)?, pw(&me, 0.25)?, pw(&me, -0.25)?);
    let t = &m2 * &hm2 - &mm2 * &h2;
    let x = &m4 * &hm4 - &mm4 * &h4;
    let lhs = &m4 * &x * &hm4 + &mm4 * &x * &h4;
    let norm_t = op_norm(&t)?;
    let norm_x = op_norm(&x)?;
    Ok(SqrtPerturbation {
        sylvester_defect: op_norm(&(lhs - &t))?,
        margin: norm_t / 2.0 - norm_x,
        norm_t,
        norm_x,
        t,
        x,
    })
}

#[derive(Clone, Debug)]
pub struct SqrtIntegral {
    pub x: CMat,
    pub error_estimate: f64,
    /// `||int_0^inf exp(-2Ct) C dt - I/2||` for `C = H^{-1/2}`, by the same quadrature.
    pub identity_defect: f64,
}

/// Quadrature options shared by the integral evaluations below.
fn opts(tol: f64) -> QuadOptions {
    QuadOptions {
        abs_tol: tol,
        rel_tol: 0.1 * tol,
        max_intervals: 100_000,
    }
}

/// Integrates `V diag(e^{-a t}) G diag(e^{-b t}) W*` over `t in [0, inf)`
/// using `t = -scale ln(1 - s)` with `scale = 1/(min a + min b)`.
fn exp_sandwich(
    va: &CMat,
    a: &[f64],
    g: &CMat,
    b: &[f64],
    vb: &CMat,
    tol: f64,
) -> Result<(CMat, f64)> {
    let amin = a.iter().copied().fold(f64::INFINITY, f64::min);
    let bmin = b.iter().copied().fold(f64::INFINITY, f64::min);
    let scale = 1.0 / (amin + bmin);
    let integrand = |s: f64| {
        let w = 1.0 - s;
        let mut out = g.clone();
        for j in 0..b.len() {
            for i in 0..a.len() {
                // e^{-(a_i + b_j) t} dt/ds = (1-s)^{(a_i+b_j) scale - 1} scale
                let e = (a[i] + b[j]) * scale - 1.0;
                out[(i, j)] *= w.powf(e) * scale;
            }
        }
        out
    };
    let r = integrate(integrand, 0.0, 1.0, opts(tol))?;
    Ok((va * r.value * vb.adjoint(), r.error))
}

/// `X = int_0^inf e^{-M^{-1/2} t} M^{-1/4} T H^{-1/4} e^{-H^{-1/2} t} dt` by quadrature.
pub fn sqrt_integral_solution(h: &HermitianMatrix, m: &HermitianMatrix, tol: f64) -> Result<SqrtIntegral> {
    if !(tol > 0.0) {
        return Err(Error::Domain(format!("tolerance must be positive, got {tol}")));
    }
    same_dim(h, m)?;
    let sp = sqrt_pair(h, m)?;
    let he = pd_eig(h)?;
    let me = pd_eig(m)?;
    let mm4 = me.power(-0.25, DEFAULT_ZERO_TOL)?;
    let hm4 = he.power(-0.25, DEFAULT_ZERO_TOL)?;
    let inner = mm4.as_mat() * &sp.t * hm4.as_mat();
    let g = me.vectors.adjoint() * inner * &he.vectors;
    let a: Vec<f64> = me.values.iter().map(|v| v.powf(-0.5)).collect();
    let b: Vec<f64> = he.values.iter().map(|v| v.powf(-0.5)).collect();
    let (x, err) = exp_sandwich(&me.vectors, &a, &g, &b, &he.vectors, tol)?;
    let identity_defect = exp_identity_defect(&he.power(-0.5, DEFAULT_ZERO_TOL)?, tol)?;
    Ok(SqrtIntegral {
        x,
        error_estimate: err,
        identity_defect,
    })
}

/// `||int_0^inf exp(-2Ct) C dt - I/2||` by quadrature, for positive definite `C`.
pub fn exp_identity_defect(c: &HermitianMatrix, tol: f64) -> Result<f64> {
    let e = pd_eig(c)?;
    let n = c.dim();
    let g = CMat::from_fn(n, n, |i, j| {
        if i == j {
            C64::new(e.values[i], 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    });
    // e^{-Ct} C^{1/2} (C^{1/2}) e^{-Ct} in the eigenbasis is diag(c e^{-2ct}).
    let (r, _) = exp_sandwich(&e.vectors, &e.values, &g, &e.values, &e.vectors, tol)?;
    op_norm(&(r - CMat::identity(n, n).scale(0.5)))
}

/// A form bound `eta` for `(h, m)` gives `eta/2` for the forms of the square roots.
pub fn sqrt_form_bound(eta: f64) -> Result<f64> {
    if !(eta >= 0.0) {
        return Err(Error::Domain(format!("eta must be >= 0, got {eta}")));
    }
    Ok(eta / 2.0)
}

/// Both sides of the scalar rule: `(|sqrt m - sqrt h| / (mh)^{1/4}, |m - h| / (2 sqrt(mh)))`.
pub fn scalar_rule(h: f64, m: f64) -> (f64, f64) {
    let lhs = (m.sqrt() - h.sqrt()).abs() / (m * h).powf(0.25);
    let rhs = (m - h).abs() / (2.0 * (m * h).sqrt());
    (lhs, rhs)
}
