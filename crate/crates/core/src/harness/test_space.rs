use super::model::MathieuModel;
use super::piecewise::{linear_interpolant, not_a_knot_spline, PiecewiseCubic};
use crate::error::{Error, Result};
use crate::matcore::{CMat, HermitianMatrix, Projection, C64, DEFAULT_ZERO_TOL};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

/// Share of the interpolant's L2 mass allowed outside the kept modes before
/// a warning is attached.
pub const TRUNCATION_WARN: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Interp {
    Cubic,
    Linear,
}

impl fmt::Display for Interp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Interp::Cubic => "cubic",
            Interp::Linear => "linear",
        })
    }
}

impl FromStr for Interp {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "cubic" => Ok(Interp::Cubic),
            "linear" => Ok(Interp::Linear),
            other => Err(Error::Parse(format!("unknown interpolation '{other}'"))),
        }
    }
}

/// Interpolated eigenfunctions together with the exact Gram data the
/// Rayleigh-Ritz analysis needs.
#[derive(Clone, Debug)]
pub struct TestSpace {
    pub n_points: usize,
    pub interp: Interp,
    pub targets: Vec<i64>,
    /// The interpolants `w_i`, one per target.
    pub functions: Vec<PiecewiseCubic>,
    /// `(z_k, w_i)` for the kept modes, row `k + K`, column `i`.
    pub coefficients: CMat,
    /// `(w_i, w_j)`.
    pub gram: HermitianMatrix,
    /// `h(w_j, w_i) = int conj(w_i') w_j' - alpha conj(w_i) w_j`.
    pub form_gram: HermitianMatrix,
    /// `(w_i, H^{-1} w_j)` from the kept modes.
    pub inverse_gram: HermitianMatrix,
    /// `1 - sum_k |(z_k, w)|^2 / |w|^2`, worst over the targets.
    pub truncation_loss: f64,
    pub warnings: Vec<String>,
}

fn interpolate(interp: Interp, y: &[C64]) -> Result<PiecewiseCubic> {
    let b = 2.0 * PI;
    match interp {
        Interp::Cubic => not_a_knot_spline(0.0, b, y),
        Interp::Linear => linear_interpolant(0.0, b, y),
    }
}

fn gram_of(f: &[PiecewiseCubic]) -> Result<CMat> {
    let n = f.len();
    let mut m = CMat::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            m[(i, j)] = f[i].inner(&f[j])?;
        }
    }
    Ok(m)
}

/// Samples each target eigenfunction at `t_j = 2 pi j / (N - 1)` and
/// interpolates. Both endpoints are nodes, so the quasi-periodic boundary
/// condition holds exactly for the interpolant.
pub fn build_test_space(model: &MathieuModel, n_points: usize, interp: Interp, targets: &[i64]) -> Result<TestSpace> {
    model.separation(targets)?;
    let min_points = match interp {
        Interp::Cubic => 4,
        Interp::Linear => 2,
    };
    if n_points < min_points {
        return Err(Error::Domain(format!("{interp} interpolation needs at least {min_points} points")));
    }
    let step = 2.0 * PI / (n_points - 1) as f64;
    let functions = targets
        .iter()
        .map(|&k| {
            let y: Vec<C64> = (0..n_points).map(|j| model.eigenfunction(k, j as f64 * step)).collect();
            interpolate(interp, &y)
        })
        .collect::<Result<Vec<_>>>()?;
    let derivs: Vec<PiecewiseCubic> = functions.iter().map(PiecewiseCubic::derivative).collect();

    let plain = gram_of(&functions)?;
    let form_gram = HermitianMatrix::new(gram_of(&derivs)? - &plain * C64::new(model.alpha, 0.0))?;
    let gram = HermitianMatrix::new(plain)?;

    let norm = 1.0 / (2.0 * PI).sqrt();
    let mut coefficients = CMat::zeros(model.dim(), targets.len());
    for (row, k) in model.modes().enumerate() {
        let w = k as f64 + model.sigma();
        for (i, f) in functions.iter().enumerate() {
            coefficients[(row, i)] = f.fourier_moment(w) * norm;
        }
    }
    let inv_weights: Vec<f64> = model.eigenvalues.iter().map(|w| 1.0 / w).collect();
    let scaled = CMat::from_fn(model.dim(), targets.len(), |r, i| coefficients[(r, i)] * inv_weights[r]);
    let inverse_gram = HermitianMatrix::symmetrize(coefficients.adjoint() * scaled)?;

    let mut truncation_loss: f64 = 0.0;
    for i in 0..targets.len() {
        let kept: f64 = coefficients.column(i).iter().map(|c| c.norm_sqr()).sum();
        let mass = gram.as_mat()[(i, i)].re;
        truncation_loss = truncation_loss.max(1.0 - kept / mass);
    }
    let mut warnings = Vec::new();
    if truncation_loss > TRUNCATION_WARN {
        warnings.push(format!(
            "truncation K = {} drops {truncation_loss:.2e} of the interpolant mass",
            model.k_max
        ));
    }
    Ok(TestSpace {
        n_points,
        interp,
        targets: targets.to_vec(),
        functions,
        coefficients,
        gram,
        form_gram,
        inverse_gram,
        truncation_loss,
        warnings,
    })
}

/// Rayleigh-Ritz step on the exact Gram data.
#[derive(Clone, Debug)]
pub struct RitzData {
    /// Ritz values ascending.
    pub values: Vec<f64>,
    /// `X` with `X* G X = I`; column `j` holds the coefficients of the
    /// `j`-th Ritz vector in the `w_i`.
    pub combination: CMat,
}

impl TestSpace {
    pub fn rank(&self) -> usize {
        self.targets.len()
    }

    /// `range(P)` in the truncated eigenbasis, orthonormalized.
    pub fn projection(&self) -> Projection {
        Projection::span(&self.coefficients, 1e-12)
    }

    pub fn ritz(&self) -> Result<RitzData> {
        let g = self.gram.eig()?;
        let g_half = g.power(-0.5, DEFAULT_ZERO_TOL)?;
        let e = self.form_gram.compress(g_half.as_mat()).eig()?;
        Ok(RitzData {
            values: e.values.clone(),
            combination: g_half.as_mat() * &e.vectors,
        })
    }

    /// Singular values of `E_perp P`, where `E` projects onto the targets.
    ///
    /// With an orthonormal basis `y_j` of the trial space these are
    /// `sqrt(1 - s_j^2)`, `s_j` the singular values of `[(z_k, y_j)]`.
    pub fn error_singular_values(&self, model: &MathieuModel, x: &CMat) -> Result<Vec<f64>> {
        let rows: Vec<usize> = self
            .targets
            .iter()
            .map(|&k| model.index_of(k).expect("targets validated on construction"))
            .collect();
        let y = &self.coefficients * x;
        let ey = CMat::from_fn(rows.len(), y.ncols(), |r, j| y[(rows[r], j)]);
        let s = crate::matcore::singular_values(&ey)?;
        Ok(s.iter().map(|v| (1.0 - v * v).max(0.0).sqrt()).collect())
    }

    /// `(r_i, r_j)` for `r_j = L phi_j - theta_j phi_j`, where `phi_j` are
    /// the Ritz vectors and `L u = -u'' - alpha u` is applied piecewise.
    pub fn residual_gram(&self, alpha: f64, ritz: &RitzData) -> Result<CMat> {
        let k = self.rank();
        let mut residuals = Vec::with_capacity(k);
        for j in 0..k {
            let mut phi = self.functions[0].scaled(C64::new(0.0, 0.0));
            for i in 0..k {
                phi = phi.axpy(ritz.combination[(i, j)], &self.functions[i])?;
            }
            let second = phi.derivative().derivative();
            let shift = C64::new(-alpha - ritz.values[j], 0.0);
            residuals.push(second.scaled(C64::new(-1.0, 0.0)).axpy(shift, &phi)?);
        }
        gram_of(&residuals)
    }
}
