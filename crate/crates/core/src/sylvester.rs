//! The weak Sylvester equation
//! `(A^{1/2} v, T M^{-1/2} u) - (A^{-1/2} v, T M^{1/2} u) = (v, F u)`.
//!
//! In finite dimensions this is the matrix identity
//! `A^{1/2} T M^{-1/2} - A^{-1/2} T M^{1/2} = F`. Two solvers are provided:
//! the production solver divides by the kernel `sqrt(l/m) - sqrt(m/l)` in
//! the joint eigenbasis, and a verification solver evaluates the resolvent
//! integral representation by adaptive quadrature.

use crate::error::{Error, Result};
use crate::matcore::{hs_norm, op_norm, CMat, HermitianMatrix, SpectralDecomposition, C64, DEFAULT_ZERO_TOL};
use crate::quad::{integrate, QuadOptions};
use crate::report::BoundReport;
use serde::Serialize;
use std::f64::consts::PI;

/// Relative gaps below this make the problem numerically singular.
pub const RESONANCE_TOL: f64 = 1e-10;

#[derive(Clone, Debug)]
pub struct WeakSylvesterProblem {
    a: HermitianMatrix,
    m: HermitianMatrix,
    f: CMat,
    a_eig: SpectralDecomposition,
    m_eig: SpectralDecomposition,
}

impl WeakSylvesterProblem {
    /// `A` is `n_A x n_A`, `M` is `n_M x n_M`, `F` is `n_A x n_M`; `A` and `M`
    /// must be positive definite.
    pub fn new(a: HermitianMatrix, m: HermitianMatrix, f: CMat) -> Result<Self> {
        if f.nrows() != a.dim() || f.ncols() != m.dim() {
            return Err(Error::Dimension(format!(
                "F is {}x{}, expected {}x{}",
                f.nrows(),
                f.ncols(),
                a.dim(),
                m.dim()
            )));
        }
        let a_eig = a.eig()?;
        let m_eig = m.eig()?;
        for e in [&a_eig, &m_eig] {
            if e.min() <= DEFAULT_ZERO_TOL * e.max_abs() {
                return Err(Error::NotPositiveDefinite {
                    min_eigenvalue: e.min(),
                });
            }
        }
        Ok(Self {
            a,
            m,
            f,
            a_eig,
            m_eig,
        })
    }

    pub fn a(&self) -> &HermitianMatrix {
        &self.a
    }

    pub fn m(&self) -> &HermitianMatrix {
        &self.m
    }

    pub fn f(&self) -> &CMat {
        &self.f
    }

    pub fn a_eig(&self) -> &SpectralDecomposition {
        &self.a_eig
    }

    pub fn m_eig(&self) -> &SpectralDecomposition {
        &self.m_eig
    }

    /// `D = 1/||A^{-1}||`, the bottom of the spectrum of `A`.
    pub fn d_bottom(&self) -> f64 {
        self.a_eig.min()
    }

    pub fn m_norm(&self) -> f64 {
        self.m_eig.max()
    }

    /// `1/||M^{-1}||`.
    pub fn m_bottom(&self) -> f64 {
        self.m_eig.min()
    }

    /// `||M|| < D`: the spectrum of `M` lies strictly below that of `A`.
    pub fn is_dichotomous(&self) -> bool {
        self.m_norm() < self.d_bottom()
    }
}

/// `min |mu - lambda| / sqrt(mu lambda)` over the two spectra.
pub fn relative_gap(spectrum_a: &[f64], spectrum_m: &[f64]) -> Result<f64> {
    Ok(closest_pair(spectrum_a, spectrum_m)?.2)
}

/// The pair attaining the relative gap, as `(lambda, mu, gap)`.
pub fn closest_pair(spectrum_a: &[f64], spectrum_m: &[f64]) -> Result<(f64, f64, f64)> {
    if spectrum_a.is_empty() || spectrum_m.is_empty() {
        return Err(Error::Domain("relative gap of an empty spectrum".into()));
    }
    if let Some(&x) = spectrum_a.iter().chain(spectrum_m).find(|&&x| !(x > 0.0)) {
        return Err(Error::Domain(format!(
            "relative gap needs positive spectra, found {x}"
        )));
    }
    let mut best = (spectrum_a[0], spectrum_m[0], f64::INFINITY);
    for &l in spectrum_a {
        for &m in spectrum_m {
            let g = (l - m).abs() / (l * m).sqrt();
            if g < best.2 {
                best = (l, m, g);
            }
        }
    }
    Ok(best)
}

/// Solves in the eigenbases: `t_ij = f_ij sqrt(l_i m_j) / (l_i - m_j)`.
pub fn solve_weak_spectral(p: &WeakSylvesterProblem) -> Result<CMat> {
    let la = &p.a_eig.values;
    let lm = &p.m_eig.values;
    let (lambda, mu, gap) = closest_pair(la, lm)?;
    if gap < RESONANCE_TOL {
        return Err(Error::NearSingular { lambda, mu, gap });
    }
    let va = &p.a_eig.vectors;
    let vm = &p.m_eig.vectors;
    let mut g = va.adjoint() * &p.f * vm;
    for j in 0..lm.len() {
        for i in 0..la.len() {
            g[(i, j)] *= (la[i] * lm[j]).sqrt() / (la[i] - lm[j]);
        }
    }
    Ok(va * g * vm.adjoint())
}

/// `||A^{1/2} T M^{-1/2} - A^{-1/2} T M^{1/2} - F||`.
pub fn weak_residual(p: &WeakSylvesterProblem, t: &CMat) -> Result<f64> {
    if t.nrows() != p.f.nrows() || t.ncols() != p.f.ncols() {
        return Err(Error::Dimension("T must have the shape of F".into()));
    }
    op_norm(&(weak_operator(p, t)? - &p.f))
}

/// `A^{1/2} T M^{-1/2} - A^{-1/2} T M^{1/2}`.
pub fn weak_operator(p: &WeakSylvesterProblem, t: &CMat) -> Result<CMat> {
    let ah = p.a_eig.power(0.5, DEFAULT_ZERO_TOL)?;
    let ai = p.a_eig.power(-0.5, DEFAULT_ZERO_TOL)?;
    let mh = p.m_eig.power(0.5, DEFAULT_ZERO_TOL)?;
    let mi = p.m_eig.power(-0.5, DEFAULT_ZERO_TOL)?;
    Ok(ah.as_mat() * t * mi.as_mat() - ai.as_mat() * t * mh.as_mat())
}

#[derive(Clone, Debug)]
pub struct QuadratureSolution {
    pub t: CMat,
    pub error_estimate: f64,
    pub intervals: usize,
}

/// Evaluates `T = -(1/2pi) int A^{1/2} (A - i z - d)^{-1} F (M - i z - d)^{-1} M^{1/2} dz`
/// with `z = d tan s` and adaptive Gauss-Kronrod in `s`.
///
/// `d` must separate the spectra, `||M|| < d < D`. The resolvents are obtained
/// by LU solves rather than from the eigenbases, so this path is independent
/// of [`solve_weak_spectral`].
pub fn solve_weak_quadrature(p: &WeakSylvesterProblem, d: f64, tol: f64) -> Result<QuadratureSolution> {
    if !(p.m_norm() < d && d < p.d_bottom()) {
        return Err(Error::Precondition(format!(
            "d = {d} must satisfy ||M|| = {} < d < D = {}",
            p.m_norm(),
            p.d_bottom()
        )));
    }
    if !(tol > 0.0) {
        return Err(Error::Domain(format!("tolerance must be positive, got {tol}")));
    }
    let na = p.a.dim();
    let nm = p.m.dim();
    let ah = p.a_eig.power(0.5, DEFAULT_ZERO_TOL)?.into_mat();
    let mh = p.m_eig.power(0.5, DEFAULT_ZERO_TOL)?.into_mat();
    let ia = CMat::identity(na, na);
    let im = CMat::identity(nm, nm);
    let f_mh = &p.f;
    let fnorm = f_mh.iter().fold(0.0f64, |acc, z| acc.max(z.norm()));

    let integrand = |s: f64| -> CMat {
        let (sin, cos) = s.sin_cos();
        let zeta = d * sin / cos;
        let jac = d / (cos * cos);
        let shift = C64::new(d, zeta);
        let ra = (p.a.as_mat() - &ia * shift).lu();
        let rm = (p.m.as_mat() - &im * shift).lu();
        // (M - shift)^{-1} M^{1/2}
        let right = rm.solve(&mh).expect("d separates the spectrum of M");
        // A^{1/2} (A - shift)^{-1}; these commute, so solve against A^{1/2}
        let left = ra.solve(&ah).expect("d separates the spectrum of A");
        (left * f_mh * right) * C64::new(-jac / (2.0 * PI), 0.0)
    };
    let opts = QuadOptions {
        abs_tol: tol * fnorm,
        rel_tol: 0.0,
        max_intervals: 50_000,
    };
    let r = integrate(integrand, -PI / 2.0, PI / 2.0, opts)?;
    Ok(QuadratureSolution {
        t: r.value,
        error_estimate: r.error,
        intervals: r.intervals,
    })
}

/// The form of the a-priori bound requested from [`sylvester_bound`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum BoundMode {
    /// `||T|| <= sqrt(D ||M||)/(D - ||M||) ||F||`, needs `||M|| < D`.
    Dichotomy,
    /// Spectrum of `A` in `(0, d_minus] U [d_plus, inf)` around the spectrum of `M`.
    TwoInterval { d_minus: f64, d_plus: f64 },
    /// `|||T|||_HS <= |||F|||_HS / gap`.
    Hs,
    /// Dichotomy factor times a caller-supplied symmetric norm of `F`.
    Symmetric { f_norm: f64 },
}

/// `sqrt(D ||M||)/(D - ||M||)`.
pub fn dichotomy_factor(d_bottom: f64, m_norm: f64) -> f64 {
    (d_bottom * m_norm).sqrt() / (d_bottom - m_norm)
}

/// The bound before optimizing in `d`:
/// `sqrt(D ||M|| / ((D - d)(d - ||M||))) ||F|| / 2`.
pub fn dichotomy_bound_at(p: &WeakSylvesterProblem, d: f64) -> Result<f64> {
    let (dd, mn) = (p.d_bottom(), p.m_norm());
    if !(mn < d && d < dd) {
        return Err(Error::Precondition(format!("d = {d} outside ({mn}, {dd})")));
    }
    Ok((dd * mn / ((dd - d) * (d - mn))).sqrt() * op_norm(&p.f)? / 2.0)
}

pub fn sylvester_bound(p: &WeakSylvesterProblem, mode: BoundMode) -> Result<BoundReport> {
    let dd = p.d_bottom();
    let mn = p.m_norm();
    let mb = p.m_bottom();
    Ok(match mode {
        BoundMode::Dichotomy => {
            if p.is_dichotomous() {
                BoundReport::ok("dichotomy", dichotomy_factor(dd, mn) * op_norm(&p.f)?)
            } else {
                BoundReport::not_applicable(
                    "dichotomy",
                    format!("||M|| = {mn} is not below D = {dd}"),
                )
            }
        }
        BoundMode::TwoInterval { d_minus, d_plus } => {
            let name = "two_interval";
            let arranged = p
                .a_eig
                .values
                .iter()
                .all(|&l| l <= d_minus || l >= d_plus);
            if !(d_minus > 0.0 && d_minus < mb && mn < d_plus) {
                BoundReport::not_applicable(
                    name,
                    format!("need 0 < D- < {mb} and D+ > {mn}, got D- = {d_minus}, D+ = {d_plus}"),
                )
            } else if !arranged {
                BoundReport::not_applicable(name, "spectrum of A meets (D-, D+)")
            } else {
                let low = (mb * d_minus).sqrt() / (mb - d_minus);
                let high = dichotomy_factor(d_plus, mn);
                BoundReport::ok(name, (low + high) * op_norm(&p.f)?)
            }
        }
        BoundMode::Hs => {
            let gap = relative_gap(&p.a_eig.values, &p.m_eig.values)?;
            if gap > 0.0 {
                BoundReport::ok("hs", hs_norm(&p.f) / gap)
            } else {
                BoundReport::not_applicable("hs", "spectra intersect")
            }
        }
        BoundMode::Symmetric { f_norm } => {
            if !(f_norm >= 0.0) {
                return Err(Error::Domain(format!("norm of F must be >= 0, got {f_norm}")));
            }
            if p.is_dichotomous() {
                BoundReport::ok("symmetric", dichotomy_factor(dd, mn) * f_norm)
            } else {
                BoundReport::not_applicable("symmetric", "dichotomy fails")
            }
        }
    })
}

/// All bounds that make sense for a problem, with the true norms of the
/// spectral solution attached.
#[derive(Clone, Debug, Serialize)]
pub struct SylvesterBounds {
    pub gap: f64,
    pub d_bottom: f64,
    pub m_norm: f64,
    pub norm_t: f64,
    pub hs_t: f64,
    pub residual: f64,
    pub dichotomy: BoundReport,
    pub two_interval: Option<BoundReport>,
    pub hs: BoundReport,
}

/// Largest gap in the spectrum of `A` that contains `[1/||M^{-1}||, ||M||]`,
/// if any: returns `(D-, D+)`.
pub fn two_interval_split(p: &WeakSylvesterProblem) -> Option<(f64, f64)> {
    let (mb, mn) = (p.m_bottom(), p.m_norm());
    let below = p.a_eig.values.iter().copied().filter(|&l| l < mb).fold(None, |acc: Option<f64>, l| {
        Some(acc.map_or(l, |a| a.max(l)))
    })?;
    let above = p.a_eig.values.iter().copied().filter(|&l| l > mn).fold(None, |acc: Option<f64>, l| {
        Some(acc.map_or(l, |a| a.min(l)))
    })?;
    let inside = p.a_eig.values.iter().any(|&l| l >= mb && l <= mn);
    (!inside).then_some((below, above))
}

pub fn all_bounds(p: &WeakSylvesterProblem) -> Result<SylvesterBounds> {
    let t = solve_weak_spectral(p)?;
    let norm_t = op_norm(&t)?;
    let hs_t = hs_norm(&t);
    let split = two_interval_split(p);
    Ok(SylvesterBounds {
        gap: relative_gap(&p.a_eig.values, &p.m_eig.values)?,
        d_bottom: p.d_bottom(),
        m_norm: p.m_norm(),
        norm_t,
        hs_t,
        residual: weak_residual(p, &t)?,
        dichotomy: sylvester_bound(p, BoundMode::Dichotomy)?.with_truth(norm_t),
        two_interval: split
            .map(|(d_minus, d_plus)| {
                sylvester_bound(p, BoundMode::TwoInterval { d_minus, d_plus })
                    .map(|b| b.with_truth(norm_t))
            })
            .transpose()?,
        hs: sylvester_bound(p, BoundMode::Hs)?.with_truth(hs_t),
    })
}

/// The rank-one instance on which the dichotomy bound is attained: `A` and
/// `M` diagonal with the given spectra, `F = p q*` where `p` is the bottom
/// eigenvector of `A` and `q` the top eigenvector of `M`.
pub fn sharp_instance(spectrum_a: &[f64], spectrum_m: &[f64]) -> Result<WeakSylvesterProblem> {
    let ia = argext(spectrum_a, |a, b| a < b);
    let im = argext(spectrum_m, |a, b| a > b);
    let mut f = CMat::zeros(spectrum_a.len(), spectrum_m.len());
    f[(ia, im)] = C64::new(1.0, 0.0);
    WeakSylvesterProblem::new(
        HermitianMatrix::from_real_diagonal(spectrum_a),
        HermitianMatrix::from_real_diagonal(spectrum_m),
        f,
    )
}

fn argext(v: &[f64], better: impl Fn(f64, f64) -> bool) -> usize {
    let mut k = 0;
    for (i, &x) in v.iter().enumerate() {
        if better(x, v[k]) {
            k = i;
        }
    }
    k
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::real_matrix;

    fn scalar(a: f64, m: f64, f: f64) -> WeakSylvesterProblem {
        WeakSylvesterProblem::new(
            HermitianMatrix::from_real_diagonal(&[a]),
            HermitianMatrix::from_real_diagonal(&[m]),
            real_matrix(&[&[f]]),
        )
        .unwrap()
    }

    #[test]
    fn gap_examples() {
        assert!((relative_gap(&[4.0], &[1.0]).unwrap() - 1.5).abs() < 1e-15);
        assert!((relative_gap(&[1.0, 9.0], &[4.0]).unwrap() - 5.0 / 6.0).abs() < 1e-15);
        assert_eq!(relative_gap(&[2.0, 3.0], &[2.0, 3.0]).unwrap(), 0.0);
        assert!(relative_gap(&[], &[1.0]).is_err());
        assert!(relative_gap(&[0.0], &[1.0]).is_err());
    }

    #[test]
    fn scalar_solutions_agree() {
        let p = scalar(4.0, 1.0, 1.0);
        let t = solve_weak_spectral(&p).unwrap();
        assert!((t[(0, 0)].re - 2.0 / 3.0).abs() < 1e-15);
        let q = solve_weak_quadrature(&p, 2.5, 1e-10).unwrap();
        assert!((q.t[(0, 0)] - t[(0, 0)]).norm() < 1e-10);
        assert!(weak_residual(&p, &t).unwrap() < 1e-14);
    }

    #[test]
    fn zero_rhs() {
        let p = scalar(4.0, 1.0, 0.0);
        assert_eq!(solve_weak_spectral(&p).unwrap()[(0, 0)].norm(), 0.0);
        assert_eq!(solve_weak_quadrature(&p, 3.0, 1e-10).unwrap().t[(0, 0)].norm(), 0.0);
        let b = all_bounds(&p).unwrap();
        assert_eq!(b.dichotomy.value, Some(0.0));
        assert_eq!(b.hs.value, Some(0.0));
    }

    #[test]
    fn residual_of_zero_is_norm_of_f() {
        let p = scalar(4.0, 1.0, 2.0);
        assert!((weak_residual(&p, &CMat::zeros(1, 1)).unwrap() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn quadrature_rejects_bad_d() {
        let p = scalar(4.0, 1.0, 1.0);
        assert!(matches!(solve_weak_quadrature(&p, 0.5, 1e-10), Err(Error::Precondition(_))));
        assert!(matches!(solve_weak_quadrature(&p, 4.0, 1e-10), Err(Error::Precondition(_))));
    }

    #[test]
    fn resonance_is_reported() {
        let p = scalar(2.0, 2.0, 1.0);
        assert!(matches!(solve_weak_spectral(&p), Err(Error::NearSingular { .. })));
    }

    #[test]
    fn sharp_instance_attains_dichotomy_bound() {
        let p = sharp_instance(&[4.0, 7.0], &[0.5, 1.0]).unwrap();
        let t = solve_weak_spectral(&p).unwrap();
        let b = sylvester_bound(&p, BoundMode::Dichotomy).unwrap().value.unwrap();
        assert!((b - 2.0 / 3.0).abs() < 1e-15);
        assert!((op_norm(&t).unwrap() - b).abs() < 1e-15);
    }

    #[test]
    fn hs_example() {
        let p = WeakSylvesterProblem::new(
            HermitianMatrix::from_real_diagonal(&[2.0, 8.0]),
            HermitianMatrix::from_real_diagonal(&[3.0]),
            real_matrix(&[&[1.0], &[1.0]]),
        )
        .unwrap();
        let b = all_bounds(&p).unwrap();
        assert!((b.gap - 1.0 / 6f64.sqrt()).abs() < 1e-15);
        assert!((b.hs.value.unwrap() - 12f64.sqrt()).abs() < 1e-14);
        assert!((b.hs_t - (6.0 + 24.0 / 25.0f64).sqrt()).abs() < 1e-14);
        assert!(!b.dichotomy.hypothesis_ok);
        let (dm, dp) = two_interval_split(&p).unwrap();
        assert_eq!((dm, dp), (2.0, 8.0));
        let two = b.two_interval.unwrap();
        assert!(two.value.unwrap() >= b.norm_t);
    }
}
