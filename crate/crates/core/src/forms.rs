//! Closeness of two positive semidefinite forms.
//!
//! For `h[u] = (H^{1/2}u, H^{1/2}u)` and `m[u]` likewise, two measures are
//! computed: `eta`, the smallest constant with
//! `|h(u,v) - m(u,v)| <= eta * sqrt(h[u] m[v])`, realized as the norm of
//! `S = H^{1/2} M^{+1/2} - H^{+1/2} M^{1/2}`; and the two-sided constant
//! `eps` with `(1-eps) m <= h <= (1+eps) m`.

use crate::error::{Error, Result};
use crate::matcore::{op_norm, CMat, HermitianMatrix, SpectralDecomposition, DEFAULT_ZERO_TOL};
use serde::Serialize;

/// Principal-angle tolerance for declaring two kernels equal.
pub const KERNEL_TOL: f64 = 1e-8;
/// Eigenpairs with `|(u, v)|` below this are skipped in the per-pair check.
pub const OVERLAP_TOL: f64 = 1e-8;

/// A pair of positive semidefinite matrices with cached spectral data.
#[derive(Clone, Debug)]
pub struct FormPair {
    h: HermitianMatrix,
    m: HermitianMatrix,
    h_eig: SpectralDecomposition,
    m_eig: SpectralDecomposition,
}

impl FormPair {
    pub fn new(h: HermitianMatrix, m: HermitianMatrix) -> Result<Self> {
        if h.dim() != m.dim() {
            return Err(Error::Dimension(format!(
                "H is {0}x{0}, M is {1}x{1}",
                h.dim(),
                m.dim()
            )));
        }
        let h_eig = h.eig()?;
        let m_eig = m.eig()?;
        for e in [&h_eig, &m_eig] {
            if e.min() < -e.zero_threshold(DEFAULT_ZERO_TOL) {
                return Err(Error::NotPositiveSemidefinite {
                    min_eigenvalue: e.min(),
                });
            }
        }
        Ok(Self { h, m, h_eig, m_eig })
    }

    pub fn h(&self) -> &HermitianMatrix {
        &self.h
    }

    pub fn m(&self) -> &HermitianMatrix {
        &self.m
    }

    pub fn h_eig(&self) -> &SpectralDecomposition {
        &self.h_eig
    }

    pub fn m_eig(&self) -> &SpectralDecomposition {
        &self.m_eig
    }

    /// Errors unless `ker H = ker M` up to [`KERNEL_TOL`] in the largest principal angle.
    pub fn check_kernels(&self) -> Result<()> {
        let kh = self.h_eig.kernel(DEFAULT_ZERO_TOL);
        let km = self.m_eig.kernel(DEFAULT_ZERO_TOL);
        if kh.rank() != km.rank() {
            return Err(Error::KernelMismatch { sine: 1.0 });
        }
        if kh.rank() == 0 {
            return Ok(());
        }
        let sine = op_norm(&(kh.matrix() - km.matrix()))?;
        if sine > KERNEL_TOL {
            return Err(Error::KernelMismatch { sine });
        }
        Ok(())
    }
}

/// `S = H^{1/2} M^{+1/2} - H^{+1/2} M^{1/2}`.
pub fn s_operator(fp: &FormPair) -> Result<CMat> {
    fp.check_kernels()?;
    let hh = fp.h_eig.power(0.5, DEFAULT_ZERO_TOL)?;
    let hd = fp.h_eig.power(-0.5, DEFAULT_ZERO_TOL)?;
    let mh = fp.m_eig.power(0.5, DEFAULT_ZERO_TOL)?;
    let md = fp.m_eig.power(-0.5, DEFAULT_ZERO_TOL)?;
    Ok(hh.as_mat() * md.as_mat() - hd.as_mat() * mh.as_mat())
}

#[derive(Clone, Debug)]
pub struct EtaResult {
    pub eta: f64,
    pub s: CMat,
}

/// The sharp constant `eta = ||S||`.
pub fn eta_exact(fp: &FormPair) -> Result<EtaResult> {
    let s = s_operator(fp)?;
    Ok(EtaResult {
        eta: op_norm(&s)?,
        s,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct EpsilonReport {
    /// `max |nu - 1|` over the pencil eigenvalues on the common range.
    pub epsilon: f64,
    /// False when `epsilon >= 1`, in which case no two-sided relation holds.
    pub comparable: bool,
    pub pencil_eigenvalues: Vec<f64>,
    /// `(1 - eps) m <= h <= (1 + eps) m`.
    pub lower: f64,
    pub upper: f64,
    /// The same relation read from `h` to `m`:
    /// `(1 - eps/(1-eps)) h <= m <= (1 + eps/(1-eps)) h`.
    pub reversed_lower: f64,
    pub reversed_upper: f64,
}

pub fn epsilon_two_sided(fp: &FormPair) -> Result<EpsilonReport> {
    fp.check_kernels()?;
    let range = fp.m_eig.range(DEFAULT_ZERO_TOL);
    if range.rank() == 0 {
        return Err(Error::Precondition("M has numerical rank 0".into()));
    }
    let md = fp.m_eig.power(-0.5, DEFAULT_ZERO_TOL)?;
    let core = HermitianMatrix::symmetrize(md.as_mat() * fp.h.as_mat() * md.as_mat())?;
    let nu = core.compress(range.basis()).eig()?.values;
    let epsilon = nu.iter().fold(0.0f64, |e, v| e.max((v - 1.0).abs()));
    let comparable = epsilon < 1.0;
    let r = if comparable {
        epsilon / (1.0 - epsilon)
    } else {
        f64::INFINITY
    };
    Ok(EpsilonReport {
        epsilon,
        comparable,
        pencil_eigenvalues: nu,
        lower: 1.0 - epsilon,
        upper: 1.0 + epsilon,
        reversed_lower: 1.0 - r,
        reversed_upper: 1.0 + r,
    })
}

/// `eps / sqrt(1 - eps)`, an upper bound for `eta` given the two-sided constant.
pub fn eta_from_epsilon(eps: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&eps) {
        return Err(Error::Domain(format!("epsilon must lie in [0, 1), got {eps}")));
    }
    Ok(eps / (1.0 - eps).sqrt())
}

#[derive(Clone, Debug, Serialize)]
pub struct ClosenessReport {
    pub eta: f64,
    /// `None` when the pair is not two-sided comparable.
    pub epsilon: Option<f64>,
    pub eta_from_epsilon: Option<f64>,
    #[serde(skip)]
    pub s: CMat,
}

pub fn closeness(fp: &FormPair) -> Result<ClosenessReport> {
    let EtaResult { eta, s } = eta_exact(fp)?;
    let eps = epsilon_two_sided(fp)?;
    let (epsilon, from_eps) = if eps.comparable {
        (Some(eps.epsilon), Some(eta_from_epsilon(eps.epsilon)?))
    } else {
        (None, None)
    };
    Ok(ClosenessReport {
        eta,
        epsilon,
        eta_from_epsilon: from_eps,
        s,
    })
}

/// Gap condition for one eigenvalue cluster `lambda_first = ... = lambda_{first+size-1}` of H.
#[derive(Clone, Debug, Serialize)]
pub struct ClusterCondition {
    pub first: usize,
    pub size: usize,
    /// `(lambda_i - lambda_{i-1}) / (lambda_i + lambda_{i-1})`, if there is a lower neighbour.
    pub lower_ratio: Option<f64>,
    /// `(lambda_{i+n} - lambda_i) / (lambda_{i+n} + lambda_i)`, if there is an upper neighbour.
    pub upper_ratio: Option<f64>,
    /// `eps/(1-eps) < max{lower, upper, 1}`, read literally.
    pub holds_max: bool,
    /// `eps/(1-eps) < min{lower, upper}`, the stronger reading.
    pub holds_min: bool,
    /// Whether the argmin matching confines the cluster as claimed.
    pub argmin_consistent: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SpectralComparison {
    pub epsilon: f64,
    /// `|lambda_i(H) - lambda_i(M)| / lambda_i(M)`, `None` on the kernel.
    pub rel_err: Vec<Option<f64>>,
    pub bound_vs_m_ok: Vec<bool>,
    pub bound_vs_h_ok: Vec<bool>,
    /// `j(i) = argmin_j |lambda_i(H) - lambda_j(M)| / lambda_i(H)`.
    pub argmin: Vec<Option<usize>>,
    pub clusters: Vec<ClusterCondition>,
    /// `min over eigenpairs of eta/|(u,v)| - |lambda - mu|/sqrt(lambda mu)`.
    pub overlap_margin: f64,
    pub overlap_pairs: usize,
}

impl SpectralComparison {
    pub fn all_ok(&self) -> bool {
        self.bound_vs_m_ok.iter().all(|&b| b)
            && self.bound_vs_h_ok.iter().all(|&b| b)
            && self.overlap_margin >= -1e-10
    }
}

pub fn spectral_comparison(fp: &FormPair) -> Result<SpectralComparison> {
    let eps_rep = epsilon_two_sided(fp)?;
    if !eps_rep.comparable {
        return Err(Error::Precondition(format!(
            "pair is not two-sided comparable (eps = {})",
            eps_rep.epsilon
        )));
    }
    let eps = eps_rep.epsilon;
    let eta = eta_exact(fp)?.eta;
    let lh = &fp.h_eig.values;
    let lm = &fp.m_eig.values;
    let n = lh.len();
    let scale = fp.h_eig.max_abs().max(fp.m_eig.max_abs());
    let thr = DEFAULT_ZERO_TOL * scale;
    let slack = |x: f64| 1e-10 * x + 1e-13 * scale;

    let mut rel_err = Vec::with_capacity(n);
    let mut vs_m = Vec::with_capacity(n);
    let mut vs_h = Vec::with_capacity(n);
    for i in 0..n {
        let d = (lh[i] - lm[i]).abs();
        rel_err.push((lm[i] > thr).then(|| d / lm[i]));
        vs_m.push(d <= eps * lm[i] + slack(lm[i]));
        vs_h.push(d <= eps / (1.0 - eps) * lh[i] + slack(lh[i]));
    }

    let argmin: Vec<Option<usize>> = lh
        .iter()
        .map(|&l| {
            (l > thr).then(|| {
                let mut best = 0;
                for j in 1..n {
                    if (l - lm[j]).abs() < (l - lm[best]).abs() {
                        best = j;
                    }
                }
                best
            })
        })
        .collect();

    let r = eps / (1.0 - eps);
    let mut clusters = Vec::new();
    let mut i = 0;
    while i < n {
        let mut size = 1;
        while i + size < n && (lh[i + size] - lh[i]).abs() <= 1e-12 * lh[i].abs().max(thr) {
            size += 1;
        }
        let lower_ratio = (i > 0).then(|| (lh[i] - lh[i - 1]) / (lh[i] + lh[i - 1]));
        let upper_ratio =
            (i + size < n).then(|| (lh[i + size] - lh[i]) / (lh[i + size] + lh[i]));
        let ratios: Vec<f64> = lower_ratio.into_iter().chain(upper_ratio).collect();
        let max_r = ratios.iter().copied().fold(1.0, f64::max);
        let min_r = ratios.iter().copied().fold(f64::INFINITY, f64::min);
        let below_ok = i == 0 || argmin[i - 1].is_none_or(|j| j < i);
        let above_ok = i + size >= n || argmin[i + size].is_none_or(|j| j >= i + size);
        let inside_ok = size > 1 || argmin[i].is_none_or(|j| j == i);
        clusters.push(ClusterCondition {
            first: i,
            size,
            lower_ratio,
            upper_ratio,
            holds_max: r < max_r,
            holds_min: r < min_r,
            argmin_consistent: below_ok && above_ok && inside_ok,
        });
        i += size;
    }

    let mut overlap_margin = f64::INFINITY;
    let mut overlap_pairs = 0;
    let vh = &fp.h_eig.vectors;
    let vm = &fp.m_eig.vectors;
    let overlaps = vm.adjoint() * vh;
    for (a, &mu) in lm.iter().enumerate() {
        for (b, &lambda) in lh.iter().enumerate() {
            let ov = overlaps[(a, b)].norm();
            if ov <= OVERLAP_TOL || mu <= thr || lambda <= thr {
                continue;
            }
            overlap_pairs += 1;
            let dist = (lambda - mu).abs() / (lambda * mu).sqrt();
            overlap_margin = overlap_margin.min(eta / ov - dist);
        }
    }

    Ok(SpectralComparison {
        epsilon: eps,
        rel_err,
        bound_vs_m_ok: vs_m,
        bound_vs_h_ok: vs_h,
        argmin,
        clusters,
        overlap_margin,
        overlap_pairs,
    })
}
