//! Geometry of projection pairs and sin-theta bounds for spectral projections.

use crate::error::{Error, Result};
use crate::forms::{eta_exact, s_operator, FormPair};
use crate::matcore::{hs_norm, op_norm, CMat, HermitianMatrix, Projection, DEFAULT_ZERO_TOL};
use crate::report::BoundReport;
use crate::sylvester::relative_gap;
use serde::Serialize;

/// Relative commutator size accepted as "commutes".
pub const COMMUTE_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PairCase {
    /// Equal ranks and `||P(I-Q)|| < 1`: the three mixed norms coincide.
    Isomorphic,
    /// `||P(I-Q)|| < 1` with `rank P < rank Q`: then `||P - Q|| = 1`.
    StrictInclusion,
    Inconclusive,
}

#[derive(Clone, Debug, Serialize)]
pub struct ProjectionPairReport {
    pub norm_p_qperp: f64,
    pub norm_q_pperp: f64,
    pub norm_diff: f64,
    pub hs_diff: f64,
    pub hs_qperp_p: f64,
    pub hs_pperp_q: f64,
    pub case: PairCase,
}

impl ProjectionPairReport {
    /// `|||P-Q|||^2 - |||Q_perp P|||^2 - |||P_perp Q|||^2`.
    pub fn pythagorean_defect(&self) -> f64 {
        (self.hs_diff.powi(2) - self.hs_qperp_p.powi(2) - self.hs_pperp_q.powi(2)).abs()
    }
}

fn same_dim(p: &Projection, q: &Projection) -> Result<()> {
    if p.ambient_dim() != q.ambient_dim() {
        return Err(Error::Dimension(format!(
            "projections act on C^{} and C^{}",
            p.ambient_dim(),
            q.ambient_dim()
        )));
    }
    Ok(())
}

pub fn pair_analysis(p: &Projection, q: &Projection) -> Result<ProjectionPairReport> {
    same_dim(p, q)?;
    let n = p.ambient_dim();
    let id = CMat::identity(n, n);
    let pp = p.matrix();
    let qq = q.matrix();
    let p_qperp = pp * (&id - qq);
    let q_pperp = qq * (&id - pp);
    let qperp_p = (&id - qq) * pp;
    let diff = pp - qq;
    let norm_p_qperp = op_norm(&p_qperp)?;
    let below_one = norm_p_qperp < 1.0 - 1e-12;
    let case = if below_one && p.rank() == q.rank() {
        PairCase::Isomorphic
    } else if below_one && p.rank() < q.rank() {
        PairCase::StrictInclusion
    } else {
        PairCase::Inconclusive
    };
    Ok(ProjectionPairReport {
        norm_p_qperp,
        norm_q_pperp: op_norm(&q_pperp)?,
        norm_diff: op_norm(&diff)?,
        hs_diff: hs_norm(&diff),
        hs_qperp_p: hs_norm(&qperp_p),
        hs_pperp_q: hs_norm(&q_pperp.adjoint()),
        case,
    })
}

/// The four compressions `A = Q_perp H Q_perp`, `Hc = Q H Q`, `M = P M P`,
/// `W = P_perp M P_perp`, each expressed in the orthonormal basis of the
/// corresponding range.
#[derive(Clone, Debug)]
pub struct BlockCompression {
    pub q: Projection,
    pub q_perp: Projection,
    pub p: Projection,
    pub p_perp: Projection,
    pub a: Option<HermitianMatrix>,
    pub hc: Option<HermitianMatrix>,
    pub m: Option<HermitianMatrix>,
    pub w: Option<HermitianMatrix>,
    /// `||Q_perp S P - (A^{1/2} T M^{-1/2} - A^{-1/2} T M^{1/2})||` with `T = Q_perp P`.
    pub identity_defect: f64,
    /// `||[H, Q]|| / ||H||` and `||[M, P]|| / ||M||`.
    pub commutators: (f64, f64),
    /// Blocks that are numerically singular where positivity is needed.
    pub singular_blocks: Vec<&'static str>,
}

impl BlockCompression {
    pub fn commuting(&self) -> bool {
        self.commutators.0 <= COMMUTE_TOL && self.commutators.1 <= COMMUTE_TOL
    }
}

fn compress(h: &HermitianMatrix, p: &Projection) -> Option<HermitianMatrix> {
    (p.rank() > 0).then(|| h.compress(p.basis()))
}

fn rel_commutator(h: &HermitianMatrix, p: &Projection) -> Result<f64> {
    let s = op_norm(h.as_mat())?;
    Ok(if s == 0.0 { 0.0 } else { op_norm(&(p.matrix() * h.as_mat() - h.as_mat() * p.matrix()))? / s })
}

pub fn block_compress(
    h: &HermitianMatrix,
    m: &HermitianMatrix,
    q: &Projection,
    p: &Projection,
) -> Result<BlockCompression> {
    let fp = FormPair::new(h.clone(), m.clone())?;
    same_dim(p, q)?;
    if p.ambient_dim() != h.dim() {
        return Err(Error::Dimension("projection and matrix sizes differ".into()));
    }
    let q_perp = q.complement();
    let p_perp = p.complement();
    let a = compress(h, &q_perp);
    let hc = compress(h, q);
    let mc = compress(m, p);
    let w = compress(m, &p_perp);

    let mut singular = Vec::new();
    for (name, blk) in [("A", &a), ("H", &hc), ("M", &mc), ("W", &w)] {
        if let Some(b) = blk {
            let e = b.eig()?;
            if e.min() <= DEFAULT_ZERO_TOL * e.max_abs() {
                singular.push(name);
            }
        }
    }

    let s = s_operator(&fp)?;
    let lhs = q_perp.matrix() * &s * p.matrix();
    let rhs = match (&a, &mc) {
        (Some(a), Some(mc)) => {
            let t = q_perp.basis().adjoint() * p.basis();
            let ae = a.eig()?;
            let me = mc.eig()?;
            let core = ae.power(0.5, DEFAULT_ZERO_TOL)?.as_mat() * &t * me.power(-0.5, DEFAULT_ZERO_TOL)?.as_mat()
                - ae.power(-0.5, DEFAULT_ZERO_TOL)?.as_mat() * &t * me.power(0.5, DEFAULT_ZERO_TOL)?.as_mat();
            q_perp.basis() * core * p.basis().adjoint()
        }
        _ => CMat::zeros(h.dim(), h.dim()),
    };
    let identity_defect = op_norm(&(lhs - rhs))?;
    Ok(BlockCompression {
        commutators: (rel_commutator(h, q)?, rel_commutator(m, p)?),
        q: q.clone(),
        q_perp,
        p: p.clone(),
        p_perp,
        a,
        hc,
        m: mc,
        w,
        identity_defect,
        singular_blocks: singular,
    })
}

/// Which spectral projections to compare.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum IntervalSpec {
    /// `[D1, D2]` in both resolvent sets; `P = E_M(D1)`, `Q = E_H(D1)`.
    Single { d1: f64, d2: f64 },
    /// `[L1, L2]` and `[D1, D2]` in both resolvent sets; the projections
    /// are onto the band `(L2, D1)` between the two gaps.
    Double { l1: f64, l2: f64, d1: f64, d2: f64 },
}

#[derive(Clone, Debug, Serialize)]
pub struct SubspaceReport {
    pub eta: f64,
    /// `sqrt(D2 D1)/(D2 - D1)` plus, in the double case, the `L` term.
    pub factor: f64,
    pub resolvent_ok: bool,
    /// `factor * eta < 1`.
    pub smallness_ok: bool,
    pub rank_p: usize,
    pub rank_q: usize,
    /// Dimension of the common kernel removed before comparison.
    pub deflated: usize,
    pub bound: BoundReport,
}

fn in_resolvent(values: &[f64], a: f64, b: f64) -> bool {
    values.iter().all(|&l| l < a || l > b)
}

fn gap_factor(lo: f64, hi: f64) -> f64 {
    (hi * lo).sqrt() / (hi - lo)
}

pub fn subspace_bounds(
    h: &HermitianMatrix,
    m: &HermitianMatrix,
    intervals: IntervalSpec,
    eta: Option<f64>,
) -> Result<SubspaceReport> {
    let fp = FormPair::new(h.clone(), m.clone())?;
    let eta = match eta {
        Some(e) if e >= 0.0 => e,
        Some(e) => return Err(Error::Domain(format!("eta must be >= 0, got {e}"))),
        None => eta_exact(&fp)?.eta,
    };
    let he = fp.h_eig();
    let me = fp.m_eig();
    let (ok_order, resolvent_ok, factor, p, q) = match intervals {
        IntervalSpec::Single { d1, d2 } => {
            let order = 0.0 < d1 && d1 < d2;
            let res = in_resolvent(&he.values, d1, d2) && in_resolvent(&me.values, d1, d2);
            (order, res, gap_factor(d1, d2), me.projector_below(d1), he.projector_below(d1))
        }
        IntervalSpec::Double { l1, l2, d1, d2 } => {
            let order = 0.0 < l1 && l1 < l2 && l2 < d1 && d1 < d2;
            let res = [(&he.values, l1, l2), (&he.values, d1, d2), (&me.values, l1, l2), (&me.values, d1, d2)]
                .iter()
                .all(|(v, a, b)| in_resolvent(v, *a, *b));
            let band = |e: &crate::matcore::SpectralDecomposition| e.projector_below(d1).minus(&e.projector_below(l2));
            (order, res, gap_factor(d1, d2) + gap_factor(l1, l2), band(me), band(he))
        }
    };
    if !ok_order {
        return Err(Error::Domain(format!("interval endpoints out of order: {intervals:?}")));
    }

    // Common kernel inside range(P): removed from both projections.
    let kernel = he.kernel(DEFAULT_ZERO_TOL);
    let n_in_p = if kernel.rank() > 0 {
        Projection::span(&(p.matrix() * kernel.basis()), 1e-8)
    } else {
        kernel.clone()
    };
    let (p_t, q_t) = if n_in_p.rank() > 0 {
        (p.minus(&n_in_p), q.minus(&n_in_p))
    } else {
        (p.clone(), q.clone())
    };
    let truth = op_norm(&(p_t.matrix() - q_t.matrix()))?;

    let smallness_ok = factor * eta < 1.0;
    let name = match intervals {
        IntervalSpec::Single { .. } => "sin_theta_single",
        IntervalSpec::Double { .. } => "sin_theta_double",
    };
    let bound = if !resolvent_ok {
        BoundReport::not_applicable(name, "an interval meets a spectrum")
    } else if !smallness_ok {
        BoundReport::not_applicable(name, format!("factor * eta = {} >= 1", factor * eta))
    } else {
        BoundReport::ok(name, factor * eta)
    }
    .with_truth(truth);
    Ok(SubspaceReport {
        eta,
        factor,
        resolvent_ok,
        smallness_ok,
        rank_p: p.rank(),
        rank_q: q.rank(),
        deflated: n_in_p.rank(),
        bound,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct HsSubspaceReport {
    /// `gap(sigma(A), sigma(M))`, infinite when a block is empty.
    pub gap_a_m: f64,
    /// `gap(sigma(W), sigma(Hc))`.
    pub gap_w_h: f64,
    pub qperp_p: BoundReport,
    pub pperp_q: BoundReport,
    pub diff: BoundReport,
    /// `|||S|||_HS / min gap`.
    pub corollary: BoundReport,
    pub pythagorean_defect: f64,
}

fn block_gap(x: &Option<HermitianMatrix>, y: &Option<HermitianMatrix>) -> Result<f64> {
    match (x, y) {
        (Some(x), Some(y)) => {
            let (ex, ey) = (x.eig()?, y.eig()?);
            if ex.min() <= 0.0 || ey.min() <= 0.0 {
                return Ok(0.0);
            }
            relative_gap(&ex.values, &ey.values)
        }
        _ => Ok(f64::INFINITY),
    }
}

fn hs_bound(name: &str, num: f64, gap: f64, truth: f64) -> BoundReport {
    if gap > 0.0 {
        let v = if num == 0.0 { 0.0 } else { num / gap };
        BoundReport::ok(name, v).with_truth(truth)
    } else {
        BoundReport::not_applicable(name, "relative gap is zero").with_truth(truth)
    }
}

/// Hilbert-Schmidt bounds for `Q` commuting with `H` and `P` commuting with `M`.
pub fn hs_subspace_bounds(
    h: &HermitianMatrix,
    m: &HermitianMatrix,
    q: &Projection,
    p: &Projection,
) -> Result<HsSubspaceReport> {
    let blocks = block_compress(h, m, q, p)?;
    if !blocks.commuting() {
        return Err(Error::Precondition(format!(
            "projections must commute: ||[H,Q]||/||H|| = {:.3e}, ||[M,P]||/||M|| = {:.3e}",
            blocks.commutators.0, blocks.commutators.1
        )));
    }
    let fp = FormPair::new(h.clone(), m.clone())?;
    let s = s_operator(&fp)?;
    let pair = pair_analysis(p, q)?;
    let gap1 = block_gap(&blocks.a, &blocks.m)?;
    let gap2 = block_gap(&blocks.w, &blocks.hc)?;
    let n1 = hs_norm(&(blocks.q_perp.matrix() * &s * p.matrix()));
    let n2 = hs_norm(&(q.matrix() * &s * blocks.p_perp.matrix()));
    let b1 = hs_bound("hs_qperp_p", n1, gap1, pair.hs_qperp_p);
    let b2 = hs_bound("hs_pperp_q", n2, gap2, pair.hs_pperp_q);
    let diff = match (b1.value, b2.value) {
        (Some(x), Some(y)) => BoundReport::ok("hs_diff", x.hypot(y)),
        _ => BoundReport::not_applicable("hs_diff", "a relative gap is zero"),
    }
    .with_truth(pair.hs_diff);
    let corollary = hs_bound("hs_corollary", hs_norm(&s), gap1.min(gap2), pair.hs_diff);
    Ok(HsSubspaceReport {
        gap_a_m: gap1,
        gap_w_h: gap2,
        qperp_p: b1,
        pperp_q: b2,
        diff,
        corollary,
        pythagorean_defect: pair.pythagorean_defect(),
    })
}
