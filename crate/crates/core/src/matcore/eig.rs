//! Cyclic complex Jacobi eigensolver for Hermitian matrices.

use super::{fro, CMat, HermitianMatrix, SpectralDecomposition, C64};
use crate::error::{Error, Result};

/// Sweep cap. Quadratic convergence makes this generous for any size we use.
pub const MAX_SWEEPS: usize = 64;

/// A rotation is skipped when the off-diagonal entry is negligible relative
/// to both diagonal entries it couples.
const REL_SKIP: f64 = f64::EPSILON;
const ABS_SKIP: f64 = 1e-18;
const FINAL_OFF_TOL: f64 = 1e-13;

/// Eigen-decomposition `A = V diag(values) V*` with ascending eigenvalues.
///
/// Ties keep the order in which they emerge from the sweeps, which is
/// deterministic for a given input.
pub fn eig_herm(h: &HermitianMatrix) -> Result<SpectralDecomposition> {
    let n = h.dim();
    let mut a = h.as_mat().clone();
    let mut v = CMat::identity(n, n);
    let scale = fro(&a);
    let floor = ABS_SKIP * scale;

    let mut converged = false;
    let mut sweeps = 0;
    while sweeps < MAX_SWEEPS {
        sweeps += 1;
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let b = a[(p, q)];
                let r = b.norm();
                if r == 0.0 {
                    continue;
                }
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                if r <= floor || r <= REL_SKIP * (app * aqq).abs().sqrt() {
                    continue;
                }
                rotated = true;
                rotate(&mut a, &mut v, p, q, b, r, app, aqq);
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }

    if !converged {
        let off = off_diagonal(&a);
        if off > FINAL_OFF_TOL * scale.max(f64::MIN_POSITIVE) {
            return Err(Error::NoConvergence {
                what: "jacobi eigensolver",
                residual: off,
                sweeps,
            });
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let vectors = CMat::from_fn(n, n, |i, j| v[(i, order[j])]);
    Ok(SpectralDecomposition { values, vectors })
}

/// Applies the unitary `U = [[c, s e], [-s conj(e), c]]` on the `(p, q)`
/// plane, with `e = b/|b|`, chosen so that `(U* A U)_{pq} = 0`.
#[allow(clippy::too_many_arguments)]
fn rotate(a: &mut CMat, v: &mut CMat, p: usize, q: usize, b: C64, r: f64, app: f64, aqq: f64) {
    let n = a.nrows();
    let e = b / r;
    let tau = (aqq - app) / (2.0 * r);
    let t = if tau >= 0.0 {
        1.0 / (tau + tau.hypot(1.0))
    } else {
        -1.0 / (-tau + tau.hypot(1.0))
    };
    let cs = 1.0 / t.hypot(1.0);
    let sn = t * cs;
    let upq = e * sn;
    let uqp = -e.conj() * sn;

    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * cs + akq * uqp;
        a[(k, q)] = akp * upq + akq * cs;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = apk * cs + aqk * uqp.conj();
        a[(q, k)] = apk * upq.conj() + aqk * cs;
    }
    a[(p, q)] = C64::new(0.0, 0.0);
    a[(q, p)] = C64::new(0.0, 0.0);
    a[(p, p)] = C64::new(app - t * r, 0.0);
    a[(q, q)] = C64::new(aqq + t * r, 0.0);

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * cs + vkq * uqp;
        v[(k, q)] = vkp * upq + vkq * cs;
    }
}

fn off_diagonal(a: &CMat) -> f64 {
    let n = a.nrows();
    let mut s = 0.0;
    for j in 0..n {
        for i in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}
