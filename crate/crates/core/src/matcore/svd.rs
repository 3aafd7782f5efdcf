//! One-sided Jacobi singular value decomposition.

use super::{column, fro, inner, orthonormal_span, CMat, C64};
use crate::error::{Error, Result};

const REL_SKIP: f64 = f64::EPSILON;
const MAX_SWEEPS: usize = 80;

/// Thin SVD `A = U diag(values) V*`, singular values descending.
///
/// For an `m x n` input, `U` is `m x k` and `V` is `n x k` with `k = min(m, n)`.
#[derive(Clone, Debug)]
pub struct Svd {
    pub values: Vec<f64>,
    pub u: CMat,
    pub v: CMat,
}

pub fn svd(a: &CMat) -> Result<Svd> {
    if a.nrows() == 0 || a.ncols() == 0 {
        return Err(Error::Empty);
    }
    if a.nrows() < a.ncols() {
        let t = svd(&a.adjoint())?;
        return Ok(Svd {
            values: t.values,
            u: t.v,
            v: t.u,
        });
    }
    let (m, n) = (a.nrows(), a.ncols());
    let mut w = a.clone();
    let mut v = CMat::identity(n, n);
    let scale = fro(a);
    let floor = (1e-36 * scale * scale).max(f64::MIN_POSITIVE);

    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let alpha = col_norm_sqr(&w, p);
                let beta = col_norm_sqr(&w, q);
                let gamma = col_inner(&w, p, q);
                let r = gamma.norm();
                if r <= floor || r <= REL_SKIP * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let e = gamma / r;
                let tau = (beta - alpha) / (2.0 * r);
                let t = if tau >= 0.0 {
                    1.0 / (tau + tau.hypot(1.0))
                } else {
                    -1.0 / (-tau + tau.hypot(1.0))
                };
                let cs = 1.0 / t.hypot(1.0);
                let sn = t * cs;
                let upq = e * sn;
                let uqp = -e.conj() * sn;
                rotate_cols(&mut w, p, q, cs, upq, uqp);
                rotate_cols(&mut v, p, q, cs, upq, uqp);
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NoConvergence {
            what: "one-sided jacobi svd",
            residual: f64::NAN,
            sweeps: MAX_SWEEPS,
        });
    }

    let sig: Vec<f64> = (0..n).map(|j| col_norm_sqr(&w, j).sqrt()).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| sig[j].total_cmp(&sig[i]));
    let values: Vec<f64> = order.iter().map(|&j| sig[j]).collect();
    let vs = CMat::from_fn(n, n, |i, k| v[(i, order[k])]);

    // Left vectors for the numerically nonzero values; complete the rest.
    let tiny = values[0] * 1e-13 * (m as f64);
    let mut u = CMat::zeros(m, n);
    let mut good = 0;
    for (k, &j) in order.iter().enumerate() {
        if values[k] > tiny && values[k] > 0.0 {
            for i in 0..m {
                u[(i, k)] = w[(i, j)] / values[k];
            }
            good += 1;
        }
    }
    if good < n {
        let known = u.columns(0, good).into_owned();
        let mut cand = CMat::identity(m, m);
        if good > 0 {
            cand -= &known * known.adjoint();
        }
        let extra = orthonormal_span(&cand, 1e-8);
        for k in good..n {
            u.set_column(k, &extra.column(k - good));
        }
    }
    Ok(Svd {
        values,
        u,
        v: vs,
    })
}

pub fn singular_values(a: &CMat) -> Result<Vec<f64>> {
    Ok(svd(a)?.values)
}

fn col_norm_sqr(w: &CMat, j: usize) -> f64 {
    w.column(j).iter().map(|z| z.norm_sqr()).sum()
}

fn col_inner(w: &CMat, p: usize, q: usize) -> C64 {
    inner(&column(w, p), &column(w, q))
}

fn rotate_cols(w: &mut CMat, p: usize, q: usize, cs: f64, upq: C64, uqp: C64) {
    for k in 0..w.nrows() {
        let x = w[(k, p)];
        let y = w[(k, q)];
        w[(k, p)] = x * cs + y * uqp;
        w[(k, q)] = x * upq + y * cs;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::{c, real_matrix};

    fn check(a: &CMat) {
        let s = svd(a).unwrap();
        let k = s.values.len();
        let d = CMat::from_fn(k, k, |i, j| {
            if i == j {
                C64::new(s.values[i], 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        });
        let rec = &s.u * d * s.v.adjoint();
        assert!(fro(&(rec - a)) < 1e-13 * fro(a).max(1.0));
        assert!(fro(&(s.u.adjoint() * &s.u - CMat::identity(k, k))) < 1e-12);
        assert!(s.values.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn rectangular_both_ways() {
        let a = real_matrix(&[&[1.0, 2.0], &[3.0, 4.0], &[5.0, 6.0]]);
        check(&a);
        check(&a.transpose());
        let s = singular_values(&a).unwrap();
        // Frozen: numpy.linalg.svd on the same matrix.
        assert!((s[0] - 9.525518091565107).abs() < 1e-12);
        assert!((s[1] - 0.5143005806586441).abs() < 1e-12);
    }

    #[test]
    fn rank_deficient_and_complex() {
        let a = CMat::from_row_slice(
            3,
            3,
            &[
                c(1.0, 1.0),
                c(2.0, 0.0),
                c(3.0, 0.0),
                c(2.0, 2.0),
                c(4.0, 0.0),
                c(6.0, 0.0),
                c(0.0, 0.0),
                c(0.0, 1.0),
                c(1.0, 0.0),
            ],
        );
        check(&a);
        let z = CMat::zeros(2, 2);
        check(&z);
    }
}
