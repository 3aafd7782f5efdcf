//! Adaptive Gauss-Kronrod (7/15) quadrature for matrix-valued integrands.
//!
//! Subintervals live in a max-heap keyed by their error estimate; the worst
//! one is bisected until the summed estimate meets the tolerance or the
//! interval budget runs out.

use crate::error::{Error, Result};
use crate::matcore::CMat;
use std::cmp::Ordering;
use std::collections::BinaryHeap;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_225,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
/// Gauss weights for the nodes `XGK[1], XGK[3], XGK[5], XGK[7]`.
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Clone, Copy, Debug)]
pub struct QuadOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_intervals: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        Self {
            abs_tol: 1e-12,
            rel_tol: 1e-10,
            max_intervals: 20_000,
        }
    }
}

#[derive(Clone, Debug)]
pub struct QuadResult {
    pub value: CMat,
    /// Summed error estimate, in the max-entry norm.
    pub error: f64,
    pub intervals: usize,
    pub evaluations: usize,
}

struct Piece {
    a: f64,
    b: f64,
    value: CMat,
    err: f64,
}

impl PartialEq for Piece {
    fn eq(&self, o: &Self) -> bool {
        self.err == o.err
    }
}
impl Eq for Piece {}
impl PartialOrd for Piece {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Piece {
    fn cmp(&self, o: &Self) -> Ordering {
        self.err.total_cmp(&o.err)
    }
}

fn max_entry(m: &CMat) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

fn gk15<F: FnMut(f64) -> CMat>(f: &mut F, a: f64, b: f64) -> (CMat, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = &fc * nalgebra::Complex::new(WGK[7], 0.0);
    let mut g = &fc * nalgebra::Complex::new(WG[3], 0.0);
    for j in 0..7 {
        let dx = h * XGK[j];
        let s = f(c - dx) + f(c + dx);
        k += &s * nalgebra::Complex::new(WGK[j], 0.0);
        if j % 2 == 1 {
            g += &s * nalgebra::Complex::new(WG[j / 2], 0.0);
        }
    }
    let hk = nalgebra::Complex::new(h, 0.0);
    let k = k * hk;
    let g = g * hk;
    let err = max_entry(&(&k - &g));
    (k, err)
}

/// Integrates a matrix-valued function over the finite interval `[a, b]`.
pub fn integrate<F: FnMut(f64) -> CMat>(mut f: F, a: f64, b: f64, opts: QuadOptions) -> Result<QuadResult> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::Domain("quadrature limits must be finite".into()));
    }
    let (v0, e0) = gk15(&mut f, a, b);
    let mut total = v0.clone();
    let mut total_err = e0;
    let mut heap = BinaryHeap::new();
    heap.push(Piece {
        a,
        b,
        value: v0,
        err: e0,
    });
    let mut evals = 15;
    loop {
        let target = opts.abs_tol.max(opts.rel_tol * max_entry(&total));
        if total_err <= target {
            break;
        }
        if heap.len() >= opts.max_intervals {
            return Err(Error::Quadrature {
                achieved: total_err,
                intervals: heap.len(),
            });
        }
        let worst = heap.pop().expect("heap is never empty");
        let m = 0.5 * (worst.a + worst.b);
        let (vl, el) = gk15(&mut f, worst.a, m);
        let (vr, er) = gk15(&mut f, m, worst.b);
        evals += 30;
        total -= &worst.value;
        total += &vl;
        total += &vr;
        total_err += el + er - worst.err;
        heap.push(Piece {
            a: worst.a,
            b: m,
            value: vl,
            err: el,
        });
        heap.push(Piece {
            a: m,
            b: worst.b,
            value: vr,
            err: er,
        });
        // Recompute the running sums now and then to stop drift.
        if heap.len() % 256 == 0 {
            total = heap.iter().fold(CMat::zeros(total.nrows(), total.ncols()), |acc, p| acc + &p.value);
            total_err = heap.iter().map(|p| p.err).sum();
        }
    }
    let value = heap
        .iter()
        .fold(CMat::zeros(total.nrows(), total.ncols()), |acc, p| acc + &p.value);
    Ok(QuadResult {
        value,
        error: heap.iter().map(|p| p.err).sum(),
        intervals: heap.len(),
        evaluations: evals,
    })
}

/// Scalar convenience wrapper.
pub fn integrate_scalar<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, opts: QuadOptions) -> Result<f64> {
    let r = integrate(
        |x| CMat::from_element(1, 1, nalgebra::Complex::new(f(x), 0.0)),
        a,
        b,
        opts,
    )?;
    Ok(r.value[(0, 0)].re)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomials_exact_on_one_panel() {
        let v = integrate_scalar(|x| x.powi(20) - 3.0 * x, 0.0, 1.0, QuadOptions::default()).unwrap();
        assert!((v - (1.0 / 21.0 - 1.5)).abs() < 1e-14);
    }

    #[test]
    fn peaked_integrand() {
        // Integral of 1/(x^2 + 1e-4) over [-1, 1] is 200 atan(100).
        let v = integrate_scalar(|x| 1.0 / (x * x + 1e-4), -1.0, 1.0, QuadOptions::default()).unwrap();
        let exact = 200.0 * 100f64.atan();
        assert!((v - exact).abs() < 1e-8 * exact);
    }

    #[test]
    fn budget_exhaustion_is_an_error() {
        let opts = QuadOptions {
            abs_tol: 0.0,
            rel_tol: 1e-15,
            max_intervals: 4,
        };
        let r = integrate_scalar(|x| x.abs().sqrt().sin(), -1.0, 1.0, opts);
        assert!(matches!(r, Err(Error::Quadrature { .. })));
    }
}
