//! Complex piecewise cubics on a uniform grid, with exact integrals.
//!
//! Each piece is stored in the local variable `s = t - t_i in [0, h]` as
//! `c0 + c1 s + c2 s^2 + c3 s^3`. Inner products of two such functions and
//! their Fourier moments are evaluated in closed form, so no quadrature
//! error enters the benchmark.

use crate::error::{Error, Result};
use crate::matcore::C64;
use nalgebra::{DMatrix, DVector};

#[derive(Clone, Debug, PartialEq)]
pub struct PiecewiseCubic {
    pub start: f64,
    pub h: f64,
    pub pieces: Vec<[C64; 4]>,
}

impl PiecewiseCubic {
    pub fn len(&self) -> usize {
        self.pieces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    pub fn end(&self) -> f64 {
        self.start + self.h * self.pieces.len() as f64
    }

    fn locate(&self, t: f64) -> (usize, f64) {
        let raw = ((t - self.start) / self.h).floor();
        let i = (raw.max(0.0) as usize).min(self.pieces.len() - 1);
        (i, t - self.start - i as f64 * self.h)
    }

    pub fn eval(&self, t: f64) -> C64 {
        let (i, s) = self.locate(t);
        let c = &self.pieces[i];
        ((c[3] * s + c[2]) * s + c[1]) * s + c[0]
    }

    pub fn derivative(&self) -> PiecewiseCubic {
        let z = C64::new(0.0, 0.0);
        PiecewiseCubic {
            start: self.start,
            h: self.h,
            pieces: self.pieces.iter().map(|c| [c[1], c[2] * 2.0, c[3] * 3.0, z]).collect(),
        }
    }

    pub fn scaled(&self, a: C64) -> PiecewiseCubic {
        self.map_pieces(|c| c.map(|x| x * a))
    }

    pub fn axpy(&self, a: C64, other: &PiecewiseCubic) -> Result<PiecewiseCubic> {
        self.check_grid(other)?;
        let mut out = self.clone();
        for (p, q) in out.pieces.iter_mut().zip(&other.pieces) {
            for d in 0..4 {
                p[d] += a * q[d];
            }
        }
        Ok(out)
    }

    fn map_pieces(&self, f: impl Fn(&[C64; 4]) -> [C64; 4]) -> PiecewiseCubic {
        PiecewiseCubic {
            start: self.start,
            h: self.h,
            pieces: self.pieces.iter().map(f).collect(),
        }
    }

    fn check_grid(&self, other: &PiecewiseCubic) -> Result<()> {
        if self.pieces.len() != other.pieces.len() || self.h != other.h || self.start != other.start {
            return Err(Error::Dimension("piecewise functions live on different grids".into()));
        }
        Ok(())
    }

    /// `int conj(self) other` over the whole grid.
    pub fn inner(&self, other: &PiecewiseCubic) -> Result<C64> {
        self.check_grid(other)?;
        let mut hp = [0.0; 8];
        for (n, v) in hp.iter_mut().enumerate() {
            *v = self.h.powi(n as i32 + 1) / (n as f64 + 1.0);
        }
        let mut acc = C64::new(0.0, 0.0);
        for (p, q) in self.pieces.iter().zip(&other.pieces) {
            for a in 0..4 {
                for b in 0..4 {
                    acc += p[a].conj() * q[b] * hp[a + b];
                }
            }
        }
        Ok(acc)
    }

    /// `int e^{i w t} self(t) dt`.
    pub fn fourier_moment(&self, w: f64) -> C64 {
        let m = power_moments(w, self.h);
        self.pieces
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let t0 = self.start + i as f64 * self.h;
                let local: C64 = (0..4).map(|n| c[n] * m[n]).sum();
                C64::from_polar(1.0, w * t0) * local
            })
            .sum()
    }
}

/// `I_n = int_0^h s^n e^{i w s} ds` for `n = 0..=3`.
///
/// A power series is used when `|w h|` is small, where the integration by
/// parts recurrence loses digits.
pub fn power_moments(w: f64, h: f64) -> [C64; 4] {
    let x = w * h;
    let mut out = [C64::new(0.0, 0.0); 4];
    if x.abs() < 2.0 {
        // I_n = h^{n+1} sum_m (i x)^m / (m! (n + m + 1))
        for (n, slot) in out.iter_mut().enumerate() {
            let mut term = C64::new(1.0, 0.0);
            let mut acc = C64::new(0.0, 0.0);
            for m in 0..60 {
                if m > 0 {
                    term *= C64::new(0.0, x) / m as f64;
                }
                let add = term / (n + m + 1) as f64;
                acc += add;
                if add.norm() < 1e-18 * acc.norm() {
                    break;
                }
            }
            *slot = acc * h.powi(n as i32 + 1);
        }
    } else {
        let e = C64::from_polar(1.0, x);
        let iw = C64::new(0.0, w);
        out[0] = (e - 1.0) / iw;
        for n in 1..4 {
            out[n] = (e * h.powi(n as i32) - out[n - 1] * n as f64) / iw;
        }
    }
    out
}

fn uniform_step(n: usize, a: f64, b: f64) -> Result<f64> {
    if n < 2 || !(b > a) {
        return Err(Error::Domain(format!("need at least two nodes on a proper interval, got {n}")));
    }
    Ok((b - a) / (n - 1) as f64)
}

/// Continuous piecewise linear interpolant of `y` on `n` equispaced nodes.
pub fn linear_interpolant(a: f64, b: f64, y: &[C64]) -> Result<PiecewiseCubic> {
    let h = uniform_step(y.len(), a, b)?;
    let z = C64::new(0.0, 0.0);
    Ok(PiecewiseCubic {
        start: a,
        h,
        pieces: y.windows(2).map(|p| [p[0], (p[1] - p[0]) / h, z, z]).collect(),
    })
}

/// Not-a-knot cubic spline through `y` on `n >= 4` equispaced nodes.
///
/// Solves for the nodal second derivatives `m_j`. Interior rows are the
/// usual `m_{j-1} + 4 m_j + m_{j+1} = 6 (y_{j-1} - 2 y_j + y_{j+1}) / h^2`;
/// the end rows force a single cubic across the first two and last two
/// intervals, i.e. `m_0 - 2 m_1 + m_2 = 0` and its mirror image.
pub fn not_a_knot_spline(a: f64, b: f64, y: &[C64]) -> Result<PiecewiseCubic> {
    let n = y.len();
    if n < 4 {
        return Err(Error::Domain(format!("not-a-knot spline needs at least 4 nodes, got {n}")));
    }
    let h = uniform_step(n, a, b)?;
    let one = C64::new(1.0, 0.0);
    let mut mat = DMatrix::<C64>::zeros(n, n);
    let mut rhs = DVector::<C64>::zeros(n);
    for j in 1..n - 1 {
        mat[(j, j - 1)] = one;
        mat[(j, j)] = one * 4.0;
        mat[(j, j + 1)] = one;
        rhs[j] = (y[j - 1] - y[j] * 2.0 + y[j + 1]) * (6.0 / (h * h));
    }
    for (row, j) in [(0, 0), (n - 1, n - 3)] {
        mat[(row, j)] = one;
        mat[(row, j + 1)] = -one * 2.0;
        mat[(row, j + 2)] = one;
    }
    let m = mat
        .lu()
        .solve(&rhs)
        .ok_or_else(|| Error::Consistency("spline system is singular".into()))?;
    let pieces = (0..n - 1)
        .map(|i| {
            let slope = (y[i + 1] - y[i]) / h - (m[i] * 2.0 + m[i + 1]) * (h / 6.0);
            [y[i], slope, m[i] / 2.0, (m[i + 1] - m[i]) / (6.0 * h)]
        })
        .collect();
    Ok(PiecewiseCubic { start: a, h, pieces })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn spline_reproduces_cubics() {
        let f = |t: f64| c(1.0 - 2.0 * t + 0.5 * t.powi(3), t * t);
        let nodes: Vec<f64> = (0..6).map(|j| j as f64 * 0.4).collect();
        let y: Vec<C64> = nodes.iter().map(|&t| f(t)).collect();
        let s = not_a_knot_spline(0.0, 2.0, &y).unwrap();
        for t in [0.0, 0.13, 0.77, 1.5, 1.99, 2.0] {
            assert!((s.eval(t) - f(t)).norm() < 1e-12, "t = {t}");
        }
    }

    #[test]
    fn spline_matches_frozen_reference() {
        // scipy.interpolate.CubicSpline(bc_type="not-a-knot") on sin over
        // 7 nodes of [0, 2 pi], evaluated at t = 1.
        let y: Vec<C64> = (0..7).map(|j| c((j as f64 * PI / 3.0).sin(), 0.0)).collect();
        let s = not_a_knot_spline(0.0, 2.0 * PI, &y).unwrap();
        assert!((s.eval(1.0).re - 0.844006747081623).abs() < 1e-13);
    }

    #[test]
    fn linear_interpolant_hits_nodes() {
        let y = [c(1.0, 0.0), c(0.0, 2.0), c(-1.0, -1.0)];
        let l = linear_interpolant(0.0, 1.0, &y).unwrap();
        assert_eq!(l.eval(0.5), y[1]);
        assert!((l.eval(0.25) - c(0.5, 1.0)).norm() < 1e-15);
        assert!((l.eval(1.0) - y[2]).norm() < 1e-15);
    }

    #[test]
    fn inner_product_is_exact() {
        // int_0^1 |1 + t|^2 dt = 7/3 split over two pieces.
        let y = [c(1.0, 0.0), c(1.5, 0.0), c(2.0, 0.0)];
        let l = linear_interpolant(0.0, 1.0, &y).unwrap();
        assert!((l.inner(&l).unwrap() - c(7.0 / 3.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn moments_agree_across_the_branch_switch() {
        for &w in &[1e-9, 0.3, 1.99, 2.01, 7.5, -40.0] {
            let m = power_moments(w, 1.0);
            // Reference by composite Gauss-Legendre with many panels.
            for n in 0..4 {
                let g = [-0.906179845938664, -0.538469310105683, 0.0, 0.538469310105683, 0.906179845938664];
                let gw = [0.236926885056189, 0.478628670499366, 0.568888888888889, 0.478628670499366, 0.236926885056189];
                let panels = 400;
                let mut acc = c(0.0, 0.0);
                for p in 0..panels {
                    let (lo, hi) = (p as f64 / panels as f64, (p + 1) as f64 / panels as f64);
                    for (x, wt) in g.iter().zip(gw) {
                        let s = 0.5 * (lo + hi) + 0.5 * (hi - lo) * x;
                        acc += C64::from_polar(s.powi(n as i32), w * s) * (0.5 * (hi - lo) * wt);
                    }
                }
                assert!((m[n] - acc).norm() < 1e-12, "w = {w}, n = {n}");
            }
        }
    }

    #[test]
    fn fourier_moment_of_a_constant() {
        let y = vec![c(1.0, 0.0); 5];
        let l = linear_interpolant(0.0, 2.0 * PI, &y).unwrap();
        let w = 0.5;
        let exact = (C64::from_polar(1.0, w * 2.0 * PI) - 1.0) / c(0.0, w);
        assert!((l.fourier_moment(w) - exact).norm() < 1e-14);
    }
}
