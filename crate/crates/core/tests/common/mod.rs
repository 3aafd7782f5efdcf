//! Random instance generators shared by the integration tests and the
//! acceptance runner.
#![allow(dead_code)]

use relgap::matcore::{CMat, HermitianMatrix, Projection, DEFAULT_ZERO_TOL};
use relgap::random::{self, TestRng};
use relgap::sylvester::WeakSylvesterProblem;

pub fn uniform_int(rng: &mut TestRng, lo: usize, hi: usize) -> usize {
    (random::uniform(rng, lo as f64, hi as f64 + 1.0).floor() as usize).min(hi)
}

/// `n` values log-uniform in `[lo, hi]`, ascending.
pub fn spectrum(rng: &mut TestRng, n: usize, lo: f64, hi: f64) -> Vec<f64> {
    random::log_uniform(rng, n, lo, hi)
}

/// `||M|| < D`: the whole spectrum of `A` lies above that of `M`.
pub fn dichotomous(rng: &mut TestRng, max_dim: usize) -> WeakSylvesterProblem {
    let complex = random::coin(rng);
    let (na, nm) = (uniform_int(rng, 1, max_dim), uniform_int(rng, 1, max_dim));
    let m_lo = random::uniform(rng, 0.01, 1.0);
    let m_hi = m_lo * random::uniform(rng, 1.0, 20.0);
    let ratio = random::uniform(rng, 1.05, 50.0);
    let sm = spectrum(rng, nm, m_lo, m_hi);
    let top = sm[nm - 1];
    let spread = random::uniform(rng, 1.0, 20.0);
    let sa = spectrum(rng, na, top * ratio, top * ratio * spread);
    let a = random::with_spectrum(rng, &sa, complex);
    let m = random::with_spectrum(rng, &sm, complex);
    let f = random::gaussian_matrix(rng, na, nm, complex);
    WeakSylvesterProblem::new(a, m, f).expect("generated instance is valid")
}

/// Spectrum of `A` on both sides of the spectrum of `M`.
pub fn two_sided(rng: &mut TestRng, max_dim: usize) -> WeakSylvesterProblem {
    let complex = random::coin(rng);
    let nm = uniform_int(rng, 1, max_dim);
    let (below, above) = (uniform_int(rng, 1, max_dim), uniform_int(rng, 1, max_dim));
    let spread = random::uniform(rng, 1.0, 10.0);
    let sm = spectrum(rng, nm, 1.0, spread);
    let lo = sm[0] / random::uniform(rng, 1.05, 30.0);
    let hi = sm[nm - 1] * random::uniform(rng, 1.05, 30.0);
    let mut sa = spectrum(rng, below, lo * 1e-2, lo);
    sa.extend(spectrum(rng, above, hi, hi * 100.0));
    let a = random::with_spectrum(rng, &sa, complex);
    let m = random::with_spectrum(rng, &sm, complex);
    let f = random::gaussian_matrix(rng, sa.len(), nm, complex);
    WeakSylvesterProblem::new(a, m, f).expect("generated instance is valid")
}

/// Disjoint but otherwise arbitrary spectra.
pub fn separated(rng: &mut TestRng, max_dim: usize) -> WeakSylvesterProblem {
    let complex = random::coin(rng);
    loop {
        let (na, nm) = (uniform_int(rng, 1, max_dim), uniform_int(rng, 1, max_dim));
        let sa = spectrum(rng, na, 0.01, 100.0);
        let sm = spectrum(rng, nm, 0.01, 100.0);
        let gap = relgap::sylvester::relative_gap(&sa, &sm).unwrap();
        if gap < 1e-3 {
            continue;
        }
        let a = random::with_spectrum(rng, &sa, complex);
        let m = random::with_spectrum(rng, &sm, complex);
        let f = random::gaussian_matrix(rng, na, nm, complex);
        return WeakSylvesterProblem::new(a, m, f).expect("generated instance is valid");
    }
}

/// `M = H^{1/2} (I + E) H^{1/2}` with `||E|| = size`.
pub fn relative_perturbation(rng: &mut TestRng, h: &HermitianMatrix, size: f64) -> HermitianMatrix {
    let n = h.dim();
    let complex = !h.is_real() || random::coin(rng);
    let e = random::hermitian(rng, n, complex);
    let scale = e.eig().unwrap().max_abs();
    let e = e.scaled(size / scale);
    let root = h.eig().unwrap().power(0.5, DEFAULT_ZERO_TOL).unwrap();
    let core = CMat::identity(n, n) + e.as_mat();
    HermitianMatrix::symmetrize(root.as_mat() * core * root.as_mat()).unwrap()
}

/// A random positive definite pair, the second a relative perturbation of
/// the first.
pub fn close_pair(rng: &mut TestRng, max_dim: usize, cond: f64) -> (HermitianMatrix, HermitianMatrix) {
    let n = uniform_int(rng, 1, max_dim);
    let complex = random::coin(rng);
    let h = random::positive_definite(rng, n, cond, complex);
    let size = 10f64.powf(random::uniform(rng, -4.0, -0.5));
    let m = relative_perturbation(rng, &h, size);
    (h, m)
}

/// Two independent positive definite matrices.
pub fn pd_pair(rng: &mut TestRng, max_dim: usize, max_cond: f64) -> (HermitianMatrix, HermitianMatrix) {
    let n = uniform_int(rng, 1, max_dim);
    let complex = random::coin(rng);
    let c1 = 10f64.powf(random::uniform(rng, 0.0, max_cond.log10()));
    let c2 = 10f64.powf(random::uniform(rng, 0.0, max_cond.log10()));
    let (s1, s2) = (random::uniform(rng, 0.1, 10.0), random::uniform(rng, 0.1, 10.0));
    let h = random::positive_definite(rng, n, c1, complex).scaled(s1);
    let m = random::positive_definite(rng, n, c2, complex).scaled(s2);
    (h, m)
}

/// Clusters `[lo_i, hi_i]` separated by relative gaps, each with at least
/// one eigenvalue.
fn clustered(rng: &mut TestRng, groups: &[(usize, f64, f64)]) -> Vec<f64> {
    let mut v = Vec::new();
    for &(n, lo, hi) in groups {
        v.extend(spectrum(rng, n, lo, hi));
    }
    v
}

/// A pair `(H, M)` with a common spectral gap and the interval `[d1, d2]` inside it.
pub struct GapInstance {
    pub h: HermitianMatrix,
    pub m: HermitianMatrix,
    pub d1: f64,
    pub d2: f64,
    /// `Some((l1, l2))` for the two-gap variant.
    pub lower: Option<(f64, f64)>,
}

pub fn gap_instance(rng: &mut TestRng, double: bool) -> GapInstance {
    let complex = random::coin(rng);
    let size = 10f64.powf(random::uniform(rng, -4.0, -1.3));
    let ratio = random::uniform(rng, 3.0, 100.0);
    let n = |rng: &mut TestRng| uniform_int(rng, 1, 3);
    let (h_spec, d, l) = if double {
        let r0 = random::uniform(rng, 3.0, 100.0);
        let low_top = 1.0;
        let mid_lo = low_top * r0;
        let mid_hi = mid_lo * random::uniform(rng, 1.0, 5.0);
        let high_lo = mid_hi * ratio;
        let counts = [n(rng), n(rng), n(rng)];
        let groups = [(counts[0], 0.1, low_top), (counts[1], mid_lo, mid_hi), (counts[2], high_lo, high_lo * 10.0)];
        let s = clustered(rng, &groups);
        (s, (mid_hi, high_lo), Some((low_top, mid_lo)))
    } else {
        let low_top = 1.0;
        let high_lo = low_top * ratio;
        let counts = [n(rng), n(rng)];
        let groups = [(counts[0], 0.05, low_top), (counts[1], high_lo, high_lo * 10.0)];
        (clustered(rng, &groups), (low_top, high_lo), None)
    };
    let h = random::with_spectrum(rng, &h_spec, complex);
    let m = relative_perturbation(rng, &h, size);
    // Eigenvalues of M lie within a factor (1 +- size) of those of H.
    let inward = |(a, b): (f64, f64)| (a * (1.0 + size) * 1.05, b * (1.0 - size) / 1.05);
    let (d1, d2) = inward(d);
    GapInstance {
        h,
        m,
        d1,
        d2,
        lower: l.map(inward),
    }
}

/// Equal-rank pair with `||P (I - Q)|| < 1`.
pub fn kato_pair(rng: &mut TestRng, max_dim: usize) -> (Projection, Projection) {
    let n = uniform_int(rng, 2, max_dim);
    let k = uniform_int(rng, 1, n - 1);
    let complex = random::coin(rng);
    let p = random::projection(rng, n, k, complex);
    let tilt = random::uniform(rng, 0.01, 0.6);
    let moved = p.basis() + random::gaussian_matrix(rng, n, k, complex) * relgap::C64::new(tilt, 0.0);
    let q = Projection::span(&moved, 1e-10);
    (p, q)
}

/// A Ritz instance: positive definite `H` and a random trial subspace.
pub fn ritz_instance(rng: &mut TestRng, max_dim: usize, max_cond: f64) -> (HermitianMatrix, Projection) {
    let n = uniform_int(rng, 2, max_dim);
    let k = uniform_int(rng, 1, n - 1);
    let complex = random::coin(rng);
    let cond = 10f64.powf(random::uniform(rng, 0.0, max_cond.log10()));
    (random::positive_definite(rng, n, cond, complex), random::projection(rng, n, k, complex))
}

/// A trial subspace close to the lowest `k` eigenvectors of a random `H`.
pub fn near_invariant(rng: &mut TestRng, max_dim: usize) -> (HermitianMatrix, Projection, usize) {
    let n = uniform_int(rng, 3, max_dim);
    let k = uniform_int(rng, 1, n - 2);
    let complex = random::coin(rng);
    let mut s = spectrum(rng, k, 0.5, 1.0);
    s.extend(spectrum(rng, n - k, 5.0, 50.0));
    let u = random::unitary(rng, n, complex);
    let h = HermitianMatrix::from_real_diagonal(&s).compress(&u.adjoint());
    let tilt = 10f64.powf(random::uniform(rng, -6.0, -2.0));
    let low = u.columns(0, k).into_owned();
    let moved = &low + random::gaussian_matrix(rng, n, k, complex) * relgap::C64::new(tilt, 0.0);
    (h, Projection::span(&moved, 1e-12), k)
}
