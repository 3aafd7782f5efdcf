//! Seeded generators for randomized tests and demos.
//!
//! Every generator takes an explicit RNG; [`rng`] builds one from the
//! `RELGAP_SEED` environment variable (falling back to a fixed default) and a
//! caller-chosen stream id, so independent suites do not share draws.

use crate::matcore::{orthonormal_span, CMat, HermitianMatrix, Projection, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub const SEED_ENV: &str = "RELGAP_SEED";
pub const DEFAULT_SEED: u64 = 20_240_917;

pub type TestRng = ChaCha8Rng;

pub fn seed_from_env() -> u64 {
    std::env::var(SEED_ENV)
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_SEED)
}

pub fn rng(stream: u64) -> TestRng {
    let mut r = ChaCha8Rng::seed_from_u64(seed_from_env());
    r.set_stream(stream);
    r
}

fn normal(rng: &mut TestRng) -> f64 {
    rng.sample(StandardNormal)
}

/// Gaussian matrix; complex entries have independent real and imaginary parts.
pub fn gaussian_matrix(rng: &mut TestRng, rows: usize, cols: usize, complex: bool) -> CMat {
    CMat::from_fn(rows, cols, |_, _| {
        let re = normal(rng);
        let im = if complex { normal(rng) } else { 0.0 };
        C64::new(re, im)
    })
}

/// Unitary (orthogonal when real) matrix from Gram-Schmidt on a Gaussian draw.
pub fn unitary(rng: &mut TestRng, n: usize, complex: bool) -> CMat {
    loop {
        let q = orthonormal_span(&gaussian_matrix(rng, n, n, complex), 1e-8);
        if q.ncols() == n {
            return q;
        }
    }
}

/// GUE-style Hermitian matrix.
pub fn hermitian(rng: &mut TestRng, n: usize, complex: bool) -> HermitianMatrix {
    let g = gaussian_matrix(rng, n, n, complex);
    HermitianMatrix::symmetrize(g).expect("square")
}

/// `U diag(values) U*` with a random unitary `U`.
pub fn with_spectrum(rng: &mut TestRng, values: &[f64], complex: bool) -> HermitianMatrix {
    let u = unitary(rng, values.len(), complex);
    HermitianMatrix::from_real_diagonal(values).compress(&u.adjoint())
}

/// `n` values log-uniform in `[lo, hi]`, ascending.
pub fn log_uniform(rng: &mut TestRng, n: usize, lo: f64, hi: f64) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    let mut v: Vec<f64> = (0..n).map(|_| (a + (b - a) * rng.random::<f64>()).exp()).collect();
    v.sort_by(f64::total_cmp);
    v
}

/// Positive definite matrix with spectrum in `[1, cond]`, extremes attained.
pub fn positive_definite(rng: &mut TestRng, n: usize, cond: f64, complex: bool) -> HermitianMatrix {
    let mut v = log_uniform(rng, n, 1.0, cond);
    v[0] = 1.0;
    if n > 1 {
        v[n - 1] = cond;
    }
    with_spectrum(rng, &v, complex)
}

/// Random `k`-dimensional subspace of `C^n`.
pub fn projection(rng: &mut TestRng, n: usize, k: usize, complex: bool) -> Projection {
    let u = unitary(rng, n, complex);
    Projection::from_orthonormal(u.columns(0, k).into_owned()).expect("unitary columns")
}

/// Uniform draw in `[lo, hi)`.
pub fn uniform(rng: &mut TestRng, lo: f64, hi: f64) -> f64 {
    lo + (hi - lo) * rng.random::<f64>()
}

pub fn coin(rng: &mut TestRng) -> bool {
    rng.random::<bool>()
}
