//! Browser bindings for the demo page in `www/`.
//!
//! Every export returns a JSON string; errors surface as JS exceptions.
//! The `*_json` functions do the work and are plain Rust so they can be
//! tested natively.

use relgap::harness::{mathieu_model, run_benchmark, Interp};
use relgap::matcore::{HermitianMatrix, DEFAULT_ZERO_TOL};
use relgap::random::{self, TestRng};
use relgap::report::NormKind;
use relgap::sqroot::sqrt_pair;
use relgap::subspace::{subspace_bounds, IntervalSpec};
use relgap::CMat;
use serde::Serialize;
use wasm_bindgen::prelude::*;

type Res<T> = Result<T, String>;

fn to_json<T: Serialize>(v: &T) -> Res<String> {
    serde_json::to_string(v).map_err(|e| e.to_string())
}

fn parse_ns(ns: &str) -> Res<Vec<usize>> {
    ns.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse().map_err(|_| format!("bad N: {s:?}")))
        .collect()
}

/// Benchmark rows for the quasi-periodic model.
pub fn benchmark_json(theta: f64, alpha: f64, k: usize, ns: &str, interp: &str, norm: &str, dk: bool) -> Res<String> {
    let interp: Interp = interp.parse().map_err(|e| format!("{e}"))?;
    let norm: NormKind = norm.parse().map_err(|e| format!("{e}"))?;
    let ns = parse_ns(ns)?;
    if ns.iter().any(|&n| n > 400) {
        return Err("keep N at or below 400 in the browser".into());
    }
    let model = mathieu_model(theta, alpha, k).map_err(|e| e.to_string())?;
    let rows = run_benchmark(&model, &ns, interp, norm, dk && interp == Interp::Cubic).map_err(|e| e.to_string())?;
    to_json(&rows)
}

fn perturb(rng: &mut TestRng, h: &HermitianMatrix, size: f64) -> Res<HermitianMatrix> {
    let n = h.dim();
    let e = random::hermitian(rng, n, true);
    let scale = e.eig().map_err(|e| e.to_string())?.max_abs();
    let root = h.eig().and_then(|d| d.power(0.5, DEFAULT_ZERO_TOL)).map_err(|e| e.to_string())?;
    let core = CMat::identity(n, n) + e.scaled(size / scale).as_mat();
    HermitianMatrix::symmetrize(root.as_mat() * core * root.as_mat()).map_err(|e| e.to_string())
}

#[derive(Serialize)]
struct SinThetaPoint {
    delta: f64,
    eta: f64,
    bound: Option<f64>,
    truth: Option<f64>,
    hypothesis_ok: bool,
}

/// Sweep of the relative sin-theta bound over perturbation sizes.
///
/// `H` has `low` eigenvalues log-spread in `[0.05, 1]` and `high` in
/// `[ratio, 10 ratio]`; `M = H^{1/2}(I + E)H^{1/2}` with `||E|| = delta`.
/// The gap `[D1, D2]` is shrunk so that it also separates `M`.
pub fn sin_theta_sweep_json(seed: u64, low: usize, high: usize, ratio: f64, deltas: &[f64]) -> Res<String> {
    if low == 0 || high == 0 || low + high > 40 {
        return Err("need 1 <= low, high and low + high <= 40".into());
    }
    if ratio <= 1.0 {
        return Err("ratio must exceed 1".into());
    }
    let mut rng = random::rng(seed);
    let mut values = random::log_uniform(&mut rng, low, 0.05, 1.0);
    values.extend(random::log_uniform(&mut rng, high, ratio, 10.0 * ratio));
    let h = random::with_spectrum(&mut rng, &values, true);
    let mut points = Vec::with_capacity(deltas.len());
    for &delta in deltas {
        if !(0.0..1.0).contains(&delta) {
            return Err(format!("delta {delta} outside [0, 1)"));
        }
        let m = perturb(&mut rng, &h, delta)?;
        let d1 = 1.0 + delta;
        let d2 = ratio * (1.0 - delta);
        if d1 >= d2 {
            break;
        }
        let r = subspace_bounds(&h, &m, IntervalSpec::Single { d1, d2 }, None).map_err(|e| e.to_string())?;
        points.push(SinThetaPoint {
            delta,
            eta: r.eta,
            bound: r.bound.value,
            truth: r.bound.true_value,
            hypothesis_ok: r.bound.hypothesis_ok,
        });
    }
    to_json(&points)
}

#[derive(Serialize)]
struct SqrtPoint {
    norm_t: f64,
    norm_x: f64,
    margin: f64,
}

/// Random pairs `(H, M)` of size `n` and condition up to `cond`, with the
/// norms of `T = M^{1/2} H^{-1/2} - M^{-1/2} H^{1/2}` and of its
/// square-root analogue `X`.
pub fn sqrt_samples_json(seed: u64, n: usize, cond: f64, count: usize) -> Res<String> {
    if n == 0 || n > 30 || count > 500 {
        return Err("need 1 <= n <= 30 and count <= 500".into());
    }
    if cond < 1.0 {
        return Err("condition number must be at least 1".into());
    }
    let mut rng = random::rng(seed);
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let h = random::positive_definite(&mut rng, n, cond, true);
        let m = random::positive_definite(&mut rng, n, cond, true);
        let s = sqrt_pair(&h, &m).map_err(|e| e.to_string())?;
        out.push(SqrtPoint { norm_t: s.norm_t, norm_x: s.norm_x, margin: s.margin });
    }
    to_json(&out)
}

fn js<T>(r: Res<T>) -> Result<T, JsError> {
    r.map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn benchmark(theta: f64, alpha: f64, k: usize, ns: &str, interp: &str, norm: &str, dk: bool) -> Result<String, JsError> {
    js(benchmark_json(theta, alpha, k, ns, interp, norm, dk))
}

#[wasm_bindgen(js_name = sinThetaSweep)]
pub fn sin_theta_sweep(seed: u32, low: usize, high: usize, ratio: f64, deltas: Vec<f64>) -> Result<String, JsError> {
    js(sin_theta_sweep_json(seed.into(), low, high, ratio, &deltas))
}

#[wasm_bindgen(js_name = sqrtSamples)]
pub fn sqrt_samples(seed: u32, n: usize, cond: f64, count: usize) -> Result<String, JsError> {
    js(sqrt_samples_json(seed.into(), n, cond, count))
}

#[wasm_bindgen(js_name = defaults)]
pub fn defaults() -> String {
    serde_json::json!({
        "theta": relgap::harness::BENCH_THETA,
        "alpha": relgap::harness::BENCH_ALPHA,
        "K": relgap::harness::DEFAULT_K,
    })
    .to_string()
}
