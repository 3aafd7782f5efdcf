use super::model::MathieuModel;
use super::test_space::{build_test_space, Interp};
use crate::error::Result;
use crate::matcore::{real_diag, HermitianMatrix};
use crate::report::NormKind;
use crate::ritz::{dk_bound_from_residual_gram, pencil_etas, ritz_bound_parts};
use serde::Serialize;
use std::fmt::Write as _;
use std::io::Write;

pub const CSV_HEADER: [&str; 7] = ["N", "interp", "norm", "true_err", "ritz_bound", "dk_bound", "hypothesis_ok"];

#[derive(Clone, Debug, Serialize)]
pub struct BenchmarkRow {
    #[serde(rename = "N")]
    pub n: usize,
    pub interp: Interp,
    pub norm: NormKind,
    pub true_err: f64,
    /// `None` when the bound is not computable (`D <= D_P` or `eta_n >= 1`).
    pub ritz_bound: Option<f64>,
    /// `None` for linear interpolants, which are not in the operator domain.
    pub dk_bound: Option<f64>,
    pub hypothesis_ok: bool,
    pub etas: Vec<f64>,
    pub ritz_values: Vec<f64>,
    /// `D`, the first eigenvalue above the targets.
    pub next: f64,
    pub warnings: Vec<String>,
}

impl BenchmarkRow {
    /// The bound must dominate the truth whenever its hypothesis holds.
    pub fn consistent(&self) -> bool {
        !self.hypothesis_ok || self.ritz_bound.is_some_and(|b| b >= self.true_err)
    }
}

/// Table rows for the two lowest eigenfunctions `z_0, z_{-1}`.
pub fn run_benchmark(
    model: &MathieuModel,
    ns: &[usize],
    interp: Interp,
    norm: NormKind,
    with_dk: bool,
) -> Result<Vec<BenchmarkRow>> {
    run_benchmark_for(model, &[0, -1], ns, interp, norm, with_dk)
}

/// Same as [`run_benchmark`] for an arbitrary set of lowest modes. With the
/// single target `z_0` and the operator norm this is the single-vector
/// estimate with `d_P = D_P`.
pub fn run_benchmark_for(
    model: &MathieuModel,
    targets: &[i64],
    ns: &[usize],
    interp: Interp,
    norm: NormKind,
    with_dk: bool,
) -> Result<Vec<BenchmarkRow>> {
    if ns.is_empty() {
        return Err(crate::Error::Precondition("no interpolation sizes given".into()));
    }
    let (_, next) = model.separation(targets)?;
    ns.iter()
        .map(|&n| {
            let space = build_test_space(model, n, interp, targets)?;
            let ritz = space.ritz()?;
            let k = ritz.values.len();
            let hc = HermitianMatrix::new(real_diag(&ritz.values))?;
            let etas = pencil_etas(&hc, &space.inverse_gram.compress(&ritz.combination))?;
            let (rmin, rmax) = (ritz.values[0], ritz.values[k - 1]);
            let parts = ritz_bound_parts(&etas, rmin, rmax, next);

            let errs = space.error_singular_values(model, &ritz.combination)?;
            let true_err = match norm {
                NormKind::Op => errs.iter().copied().fold(0.0, f64::max),
                NormKind::Hs => errs.iter().map(|e| e * e).sum::<f64>().sqrt(),
            };
            let ritz_bound = match norm {
                NormKind::Op => parts.bound_op,
                NormKind::Hs => parts.bound_hs,
            };
            let dk_bound = if with_dk && interp == Interp::Cubic {
                let gram = space.residual_gram(model.alpha, &ritz)?;
                dk_bound_from_residual_gram(&gram, rmin, rmax, next, norm)?.value
            } else {
                None
            };
            Ok(BenchmarkRow {
                n,
                interp,
                norm,
                true_err,
                ritz_bound,
                dk_bound,
                hypothesis_ok: parts.hypothesis_ok,
                etas,
                ritz_values: ritz.values,
                next,
                warnings: space.warnings,
            })
        })
        .collect()
}

fn opt(v: Option<f64>) -> String {
    v.map_or_else(|| "n/a".to_string(), |x| format!("{x:.6e}"))
}

pub fn write_csv<W: Write>(rows: &[BenchmarkRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| crate::Error::Io(e.into());
    w.write_record(CSV_HEADER).map_err(io)?;
    for r in rows {
        w.write_record([
            r.n.to_string(),
            r.interp.to_string(),
            r.norm.to_string(),
            format!("{:.6e}", r.true_err),
            opt(r.ritz_bound),
            opt(r.dk_bound),
            r.hypothesis_ok.to_string(),
        ])
        .map_err(io)?;
    }
    w.flush()?;
    Ok(())
}

pub fn format_csv(rows: &[BenchmarkRow]) -> Result<String> {
    let mut buf = Vec::new();
    write_csv(rows, &mut buf)?;
    String::from_utf8(buf).map_err(|e| crate::Error::Parse(e.to_string()))
}

fn short(v: Option<f64>) -> String {
    v.map_or_else(|| "n/a".to_string(), |x| format!("{x:.1e}"))
}

/// Quantities as rows and `N` as columns. A `*` marks bounds whose
/// hypothesis is violated.
pub fn format_markdown(rows: &[BenchmarkRow]) -> String {
    let mut s = String::new();
    let _ = write!(s, "| N |");
    for r in rows {
        let _ = write!(s, " {} |", r.n);
    }
    s.push_str("\n|---|");
    s.push_str(&"---|".repeat(rows.len()));
    let norm = rows.first().map_or(NormKind::Hs, |r| r.norm);
    let lines: [(String, Box<dyn Fn(&BenchmarkRow) -> String>); 3] = [
        (format!("true error ({norm})"), Box::new(|r| short(Some(r.true_err)))),
        (
            "Ritz bound".into(),
            Box::new(|r| {
                let mark = if r.hypothesis_ok { "" } else { "*" };
                format!("{}{mark}", short(r.ritz_bound))
            }),
        ),
        ("residual bound".into(), Box::new(|r| short(r.dk_bound))),
    ];
    for (label, cell) in &lines {
        let _ = write!(s, "\n| {label} |");
        for r in rows {
            let _ = write!(s, " {} |", cell(r));
        }
    }
    s.push('\n');
    s
}
