use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use relgap::forms::FormPair;
use relgap::harness::{format_markdown, mathieu_model, run_benchmark, write_csv, Interp};
use relgap::matcore::io::{format_matrix, read_matrix};
use relgap::matcore::{HermitianMatrix, Projection};
use relgap::report::NormKind;
use relgap::ritz::{dk_residual_bound, ritz_bounds, ritz_pairs};
use relgap::sqroot::{sqrt_integral_solution, sqrt_pair};
use relgap::subspace::{hs_subspace_bounds, subspace_bounds, IntervalSpec};
use relgap::sylvester::{all_bounds, solve_weak_quadrature, solve_weak_spectral, weak_residual, WeakSylvesterProblem};
use serde::Serialize;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "relgap", version, about = "Relative perturbation bounds for positive definite matrices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Weak Sylvester equation A^{1/2} T M^{-1/2} - A^{-1/2} T M^{1/2} = F.
    #[command(subcommand)]
    Sylvester(SylvesterCmd),
    /// Distance between spectral projections of H and M.
    #[command(subcommand)]
    Subspace(SubspaceCmd),
    /// A posteriori error of a trial subspace.
    #[command(subcommand)]
    Ritz(RitzCmd),
    /// Square-root perturbation of a positive definite pair.
    #[command(subcommand)]
    Sqroot(SqrootCmd),
    /// Benchmark tables on the quasi-periodic model.
    #[command(subcommand)]
    Bench(BenchCmd),
}

#[derive(Subcommand)]
enum SylvesterCmd {
    /// Solve and bound. T goes to stdout (or --out), the JSON report to stderr (or --report).
    Solve(SolveArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Spectral,
    Quadrature,
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long)]
    a: PathBuf,
    #[arg(long)]
    m: PathBuf,
    #[arg(long)]
    f: PathBuf,
    #[arg(long, value_enum, default_value = "spectral")]
    method: Method,
    /// Separating abscissa for the quadrature path; defaults to the midpoint of (||M||, D).
    #[arg(long)]
    d: Option<f64>,
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Subcommand)]
enum SubspaceCmd {
    Bound(SubspaceArgs),
}

#[derive(Args)]
struct SubspaceArgs {
    #[arg(long)]
    h: PathBuf,
    #[arg(long)]
    m: PathBuf,
    #[arg(long)]
    d1: f64,
    #[arg(long)]
    d2: f64,
    #[arg(long, requires = "l2")]
    l1: Option<f64>,
    #[arg(long, requires = "l1")]
    l2: Option<f64>,
    /// Also report the Hilbert-Schmidt bounds.
    #[arg(long)]
    hs: bool,
}

#[derive(Subcommand)]
enum RitzCmd {
    Estimate(RitzArgs),
}

#[derive(Args)]
struct RitzArgs {
    #[arg(long)]
    h: PathBuf,
    /// Columns spanning the trial subspace.
    #[arg(long)]
    basis: PathBuf,
    /// Lower bound for the first eigenvalue above the trial subspace.
    #[arg(long = "next-ev")]
    next_ev: f64,
    #[arg(long)]
    hs: bool,
}

#[derive(Subcommand)]
enum SqrootCmd {
    Check(SqrootArgs),
}

#[derive(Args)]
struct SqrootArgs {
    #[arg(long)]
    h: PathBuf,
    #[arg(long)]
    m: PathBuf,
    /// Also evaluate the integral representation of X with this tolerance.
    #[arg(long)]
    integral_tol: Option<f64>,
}

#[derive(Subcommand)]
enum BenchCmd {
    Mathieu(MathieuArgs),
}

#[derive(Args)]
struct MathieuArgs {
    #[arg(long, default_value_t = relgap::harness::BENCH_THETA)]
    theta: f64,
    #[arg(long, default_value_t = relgap::harness::BENCH_ALPHA)]
    alpha: f64,
    #[arg(long = "K", default_value_t = relgap::harness::DEFAULT_K)]
    k: usize,
    #[arg(long, value_delimiter = ',', default_value = "5,6,7,8,9,10")]
    ns: Vec<usize>,
    #[arg(long, default_value = "cubic")]
    interp: Interp,
    #[arg(long, default_value = "hs")]
    norm: NormKind,
    /// Include the residual bound (cubic interpolants only).
    #[arg(long)]
    dk: bool,
    /// CSV destination; without it the CSV goes to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Exit with status 2 when any row violates the bound hypothesis.
    #[arg(long)]
    strict: bool,
}

fn hermitian(path: &Path) -> Result<HermitianMatrix> {
    let (m, _) = read_matrix(path).with_context(|| format!("reading {}", path.display()))?;
    HermitianMatrix::new(m).with_context(|| format!("{} is not Hermitian", path.display()))
}

fn emit_json<T: Serialize>(value: &T, dest: Option<&Path>, fallback: &mut dyn Write) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    match dest {
        Some(p) => fs::write(p, text + "\n").with_context(|| format!("writing {}", p.display()))?,
        None => writeln!(fallback, "{text}")?,
    }
    Ok(())
}

#[derive(Serialize)]
struct SolveReport {
    method: &'static str,
    d: Option<f64>,
    quadrature_error: Option<f64>,
    #[serde(flatten)]
    bounds: relgap::sylvester::SylvesterBounds,
    /// Residual of the returned solution in the weak form.
    returned_residual: f64,
}

fn sylvester_solve(args: SolveArgs) -> Result<()> {
    let a = hermitian(&args.a)?;
    let m = hermitian(&args.m)?;
    let (f, _) = read_matrix(&args.f)?;
    let p = WeakSylvesterProblem::new(a, m, f)?;
    let bounds = all_bounds(&p)?;
    let (t, method, d, qerr) = match args.method {
        Method::Spectral => (solve_weak_spectral(&p)?, "spectral", None, None),
        Method::Quadrature => {
            if !p.is_dichotomous() {
                bail!("quadrature needs ||M|| < D; use --method spectral");
            }
            let d = args.d.unwrap_or(0.5 * (p.m_norm() + p.d_bottom()));
            let q = solve_weak_quadrature(&p, d, args.tol)?;
            (q.t, "quadrature", Some(d), Some(q.error_estimate))
        }
    };
    let report = SolveReport {
        method,
        d,
        quadrature_error: qerr,
        returned_residual: weak_residual(&p, &t)?,
        bounds,
    };
    let text = format_matrix(&t);
    match &args.out {
        Some(path) => fs::write(path, text)?,
        None => print!("{text}"),
    }
    emit_json(&report, args.report.as_deref(), &mut io::stderr())
}

#[derive(Serialize)]
struct SubspaceOutput {
    #[serde(flatten)]
    report: relgap::subspace::SubspaceReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    hs: Option<relgap::subspace::HsSubspaceReport>,
}

fn subspace_bound(args: SubspaceArgs) -> Result<()> {
    let h = hermitian(&args.h)?;
    let m = hermitian(&args.m)?;
    let intervals = match (args.l1, args.l2) {
        (Some(l1), Some(l2)) => IntervalSpec::Double { l1, l2, d1: args.d1, d2: args.d2 },
        _ => IntervalSpec::Single { d1: args.d1, d2: args.d2 },
    };
    let report = subspace_bounds(&h, &m, intervals, None)?;
    let hs = if args.hs {
        let fp = FormPair::new(h.clone(), m.clone())?;
        let (q, p) = match intervals {
            IntervalSpec::Single { d1, .. } => (fp.h_eig().projector_below(d1), fp.m_eig().projector_below(d1)),
            IntervalSpec::Double { l2, d1, .. } => (
                fp.h_eig().projector_below(d1).minus(&fp.h_eig().projector_below(l2)),
                fp.m_eig().projector_below(d1).minus(&fp.m_eig().projector_below(l2)),
            ),
        };
        Some(hs_subspace_bounds(&h, &m, &q, &p)?)
    } else {
        None
    };
    emit_json(&SubspaceOutput { report, hs }, None, &mut io::stdout())
}

fn ritz_estimate(args: RitzArgs) -> Result<()> {
    let h = hermitian(&args.h)?;
    let (basis, _) = read_matrix(&args.basis)?;
    if basis.nrows() != h.dim() {
        bail!("basis has {} rows, H is {}x{}", basis.nrows(), h.dim(), h.dim());
    }
    let p = Projection::span(&basis, 1e-10);
    if p.rank() < basis.ncols() {
        eprintln!("warning: basis columns are dependent; using rank {}", p.rank());
    }
    let norm = if args.hs { NormKind::Hs } else { NormKind::Op };
    let mut est = ritz_bounds(&h, &p, args.next_ev, norm)?;
    let (_, vectors) = ritz_pairs(&h, &p)?;
    est.dk_bound = dk_residual_bound(&h, &vectors, args.next_ev, norm)?.value;
    emit_json(&est, None, &mut io::stdout())
}

#[derive(Serialize)]
struct SqrootOutput {
    #[serde(flatten)]
    pair: relgap::sqroot::SqrtPerturbation,
    #[serde(skip_serializing_if = "Option::is_none")]
    integral_error_estimate: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    integral_vs_closed_form: Option<f64>,
}

fn sqroot_check(args: SqrootArgs) -> Result<()> {
    let h = hermitian(&args.h)?;
    let m = hermitian(&args.m)?;
    let pair = sqrt_pair(&h, &m)?;
    let (est, diff) = match args.integral_tol {
        Some(tol) => {
            let q = sqrt_integral_solution(&h, &m, tol)?;
            (Some(q.error_estimate), Some(relgap::matcore::op_norm(&(&q.x - &pair.x))?))
        }
        None => (None, None),
    };
    let out = SqrootOutput {
        pair,
        integral_error_estimate: est,
        integral_vs_closed_form: diff,
    };
    emit_json(&out, None, &mut io::stdout())
}

fn bench_mathieu(args: MathieuArgs) -> Result<ExitCode> {
    let model = mathieu_model(args.theta, args.alpha, args.k)?;
    let rows = run_benchmark(&model, &args.ns, args.interp, args.norm, args.dk)?;
    for r in &rows {
        for w in &r.warnings {
            eprintln!("warning: N = {}: {w}", r.n);
        }
    }
    match &args.out {
        Some(path) => {
            let file = fs::File::create(path).with_context(|| format!("creating {}", path.display()))?;
            write_csv(&rows, file)?;
            print!("{}", format_markdown(&rows));
        }
        None => write_csv(&rows, io::stdout().lock())?,
    }
    let failed: Vec<usize> = rows.iter().filter(|r| !r.hypothesis_ok).map(|r| r.n).collect();
    if args.strict && !failed.is_empty() {
        eprintln!("hypothesis fails for N = {failed:?}");
        return Ok(ExitCode::from(2));
    }
    Ok(ExitCode::SUCCESS)
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Sylvester(SylvesterCmd::Solve(a)) => sylvester_solve(a)?,
        Command::Subspace(SubspaceCmd::Bound(a)) => subspace_bound(a)?,
        Command::Ritz(RitzCmd::Estimate(a)) => ritz_estimate(a)?,
        Command::Sqroot(SqrootCmd::Check(a)) => sqroot_check(a)?,
        Command::Bench(BenchCmd::Mathieu(a)) => return bench_mathieu(a),
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
