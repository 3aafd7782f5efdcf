use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use tempfile::TempDir;

fn relgap(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_relgap")).args(args).output().expect("spawn relgap")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p: PathBuf = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_owned()
}

struct Fixture {
    _dir: TempDir,
    h: String,
    m: String,
    f: String,
    basis: String,
}

fn fixture() -> Fixture {
    let dir = TempDir::new().unwrap();
    let h = write(dir.path(), "h.txt", "3 3 real\n4 1 0\n1 3 0.5\n0 0.5 1\n");
    let m = write(dir.path(), "m.txt", "3 3 real\n4.1 1 0\n1 3.05 0.5\n0 0.5 0.98\n");
    let f = write(dir.path(), "f.txt", "3 3 real\n0.1 0 0\n0 0.2 0\n0 0 0.1\n");
    let basis = write(dir.path(), "b.txt", "3 1 real\n0.05\n-0.3\n1\n");
    Fixture { _dir: dir, h, m, f, basis }
}

fn json(out: &Output) -> serde_json::Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn version_flag() {
    let out = relgap(&["--version"]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("relgap "));
}

#[test]
fn sylvester_solutions_agree_across_methods() {
    let fx = fixture();
    let dir = TempDir::new().unwrap();
    let spec_t = dir.path().join("spectral.txt");
    let quad_t = dir.path().join("quad.txt");
    let report = dir.path().join("report.json");
    // The spectrum of A sits above that of M, so the problem is dichotomous.
    let small = write(dir.path(), "a.txt", "3 3 real\n0.2 0 0\n0 0.3 0\n0 0 0.25\n");
    let big = write(dir.path(), "big.txt", "3 3 real\n5 1 0\n1 4 0.5\n0 0.5 3\n");
    let out = relgap(&[
        "sylvester", "solve", "--a", &big, "--m", &small, "--f", &fx.f,
        "--out", spec_t.to_str().unwrap(), "--report", report.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let r: serde_json::Value = serde_json::from_str(&fs::read_to_string(&report).unwrap()).unwrap();
    assert!(r["returned_residual"].as_f64().unwrap() < 1e-12);
    assert_eq!(r["dichotomy"]["hypothesis_ok"], true);
    assert!(r["dichotomy"]["value"].as_f64().unwrap() >= r["norm_t"].as_f64().unwrap());

    let out = relgap(&[
        "sylvester", "solve", "--a", &big, "--m", &small, "--f", &fx.f,
        "--method", "quadrature", "--tol", "1e-12", "--out", quad_t.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let (a, _) = relgap::matcore::io::read_matrix(&spec_t).unwrap();
    let (b, _) = relgap::matcore::io::read_matrix(&quad_t).unwrap();
    assert!((a - b).norm() < 1e-9);
}

#[test]
fn quadrature_refuses_non_dichotomous_input() {
    let fx = fixture();
    let out = relgap(&["sylvester", "solve", "--a", &fx.h, "--m", &fx.m, "--f", &fx.f, "--method", "quadrature"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("||M|| < D"));
}

#[test]
fn subspace_bound_dominates() {
    let fx = fixture();
    let v = json(&relgap(&["subspace", "bound", "--h", &fx.h, "--m", &fx.m, "--d1", "1.5", "--d2", "2", "--hs"]));
    let b = &v["bound"];
    assert_eq!(b["hypothesis_ok"], true);
    assert!(b["value"].as_f64().unwrap() >= b["true_value"].as_f64().unwrap());
    assert!(v["hs"]["diff"]["value"].is_number());
}

#[test]
fn subspace_rejects_reversed_interval() {
    let fx = fixture();
    let out = relgap(&["subspace", "bound", "--h", &fx.h, "--m", &fx.m, "--d1", "2", "--d2", "1.5"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn ritz_estimate_fills_the_residual_bound() {
    let fx = fixture();
    let v = json(&relgap(&["ritz", "estimate", "--h", &fx.h, "--basis", &fx.basis, "--next-ev", "2.3", "--hs"]));
    assert_eq!(v["hypothesis_ok"], true);
    let truth = v["true_hs"].as_f64().unwrap();
    assert!(v["bound_hs"].as_f64().unwrap() >= truth);
    assert!(v["dk_bound"].as_f64().unwrap() >= truth);
}

#[test]
fn sqroot_check_reports_a_nonnegative_margin() {
    let fx = fixture();
    let v = json(&relgap(&["sqroot", "check", "--h", &fx.h, "--m", &fx.m, "--integral-tol", "1e-10"]));
    assert!(v["margin"].as_f64().unwrap() >= 0.0);
    assert!(v["integral_vs_closed_form"].as_f64().unwrap() < 1e-8);
}

#[test]
fn bench_csv_and_strict_exit_code() {
    let dir = TempDir::new().unwrap();
    let csv = dir.path().join("t.csv");
    let out = relgap(&["bench", "mathieu", "--ns", "5,7", "--dk", "--strict", "--out", csv.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let text = fs::read_to_string(&csv).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "N,interp,norm,true_err,ritz_bound,dk_bound,hypothesis_ok");
    assert!(lines[1].starts_with("5,cubic,hs,") && lines[1].ends_with(",false"));
    assert!(lines[2].starts_with("7,cubic,hs,") && lines[2].ends_with(",true"));
    assert!(String::from_utf8_lossy(&out.stdout).contains("| N | 5 | 7 |"));

    let out = relgap(&["bench", "mathieu", "--ns", "7,8", "--strict", "--interp", "cubic", "--norm", "op"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().skip(1).all(|l| l.contains(",op,") && l.contains(",n/a,")));
}

#[test]
fn bench_rejects_bad_parameters() {
    let out = relgap(&["bench", "mathieu", "--alpha", "0.3"]);
    assert_eq!(out.status.code(), Some(1));
    let out = relgap(&["bench", "mathieu", "--interp", "quintic"]);
    assert!(!out.status.success());
}
