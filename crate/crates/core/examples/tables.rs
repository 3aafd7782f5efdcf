//! Prints the three benchmark tables in Markdown.

use relgap::harness::{format_markdown, mathieu_model, run_benchmark, run_benchmark_for, Interp, BENCH_ALPHA, BENCH_THETA, DEFAULT_K};
use relgap::report::NormKind;

fn main() -> relgap::Result<()> {
    let model = mathieu_model(BENCH_THETA, BENCH_ALPHA, DEFAULT_K)?;

    println!("Cubic interpolants of z_0, z_-1 (HS norm)\n");
    let rows = run_benchmark(&model, &[5, 6, 7, 8, 9, 10], Interp::Cubic, NormKind::Hs, true)?;
    println!("{}", format_markdown(&rows));

    println!("Cubic interpolant of z_0 alone (operator norm)\n");
    let rows = run_benchmark_for(&model, &[0], &[6, 7, 8, 9, 10], Interp::Cubic, NormKind::Op, true)?;
    println!("{}", format_markdown(&rows));

    println!("Linear interpolants of z_0, z_-1 (HS norm)\n");
    let rows = run_benchmark(&model, &[100, 120, 140], Interp::Linear, NormKind::Hs, true)?;
    println!("{}", format_markdown(&rows));
    Ok(())
}
