//! Benchmark on the quasi-periodic model `-u'' - alpha u`.
//!
//! Trial spaces are spanned by interpolants of the two lowest
//! eigenfunctions; the Ritz bound is compared with the exact subspace error
//! and with the residual bound of Davis and Kahan.

mod bench;
mod model;
pub mod piecewise;
mod test_space;

pub use bench::{format_csv, format_markdown, run_benchmark, run_benchmark_for, write_csv, BenchmarkRow, CSV_HEADER};
pub use model::{mathieu_model, omega, MathieuModel, BENCH_ALPHA, BENCH_THETA, DEFAULT_K};
pub use test_space::{build_test_space, Interp, RitzData, TestSpace, TRUNCATION_WARN};
