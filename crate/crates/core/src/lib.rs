//! Relative perturbation bounds for spectral subspaces of positive operators.
//!
//! The crate is organized bottom-up:
//!
//! * [`matcore`] dense Hermitian linear algebra and spectral calculus,
//! * [`forms`] closeness measures for pairs of positive forms,
//! * [`sylvester`] the weak Sylvester equation and its bounds,
//! * [`subspace`] sin-theta style bounds for spectral projections,
//! * [`ritz`] a posteriori bounds for Ritz subspaces,
//! * [`sqroot`] comparison of square roots of close positive matrices,
//! * [`harness`] a periodic Schrodinger model used as a benchmark.

pub mod error;
pub mod forms;
pub mod harness;
pub mod matcore;
pub mod quad;
pub mod random;
pub mod report;
pub mod ritz;
pub mod sqroot;
pub mod subspace;
pub mod sylvester;

pub use error::{Error, Result};
pub use matcore::{CMat, HermitianMatrix, Projection, SpectralDecomposition, C64};
