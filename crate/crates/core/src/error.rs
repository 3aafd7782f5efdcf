use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not Hermitian: asymmetry {asymmetry:.3e} relative to Frobenius norm")]
    NotHermitian { asymmetry: f64 },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("empty matrix or spectrum")]
    Empty,

    #[error("{what} did not converge: off-diagonal residual {residual:.3e} after {sweeps} sweeps")]
    NoConvergence {
        what: &'static str,
        residual: f64,
        sweeps: usize,
    },

    #[error("fractional power of a matrix with negative eigenvalue {value:.6e}")]
    NegativeEigenvalue { value: f64 },

    #[error("matrix is not positive definite: smallest eigenvalue {min_eigenvalue:.6e}")]
    NotPositiveDefinite { min_eigenvalue: f64 },

    #[error("matrix is not positive semidefinite: smallest eigenvalue {min_eigenvalue:.6e}")]
    NotPositiveSemidefinite { min_eigenvalue: f64 },

    #[error("kernels differ (largest principal angle sine {sine:.3e}); S requires N(H) = N(M)")]
    KernelMismatch { sine: f64 },

    #[error("value out of domain: {0}")]
    Domain(String),

    #[error(
        "near-singular Sylvester problem: eigenvalues {lambda:.6e} (A) and {mu:.6e} (M) have relative gap {gap:.3e}"
    )]
    NearSingular { lambda: f64, mu: f64, gap: f64 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("quadrature did not reach tolerance: estimated error {achieved:.3e} after {intervals} intervals")]
    Quadrature { achieved: f64, intervals: usize },

    #[error("internal consistency check failed: {0}")]
    Consistency(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
