//! Operator and Hilbert-Schmidt norms.

use super::{fro, singular_values, CMat};
use crate::error::Result;
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Norms {
    pub op: f64,
    pub hs: f64,
}

/// Largest singular value.
pub fn op_norm(a: &CMat) -> Result<f64> {
    if a.is_empty() {
        return Ok(0.0);
    }
    Ok(singular_values(a)?[0])
}

/// Frobenius norm, equal to the root sum of squared singular values.
pub fn hs_norm(a: &CMat) -> f64 {
    fro(a)
}

pub fn norms(a: &CMat) -> Result<Norms> {
    Ok(Norms {
        op: op_norm(a)?,
        hs: hs_norm(a),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::real_matrix;

    #[test]
    fn op_and_hs_of_small_matrix() {
        let a = real_matrix(&[&[3.0, 0.0], &[4.0, 5.0]]);
        let n = norms(&a).unwrap();
        // Singular values are 3*sqrt(5) and sqrt(5).
        assert!((n.op - 45f64.sqrt()).abs() < 1e-13);
        assert!((n.hs - 50f64.sqrt()).abs() < 1e-13);
        assert!(n.op <= n.hs);
    }
}
