use crate::error::{Error, Result};
use crate::matcore::{HermitianMatrix, C64};
use serde::Serialize;
use std::f64::consts::PI;

/// `-u'' - alpha u` on `[0, 2 pi]` with `u(2 pi) = e^{-i theta} u(0)`.
///
/// The eigenfunctions are `z_k(t) = e^{-i (k + sigma) t} / sqrt(2 pi)` with
/// `sigma = theta / (2 pi)`, for eigenvalues `omega_k = (k + sigma)^2 - alpha`.
#[derive(Clone, Debug, Serialize)]
pub struct MathieuModel {
    pub theta: f64,
    pub alpha: f64,
    /// Modes `k = -k_max..=k_max` are kept in the truncated eigenbasis.
    pub k_max: usize,
    /// `omega_k` in the order `k = -k_max, ..., k_max`.
    pub eigenvalues: Vec<f64>,
}

/// The configuration with a tight cluster of two small eigenvalues.
pub const BENCH_THETA: f64 = PI - 1e-4;
pub const BENCH_ALPHA: f64 = 0.2499;
pub const DEFAULT_K: usize = 64;

pub fn omega(theta: f64, alpha: f64, k: i64) -> f64 {
    let w = k as f64 + theta / (2.0 * PI);
    w * w - alpha
}

pub fn mathieu_model(theta: f64, alpha: f64, k_max: usize) -> Result<MathieuModel> {
    if k_max < 2 {
        return Err(Error::Domain(format!("truncation order must be at least 2, got {k_max}")));
    }
    if !(theta > 0.0 && theta < 2.0 * PI) {
        return Err(Error::Domain(format!("theta = {theta} is outside (0, 2 pi)")));
    }
    let sigma = theta / (2.0 * PI);
    // Closest integer shifts to -sigma are k = 0 and k = -1.
    let floor = sigma.powi(2).min((1.0 - sigma).powi(2));
    if alpha >= floor {
        return Err(Error::Domain(format!(
            "alpha = {alpha} makes the operator indefinite (needs alpha < {floor})"
        )));
    }
    let km = k_max as i64;
    Ok(MathieuModel {
        theta,
        alpha,
        k_max,
        eigenvalues: (-km..=km).map(|k| omega(theta, alpha, k)).collect(),
    })
}

impl MathieuModel {
    pub fn sigma(&self) -> f64 {
        self.theta / (2.0 * PI)
    }

    pub fn dim(&self) -> usize {
        2 * self.k_max + 1
    }

    pub fn modes(&self) -> impl Iterator<Item = i64> {
        let km = self.k_max as i64;
        -km..=km
    }

    /// Coordinate of mode `k` in the truncated basis.
    pub fn index_of(&self, k: i64) -> Option<usize> {
        let km = self.k_max as i64;
        (-km..=km).contains(&k).then(|| (k + km) as usize)
    }

    pub fn omega(&self, k: i64) -> f64 {
        omega(self.theta, self.alpha, k)
    }

    /// Modes ordered by eigenvalue, ties broken by `k`.
    pub fn sorted_modes(&self) -> Vec<(i64, f64)> {
        let mut v: Vec<(i64, f64)> = self.modes().map(|k| (k, self.omega(k))).collect();
        v.sort_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)));
        v
    }

    /// `lambda_1 <= lambda_2 <= ...` within the truncation.
    pub fn sorted_eigenvalues(&self) -> Vec<f64> {
        self.sorted_modes().into_iter().map(|(_, w)| w).collect()
    }

    /// `H` in the truncated eigenbasis.
    pub fn hamiltonian(&self) -> HermitianMatrix {
        HermitianMatrix::from_real_diagonal(&self.eigenvalues)
    }

    /// `z_k(t)`.
    pub fn eigenfunction(&self, k: i64, t: f64) -> C64 {
        C64::from_polar(1.0 / (2.0 * PI).sqrt(), -(k as f64 + self.sigma()) * t)
    }

    /// Splits `targets` from the rest of the truncated spectrum and returns
    /// `(largest target eigenvalue, smallest remaining eigenvalue)`.
    pub fn separation(&self, targets: &[i64]) -> Result<(f64, f64)> {
        if targets.is_empty() {
            return Err(Error::Precondition("no target eigenfunctions".into()));
        }
        for &k in targets {
            if self.index_of(k).is_none() {
                return Err(Error::Domain(format!("mode {k} is outside -{0}..={0}", self.k_max)));
            }
        }
        let top = targets.iter().map(|&k| self.omega(k)).fold(f64::MIN, f64::max);
        let next = self
            .modes()
            .filter(|k| !targets.contains(k))
            .map(|k| self.omega(k))
            .fold(f64::INFINITY, f64::min);
        if top >= next {
            return Err(Error::Precondition(
                "targets are not the lowest eigenfunctions of the model".into(),
            ));
        }
        Ok((top, next))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unshifted_half_phase_is_degenerate() {
        let m = mathieu_model(PI, 0.0, 3).unwrap();
        assert_eq!(m.omega(0), 0.25);
        assert_eq!(m.omega(-1), 0.25);
        assert_eq!(m.omega(1), 2.25);
    }

    #[test]
    fn stored_values_match_the_formula_bitwise() {
        let m = mathieu_model(BENCH_THETA, BENCH_ALPHA, 8).unwrap();
        for (i, k) in m.modes().enumerate() {
            assert_eq!(m.eigenvalues[i].to_bits(), omega(m.theta, m.alpha, k).to_bits());
        }
    }

    #[test]
    fn bench_cluster() {
        let m = mathieu_model(BENCH_THETA, BENCH_ALPHA, DEFAULT_K).unwrap();
        let s = m.sorted_modes();
        assert_eq!((s[0].0, s[1].0, s[2].0), (0, -1, 1));
        assert_eq!(m.separation(&[0, -1]).unwrap(), (m.omega(-1), m.omega(1)));
        assert!(m.separation(&[0, 1]).is_err());
    }

    #[test]
    fn rejects_indefinite_and_small_truncations() {
        assert!(mathieu_model(PI, 0.25, 4).is_err());
        assert!(mathieu_model(PI, 0.1, 1).is_err());
        assert!(mathieu_model(0.0, 0.1, 4).is_err());
    }

    #[test]
    fn eigenfunctions_are_quasi_periodic() {
        let m = mathieu_model(1.3, 0.01, 4).unwrap();
        for k in m.modes() {
            let lhs = m.eigenfunction(k, 2.0 * PI);
            let rhs = C64::from_polar(1.0, m.theta).conj() * m.eigenfunction(k, 0.0);
            assert!((lhs - rhs).norm() < 1e-14);
        }
    }
}
