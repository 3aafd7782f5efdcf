mod common;

use proptest::prelude::*;
use relgap::matcore::{fro, op_norm, singular_values, svd, CMat, HermitianMatrix, Projection, DEFAULT_ZERO_TOL};
use relgap::random;

fn config() -> ProptestConfig {
    ProptestConfig::with_cases(48)
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn eigendecomposition_reconstructs(stream in any::<u64>(), n in 1usize..9, complex in any::<bool>()) {
        let mut rng = random::rng(stream);
        let h = random::hermitian(&mut rng, n, complex);
        let e = h.eig().unwrap();
        let scale = fro(h.as_mat()).max(1.0);
        prop_assert!(fro(&(e.reconstruct() - h.as_mat())) <= 1e-12 * scale);
        let v = &e.vectors;
        prop_assert!(fro(&(v.adjoint() * v - CMat::identity(n, n))) <= 1e-12);
        prop_assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn fractional_powers_compose(stream in any::<u64>(), n in 1usize..7, p in -1.0f64..1.0) {
        let mut rng = random::rng(stream);
        let h = random::positive_definite(&mut rng, n, 1e3, true);
        let e = h.eig().unwrap();
        let a = e.power(p, DEFAULT_ZERO_TOL).unwrap();
        let b = e.power(1.0 - p, DEFAULT_ZERO_TOL).unwrap();
        let prod = a.as_mat() * b.as_mat();
        prop_assert!(fro(&(prod - h.as_mat())) <= 1e-9 * fro(h.as_mat()));
    }

    #[test]
    fn svd_factors_and_matches_operator_norm(stream in any::<u64>(), r in 1usize..7, c in 1usize..7) {
        let mut rng = random::rng(stream);
        let a = random::gaussian_matrix(&mut rng, r, c, true);
        let s = svd(&a).unwrap();
        let sigma = CMat::from_fn(s.values.len(), s.values.len(), |i, j| {
            if i == j { relgap::C64::new(s.values[i], 0.0) } else { relgap::C64::new(0.0, 0.0) }
        });
        let back = &s.u * sigma * s.v.adjoint();
        prop_assert!(fro(&(back - &a)) <= 1e-12 * fro(&a).max(1.0));
        prop_assert!((op_norm(&a).unwrap() - s.values[0]).abs() <= 1e-12 * s.values[0].max(1.0));
        let hs: f64 = s.values.iter().map(|x| x * x).sum::<f64>().sqrt();
        prop_assert!((hs - fro(&a)).abs() <= 1e-12 * hs.max(1.0));
    }

    #[test]
    fn unitary_invariance_of_singular_values(stream in any::<u64>(), n in 1usize..6) {
        let mut rng = random::rng(stream);
        let a = random::gaussian_matrix(&mut rng, n, n, true);
        let u = random::unitary(&mut rng, n, true);
        let s1 = singular_values(&a).unwrap();
        let s2 = singular_values(&(&u * &a)).unwrap();
        for (x, y) in s1.iter().zip(&s2) {
            prop_assert!((x - y).abs() <= 1e-12 * s1[0].max(1.0));
        }
    }

    #[test]
    fn projection_algebra(stream in any::<u64>(), n in 2usize..8) {
        let mut rng = random::rng(stream);
        let k = common::uniform_int(&mut rng, 0, n);
        let p = random::projection(&mut rng, n, k, true);
        let m = p.matrix();
        prop_assert!(fro(&(m * m - m)) <= 1e-12);
        prop_assert!(fro(&(m.adjoint() - m)) <= 1e-12);
        let c = p.complement();
        prop_assert_eq!(c.rank(), n - k);
        prop_assert!(fro(&(c.matrix() + m - CMat::identity(n, n))) <= 1e-12);
    }

    #[test]
    fn spectral_projectors_commute(stream in any::<u64>(), n in 2usize..8) {
        let mut rng = random::rng(stream);
        let h = random::hermitian(&mut rng, n, true);
        let e = h.eig().unwrap();
        let cut = 0.5 * (e.values[0] + e.values[n - 1]);
        let q = e.projector_below(cut);
        prop_assert!(q.commutator_norm(h.as_mat()) <= 1e-10 * op_norm(h.as_mat()).unwrap().max(1.0));
        prop_assert_eq!(q.rank(), e.values.iter().filter(|&&v| v < cut).count());
    }
}

#[test]
fn span_discards_dependent_columns() {
    let mut rng = random::rng(9);
    let a = random::gaussian_matrix(&mut rng, 5, 2, true);
    let mut cols = CMat::zeros(5, 3);
    cols.columns_mut(0, 2).copy_from(&a);
    let combo = a.column(0) * relgap::C64::new(2.0, -1.0) + a.column(1);
    cols.set_column(2, &combo);
    assert_eq!(Projection::span(&cols, 1e-10).rank(), 2);
}

#[test]
fn non_hermitian_input_is_rejected() {
    let m = relgap::matcore::real_matrix(&[&[1.0, 2.0], &[0.0, 1.0]]);
    assert!(HermitianMatrix::new(m).is_err());
}
