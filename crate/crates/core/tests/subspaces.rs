mod common;

use proptest::prelude::*;
use relgap::forms::FormPair;
use relgap::matcore::{op_norm, Projection};
use relgap::random;
use relgap::subspace::{block_compress, hs_subspace_bounds, pair_analysis, subspace_bounds, IntervalSpec, PairCase};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn kato_equalities(stream in any::<u64>()) {
        let mut rng = random::rng(stream);
        let (p, q) = common::kato_pair(&mut rng, 7);
        let r = pair_analysis(&p, &q).unwrap();
        prop_assert_eq!(r.case, PairCase::Isomorphic);
        prop_assert!((r.norm_p_qperp - r.norm_diff).abs() <= 1e-10);
        prop_assert!((r.norm_q_pperp - r.norm_diff).abs() <= 1e-10);
        prop_assert!(r.pythagorean_defect() <= 1e-10);
    }

    #[test]
    fn strict_inclusion_forces_unit_distance(stream in any::<u64>()) {
        let mut rng = random::rng(stream);
        let n = common::uniform_int(&mut rng, 3, 7);
        let big = random::projection(&mut rng, n, n - 1, true);
        let small = Projection::from_orthonormal(big.basis().columns(0, 1).into_owned()).unwrap();
        let r = pair_analysis(&small, &big).unwrap();
        prop_assert_eq!(r.case, PairCase::StrictInclusion);
        prop_assert!((r.norm_diff - 1.0).abs() <= 1e-10);
    }

    #[test]
    fn single_gap_bound(stream in any::<u64>()) {
        let mut rng = random::rng(stream);
        let g = common::gap_instance(&mut rng, false);
        let r = subspace_bounds(&g.h, &g.m, IntervalSpec::Single { d1: g.d1, d2: g.d2 }, None).unwrap();
        prop_assert!(r.resolvent_ok);
        prop_assert_eq!(r.rank_p, r.rank_q);
        prop_assert!(r.bound.dominates(1e-12));
    }

    #[test]
    fn double_gap_bound(stream in any::<u64>()) {
        let mut rng = random::rng(stream);
        let g = common::gap_instance(&mut rng, true);
        let (l1, l2) = g.lower.unwrap();
        let r = subspace_bounds(&g.h, &g.m, IntervalSpec::Double { l1, l2, d1: g.d1, d2: g.d2 }, None).unwrap();
        prop_assert!(r.resolvent_ok);
        prop_assert!(r.bound.dominates(1e-12));
    }

    #[test]
    fn hilbert_schmidt_bounds_and_block_identity(stream in any::<u64>()) {
        let mut rng = random::rng(stream);
        let g = common::gap_instance(&mut rng, false);
        let fp = FormPair::new(g.h.clone(), g.m.clone()).unwrap();
        let q = fp.h_eig().projector_below(g.d1);
        let p = fp.m_eig().projector_below(g.d1);
        let blocks = block_compress(&g.h, &g.m, &q, &p).unwrap();
        prop_assert!(blocks.commuting());
        prop_assert!(blocks.identity_defect <= 1e-8 * op_norm(g.h.as_mat()).unwrap());
        let r = hs_subspace_bounds(&g.h, &g.m, &q, &p).unwrap();
        for b in [&r.qperp_p, &r.pperp_q, &r.diff, &r.corollary] {
            prop_assert!(b.dominates(1e-12), "{:?}", b);
        }
        prop_assert!(r.pythagorean_defect <= 1e-10);
    }
}

#[test]
fn non_commuting_projections_are_refused() {
    let mut rng = random::rng(77);
    let h = random::positive_definite(&mut rng, 4, 10.0, true);
    let m = common::relative_perturbation(&mut rng, &h, 0.01);
    let q = random::projection(&mut rng, 4, 2, true);
    let p = random::projection(&mut rng, 4, 2, true);
    assert!(hs_subspace_bounds(&h, &m, &q, &p).is_err());
}
