mod common;

use common::*;
use nalgebra::DMatrix;
use proptest::prelude::*;
use rand::Rng;
use trpca_core::algebra::{column_orthonormality_defect, from_matrix, PREDICATE_TOL};
use trpca_core::fourier::{idft3_with_residual, FourierTensor3};
use trpca_core::synth::{gen_low_tubal_rank, stream_rng};
use trpca_core::tsvd::slice_svd;
use trpca_core::{
    average_rank, best_rank_k, is_fdiagonal, is_orthogonal, singular_values, skinny_tsvd, tnn,
    tprod, tsvd, tubal_rank, ctranspose, Error, FactorKind, Tensor3, C64, DEFAULT_RANK_TOL,
};

fn check_full(a: &Tensor3) {
    let (n1, n2, n3) = a.dims();
    let f = tsvd(a).unwrap();
    assert_eq!(f.kind, FactorKind::Full);
    assert_eq!(f.u.dims(), (n1, n1, n3));
    assert_eq!(f.s.dims(), (n1, n2, n3));
    assert_eq!(f.v.dims(), (n2, n2, n3));
    assert_eq!(f.fourier_svds, n3 / 2 + 1);
    assert!(rel(&f.reconstruct().unwrap(), a) <= 1e-10, "{n1}x{n2}x{n3}");
    assert!(is_orthogonal(&f.u, 1e-10).unwrap());
    assert!(is_orthogonal(&f.v, 1e-10).unwrap());
    assert!(is_fdiagonal(&f.s, 1e-10));
    assert!(f.realness_residual <= 1e-10);
    let sv = f.singular_values();
    assert!(sv.windows(2).all(|w| w[0] >= w[1] - 1e-12));
}

#[test]
fn full_tsvd_over_shapes() {
    for (n1, n2, n3) in [
        (4, 4, 4),
        (5, 3, 6),
        (3, 5, 7),
        (1, 1, 1),
        (1, 4, 3),
        (4, 1, 2),
        (6, 6, 1),
        (2, 3, 8),
    ] {
        check_full(&rand_tensor(n1, n2, n3, (n1 * 31 + n2 * 7 + n3) as u64));
    }
}

#[test]
fn square_4x4x4_reconstruction() {
    let a = rand_tensor(4, 4, 4, 404);
    let f = tsvd(&a).unwrap();
    assert!(rel(&f.reconstruct().unwrap(), &a) <= 1e-10);
}

#[test]
fn n3_one_matches_matrix_svd() {
    let a = rand_tensor(6, 4, 1, 77);
    let m = a.slice_matrix(0);
    let expected = m.clone().svd(false, false).singular_values;
    let got = singular_values(&a).unwrap();
    for (g, e) in got.iter().zip(expected.iter()) {
        assert!((g - e).abs() <= 1e-12 * expected[0]);
    }
    let f = tsvd(&a).unwrap();
    assert!(rel(&f.reconstruct().unwrap(), &from_matrix(&m)) <= 1e-12);
}

#[test]
fn singular_values_are_weighted_fourier_means() {
    let a = rand_tensor(4, 3, 5, 13);
    let dense = dense_fourier_slices(&a);
    let mut expected = vec![0.0; 3];
    for s in &dense {
        for (e, v) in expected.iter_mut().zip(s.clone().svd(false, false).singular_values.iter()) {
            *e += v / 5.0;
        }
    }
    let got = singular_values(&a).unwrap();
    for (g, e) in got.iter().zip(&expected) {
        assert!((g - e).abs() <= 1e-12 * expected[0]);
    }
    let total: f64 = expected.iter().sum();
    assert!((tnn(&a).unwrap() - total).abs() <= 1e-12 * total);
}

/// Decomposing every Fourier slice on its own and then rotating each
/// singular pair by an arbitrary unit phase still yields valid slice SVDs,
/// but the mirrored slices stop being conjugates of each other.
#[test]
fn independent_slice_svds_break_realness() {
    let (n1, n2, n3) = (4, 4, 6);
    let a = rand_tensor(n1, n2, n3, 99);
    let mut rng = stream_rng(5, 0);
    let mut u_data = vec![C64::new(0.0, 0.0); n1 * n1 * n3];
    for (k, slice) in dense_fourier_slices(&a).iter().enumerate() {
        let svd = slice_svd(slice, false, true, k).unwrap();
        let mut u = svd.u.clone();
        let mut v = svd.v.clone();
        for c in 0..n1 {
            let theta: f64 = rng.random::<f64>() * std::f64::consts::TAU;
            let phase = C64::from_polar(1.0, theta);
            u.column_mut(c).iter_mut().for_each(|x| *x *= phase);
            v.column_mut(c).iter_mut().for_each(|x| *x *= phase);
        }
        let rebuilt = &u * DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
            n1,
            svd.sigma.iter().map(|&s| C64::new(s, 0.0)),
        )) * v.adjoint();
        assert!(complex_rel(&rebuilt, slice) <= 1e-10);
        for i in 0..n1 {
            for j in 0..n1 {
                u_data[(k * n1 + i) * n1 + j] = u[(i, j)];
            }
        }
    }
    let ubar = FourierTensor3::new(n1, n1, n3, u_data).unwrap();
    let (_, naive_residual) = idft3_with_residual(&ubar);
    assert!(naive_residual > 1e-3, "naive residual {naive_residual}");
    assert!(tsvd(&a).unwrap().realness_residual <= 1e-10);
}

#[test]
fn skinny_factors_of_low_rank_product() {
    let (n1, n2, n3) = (6, 5, 4);
    let p = rand_tensor(n1, 2, n3, 1);
    let q = rand_tensor(n2, 2, n3, 2);
    let a = tprod(&p, &ctranspose(&q)).unwrap();
    let f = skinny_tsvd(&a, DEFAULT_RANK_TOL).unwrap();
    assert_eq!(f.kind, FactorKind::Skinny);
    assert_eq!(f.width(), 2);
    assert_eq!(f.u.dims(), (n1, 2, n3));
    assert_eq!(f.s.dims(), (2, 2, n3));
    assert_eq!(f.v.dims(), (n2, 2, n3));
    assert!(rel(&f.reconstruct().unwrap(), &a) <= 1e-10);
    assert!(column_orthonormality_defect(&f.u).unwrap() <= 1e-10);
    assert!(column_orthonormality_defect(&f.v).unwrap() <= 1e-10);
    assert!(is_orthogonal(&f.u, 1e-10).is_err());
    assert_eq!(tubal_rank(&a, DEFAULT_RANK_TOL).unwrap(), 2);
    assert!(average_rank(&a, DEFAULT_RANK_TOL).unwrap() <= 2.0);
}

#[test]
fn generic_square_tensor_has_full_tubal_rank() {
    let a = rand_tensor(5, 5, 3, 8);
    assert_eq!(tubal_rank(&a, DEFAULT_RANK_TOL).unwrap(), 5);
    assert_eq!(skinny_tsvd(&a, DEFAULT_RANK_TOL).unwrap().width(), 5);
}

#[test]
fn zero_tensor_has_empty_skinny_factors() {
    let f = skinny_tsvd(&Tensor3::zeros(3, 4, 2), DEFAULT_RANK_TOL).unwrap();
    assert_eq!(f.width(), 0);
    assert_eq!(f.reconstruct().unwrap(), Tensor3::zeros(3, 4, 2));
    assert_eq!(tubal_rank(&Tensor3::zeros(3, 4, 2), DEFAULT_RANK_TOL).unwrap(), 0);
}

#[test]
fn average_rank_below_tubal_rank() {
    // Fourier slices diag(4, 2), 0, diag(0, 2), 0
    let mut a = Tensor3::zeros(3, 3, 4);
    for k in 0..4 {
        a.set(0, 0, k, 1.0);
    }
    a.set(1, 1, 0, 1.0);
    a.set(1, 1, 2, 1.0);
    let avg = average_rank(&a, DEFAULT_RANK_TOL).unwrap();
    let tubal = tubal_rank(&a, DEFAULT_RANK_TOL).unwrap();
    assert_eq!(tubal, 2);
    assert!((avg - 0.75).abs() < 1e-12, "{avg}");
    for seed in 0..10 {
        let b = gen_low_tubal_rank(6, 6, 5, 3, seed).unwrap();
        assert!(average_rank(&b, DEFAULT_RANK_TOL).unwrap() <= tubal_rank(&b, DEFAULT_RANK_TOL).unwrap() as f64);
    }
}

fn rank_k_error_oracle(a: &Tensor3, k: usize) -> f64 {
    let n3 = a.n3() as f64;
    let discarded: f64 = dense_fourier_slices(a)
        .iter()
        .map(|s| {
            s.clone()
                .svd(false, false)
                .singular_values
                .iter()
                .skip(k)
                .map(|v| v * v)
                .sum::<f64>()
        })
        .sum();
    (discarded / n3).sqrt()
}

#[test]
fn best_rank_one_error_matches_discarded_energy() {
    let a = rand_tensor(5, 4, 6, 61);
    for k in [1, 2, 3] {
        let ak = best_rank_k(&a, k).unwrap();
        let err = (&a - &ak).fro_norm();
        let oracle = rank_k_error_oracle(&a, k);
        assert!((err - oracle).abs() <= 1e-10 * oracle.max(1.0), "k = {k}");
        assert!(tubal_rank(&ak, 1e-8).unwrap() <= k);
    }
    assert_eq!(best_rank_k(&a, 4).unwrap().rel_error(&a) < 1e-12, true);
    assert_eq!(best_rank_k(&a, 5), Err(Error::RankOutOfRange { rank: 5, max: 4 }));
}

#[test]
fn best_rank_k_beats_sampled_competitors() {
    let a = rand_tensor(5, 5, 4, 3);
    for k in [1, 2] {
        let ak = best_rank_k(&a, k).unwrap();
        let best = (&a - &ak).fro_norm();
        let mut rng = stream_rng(17, k as u64);
        for t in 0..200 {
            let competitor = if t % 2 == 0 {
                gen_low_tubal_rank(5, 5, 4, k, 1000 + t).unwrap().scale(a.fro_norm() / 2.0)
            } else {
                // perturb the optimal factors; the result keeps tubal rank k
                let f = skinny_tsvd(&ak, 1e-8).unwrap();
                let (n1, w, n3) = f.u.dims();
                let noise = Tensor3::from_fn(n1, w, n3, |_, _, _| 0.05 * (rng.random::<f64>() - 0.5));
                let u = &f.u + &noise;
                tprod(&u, &tprod(&f.s, &ctranspose(&f.v)).unwrap()).unwrap()
            };
            assert!(tubal_rank(&competitor, 1e-8).unwrap() <= k);
            assert!((&a - &competitor).fro_norm() >= best - 1e-10);
        }
    }
}

#[test]
fn predicates_reject_non_members() {
    let a = rand_tensor(3, 3, 3, 12);
    assert!(!is_orthogonal(&a, PREDICATE_TOL).unwrap());
    assert!(!is_fdiagonal(&a, PREDICATE_TOL));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn tsvd_invariants(n1 in 1usize..6, n2 in 1usize..6, n3 in 1usize..7, seed in 0u64..10_000) {
        let a = rand_tensor(n1, n2, n3, seed);
        let f = tsvd(&a).unwrap();
        prop_assert!(rel(&f.reconstruct().unwrap(), &a) <= 1e-10);
        prop_assert!(is_orthogonal(&f.u, 1e-10).unwrap());
        prop_assert!(is_orthogonal(&f.v, 1e-10).unwrap());
        prop_assert!(is_fdiagonal(&f.s, 1e-10));
        prop_assert!(f.realness_residual <= 1e-10);
    }

    #[test]
    fn sv_sum_is_tnn(n1 in 1usize..6, n2 in 1usize..6, n3 in 1usize..7, seed in 0u64..10_000) {
        let a = rand_tensor(n1, n2, n3, seed);
        let s: f64 = tsvd(&a).unwrap().singular_values().iter().sum();
        let t = tnn(&a).unwrap();
        prop_assert!((s - t).abs() <= 1e-10 * t.max(1.0));
    }
}
