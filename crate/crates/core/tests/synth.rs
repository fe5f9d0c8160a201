use trpca_core::synth::{
    gen_low_tubal_rank, gen_sparse_bernoulli, phase_grid, PhaseExperiment, SparseModel,
    SyntheticInstance,
};
use trpca_core::{tubal_rank, SolverConfig, DEFAULT_RANK_TOL};

#[test]
fn low_rank_generator_has_requested_rank() {
    for seed in 0..5 {
        let a = gen_low_tubal_rank(20, 20, 5, 3, seed).unwrap();
        assert_eq!(tubal_rank(&a, DEFAULT_RANK_TOL).unwrap(), 3);
    }
    let a = gen_low_tubal_rank(20, 12, 4, 12, 1).unwrap();
    assert_eq!(tubal_rank(&a, DEFAULT_RANK_TOL).unwrap(), 12);
}

#[test]
fn low_rank_entry_scale() {
    // P ∗ Q* entries have variance r·n3/n1²
    let (n, n3, r) = (60, 4, 5);
    let a = gen_low_tubal_rank(n, n, n3, r, 9).unwrap();
    let var = a.as_slice().iter().map(|v| v * v).sum::<f64>() / a.len() as f64;
    let expected = (r * n3) as f64 / (n * n) as f64;
    assert!((var - expected).abs() < 0.15 * expected, "{var} vs {expected}");
}

#[test]
fn bernoulli_support_within_three_sigma() {
    let (n1, n2, n3, rho) = (100usize, 100usize, 50usize, 0.2);
    let s = gen_sparse_bernoulli(n1, n2, n3, SparseModel::Bernoulli(rho), 5).unwrap();
    let total = (n1 * n2 * n3) as f64;
    let mean = rho * total;
    let sd = (total * rho * (1.0 - rho)).sqrt();
    let count = s.l0_norm() as f64;
    assert!((count - mean).abs() <= 3.0 * sd, "{count}");
    let plus = s.as_slice().iter().filter(|&&v| v == 1.0).count() as f64;
    let half_sd = (count * 0.25).sqrt();
    assert!((plus - 0.5 * count).abs() <= 3.0 * half_sd);
    assert!(s.as_slice().iter().all(|&v| v == 0.0 || v == 1.0 || v == -1.0));
}

#[test]
fn fixed_count_support_is_exact() {
    let s = gen_sparse_bernoulli(100, 100, 100, SparseModel::Count(50_000), 1).unwrap();
    assert_eq!(s.l0_norm(), 50_000);
}

#[test]
fn instances_repeat_for_equal_seeds() {
    let a = SyntheticInstance::generate((8, 7, 3), 2, SparseModel::Bernoulli(0.1), 77).unwrap();
    let b = SyntheticInstance::generate((8, 7, 3), 2, SparseModel::Bernoulli(0.1), 77).unwrap();
    assert_eq!(a.observed, b.observed);
    assert_eq!(a.sparse, b.sparse);
    assert_eq!(&a.low_rank + &a.sparse, a.observed);
    let c = SyntheticInstance::generate((8, 7, 3), 2, SparseModel::Bernoulli(0.1), 78).unwrap();
    assert_ne!(a.observed, c.observed);
}

#[test]
fn small_phase_grid_is_reproducible() {
    let exp = PhaseExperiment {
        n: 12,
        n3: 3,
        r_fracs: vec![0.1, 0.5],
        rho_ss: vec![0.02, 0.4],
        trials: 2,
        success_tol: 1e-3,
        seed: 11,
        solver: SolverConfig::default(),
    };
    let a = phase_grid(&exp).unwrap();
    let b = phase_grid(&exp).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.len(), 4);
    assert_eq!((a[1].r_frac, a[1].rho_s), (0.1, 0.4));
    assert_eq!((a[2].r_frac, a[2].rho_s), (0.5, 0.02));
    assert!(a.iter().all(|c| c.trials == 2 && c.successes <= 2));
    assert!(a[0].successes >= a[3].successes);
}

#[test]
fn phase_grid_rejects_empty_axes() {
    let exp = PhaseExperiment {
        n: 10,
        n3: 2,
        r_fracs: vec![],
        rho_ss: vec![0.1],
        trials: 1,
        success_tol: 1e-3,
        seed: 0,
        solver: SolverConfig::default(),
    };
    assert!(phase_grid(&exp).is_err());
}
