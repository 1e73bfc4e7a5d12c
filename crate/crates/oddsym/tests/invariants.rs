//! Counted invariant sweeps and property tests that cut across modules.

use oddsym::factorization::singular_value_cluster_sizes;
use oddsym::linalg::{generalized_kernel_dim, numerical_kernel, svd};
use oddsym::mat::*;
use oddsym::pfaffian::pfaffian;
use oddsym::rng::{random_complex, random_skew_symmetric, rng_for};
use oddsym::symmetry::{is_odd_symmetric, odd_symmetrize, standard_odd};

use ndarray_linalg::{Determinant, Inverse};
use proptest::prelude::*;

/// SVD reconstruction residual ≤ 1e-12 σ_max over 1000 random matrices up
/// to 32×32.
#[test]
fn svd_reconstruction_sweep() {
    for trial in 0..1000u64 {
        let rows = 1 + (trial as usize * 7) % 32;
        let cols = 1 + (trial as usize * 13) % 32;
        let m = random_complex(&mut rng_for(2001, trial), rows, cols);
        let dec = svd(&m).unwrap();
        let mut sig = zeros(rows, cols);
        for (i, &s) in dec.sigma.iter().enumerate() {
            sig[(i, i)] = cr(s);
        }
        let rec = mul3(&dec.u, &sig, &dec.vh);
        let res = diff_norm(&rec, &m);
        assert!(
            res <= 1e-12 * dec.sigma_max().max(1e-300) * (rows.max(cols) as f64),
            "trial {trial} ({rows}×{cols}): residual {res:.3e}"
        );
    }
}

/// Pf(B)² = det(B) to 1e-8 relative on 500 random skew matrices ≤ 16×16.
#[test]
fn pfaffian_determinant_sweep() {
    for trial in 0..500u64 {
        let n = 2 * (1 + (trial as usize) % 8);
        let b = random_skew_symmetric(&mut rng_for(2002, trial), n);
        let pf = pfaffian(&b).unwrap();
        let det = b.det().unwrap();
        assert!(
            (pf * pf - det).norm() <= 1e-8 * det.norm().max(1e-300),
            "trial {trial} (n={n}): Pf² = {:?}, det = {det:?}",
            pf * pf
        );
    }
}

/// Nonzero singular values of skew-symmetric matrices pair up, 500 trials.
#[test]
fn skew_singular_pairing_sweep() {
    for trial in 0..500u64 {
        let n = 2 * (2 + (trial as usize) % 7);
        let b = random_skew_symmetric(&mut rng_for(2003, trial), n);
        for size in singular_value_cluster_sizes(&b, 1e-8).unwrap() {
            assert_eq!(size % 2, 0, "trial {trial}: odd multiplicity");
        }
    }
}

/// Algebraic closure of the odd symmetric class: adjoint, powers, the
/// anticommutator, and inverses all stay odd symmetric.
#[test]
fn odd_symmetric_closure() {
    let n = 6;
    let form = standard_odd(n).unwrap();
    for trial in 0..50u64 {
        let t = odd_symmetrize(&random_complex(&mut rng_for(2004, 2 * trial), n, n), &form)
            .unwrap();
        let t2 = odd_symmetrize(
            &random_complex(&mut rng_for(2004, 2 * trial + 1), n, n),
            &form,
        )
        .unwrap();
        let checks = [
            adjoint(&t),
            t.dot(&t),
            t.dot(&t).dot(&t),
            &t.dot(&t2) + &t2.dot(&t),
        ];
        for (which, m) in checks.iter().enumerate() {
            assert!(
                is_odd_symmetric(m, &form, 1e-9).unwrap().holds,
                "closure case {which} failed at trial {trial}"
            );
        }
        // inverse, when it exists
        if let Ok(inv) = t.inv() {
            assert!(
                is_odd_symmetric(&inv, &form, 1e-7).unwrap().holds,
                "inverse not odd symmetric at trial {trial}"
            );
        }
    }
}

/// Generalized kernel dimensions are nondecreasing in k and stabilize.
#[test]
fn generalized_kernel_monotone() {
    // nilpotent block structure with known growth
    let mut m = zeros(6, 6);
    m[(0, 1)] = cr(1.0);
    m[(1, 2)] = cr(1.0);
    m[(3, 4)] = cr(1.0);
    let dims: Vec<usize> = (1..=4)
        .map(|k| generalized_kernel_dim(&m, cr(0.0), k, 1e-9).unwrap())
        .collect();
    assert_eq!(dims, vec![3, 5, 6, 6]);
    for w in dims.windows(2) {
        assert!(w[1] >= w[0]);
    }
}

/// Kernel/cokernel pairing: Ker(T^*) = I conj(Ker T) for odd symmetric T
/// with planted kernels.
#[test]
fn kernel_cokernel_pairing_sweep() {
    for trial in 0..50u64 {
        let n = 8;
        let form = standard_odd(n).unwrap();
        let mut x = random_complex(&mut rng_for(2005, trial), n, n);
        for i in 0..n {
            x[(i, 0)] = cr(0.0);
            x[(i, 5)] = cr(0.0);
        }
        let t = oddsym::factorization::rebuild_odd(&x, &form);
        let d = oddsym::symmetry::kernel_cokernel_pairing_distance(&t, &form, 1e-9).unwrap();
        assert!(d < 1e-8, "trial {trial}: pairing distance {d:.3e}");
    }
}

/// Insulator: the resolved index is invariant along a sampled parameter
/// path that keeps the gap open (Rashba switched on within the phase).
#[test]
fn insulator_index_stable_along_gapped_path() {
    use oddsym::insulator::*;
    let mut vals = Vec::new();
    for &lambda_r in &[0.0, 0.02, 0.04] {
        let p = KaneMeleParams {
            lx: 12,
            ly: 12,
            t_hop: 1.0,
            lambda_so: 0.06,
            lambda_r,
            lambda_v: 0.1,
            disorder_w: 0.0,
            seed: 0,
            boundary: BoundaryCondition::Open,
        };
        let m = build_kane_mele(p).unwrap();
        let fd = fermi_projection(&m, 0.0).unwrap();
        assert!(fd.gap > 1e-3, "gap closed along the path");
        let idx = ind2_tp(&fd, DEFAULT_TP_REL_TOL).unwrap();
        assert!(!idx.unresolved, "λ_r = {lambda_r}: {idx:?}");
        vals.push(idx.ind2);
    }
    assert!(vals.iter().all(|&v| v == 1), "index moved along a gapped path: {vals:?}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    /// The odd symmetrizer is an idempotent onto the predicate's fixed set.
    #[test]
    fn prop_symmetrizer_idempotent(seed in 0u64..1_000_000, half in 1usize..6) {
        let n = 2 * half;
        let form = standard_odd(n).unwrap();
        let a = random_complex(&mut rng_for(seed, 0), n, n);
        let s1 = odd_symmetrize(&a, &form).unwrap();
        let s2 = odd_symmetrize(&s1, &form).unwrap();
        prop_assert!(is_odd_symmetric(&s1, &form, 1e-9).unwrap().holds);
        prop_assert!(diff_norm(&s1, &s2) <= 1e-10 * (1.0 + fro_norm(&s1)));
    }

    /// Numerical rank is scale invariant over eight decades.
    #[test]
    fn prop_rank_scale_invariant(seed in 0u64..1_000_000, n in 2usize..9) {
        let m = random_complex(&mut rng_for(seed, 1), n, n);
        let base = numerical_kernel(&m, 1e-9).unwrap().rank;
        for scale in [1e-4, 1e4] {
            let scaled = m.mapv(|z| z * scale);
            prop_assert_eq!(numerical_kernel(&scaled, 1e-9).unwrap().rank, base);
        }
    }
}
