//! Compact stability of the ℤ₂-index: localized odd symmetric finite-rank
//! perturbations of a truncated Toeplitz operator never change the parity,
//! even at perturbation norms far above the operator scale.
//!
//! Run with `cargo run --release --example perturbation_stability [seed]`.

use oddsym::linalg::DEFAULT_REL_TOL;
use oddsym::mat::*;
use oddsym::rng::{random_complex, rng_for};
use oddsym::symmetry::odd_symmetrize;
use oddsym::toeplitz::{make_fn_loop, toeplitz_truncate};
use oddsym::z2::perturbation_stability_trial;

fn main() {
    let seed: u64 = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(0);
    let n_sites = 64;
    for n in 0..4i64 {
        let loop_ = make_fn_loop(n, 64).unwrap();
        let op = toeplitz_truncate(&loop_, n_sites).unwrap();
        let full = op.full_form();
        let dim = op.matrix.nrows();
        let cutoff_sites = n_sites / 4;
        let block_dim = 2 * cutoff_sites;
        let mut flips = 0;
        let trials = 10;
        for trial in 0..trials {
            // random odd symmetric K supported on the left quarter, норм 10
            let mut k = zeros(dim, dim);
            let block = random_complex(&mut rng_for(seed, (n as u64) * 100 + trial), block_dim, block_dim);
            for i in 0..block_dim {
                for j in 0..block_dim {
                    k[(i, j)] = block[(i, j)];
                }
            }
            let mut k = odd_symmetrize(&k, &full).unwrap();
            let scale = 10.0 / fro_norm(&k);
            k.mapv_inplace(|z| z * scale);
            let (before, after) = perturbation_stability_trial(&op, &k, DEFAULT_REL_TOL).unwrap();
            assert!(!before.unresolved && !after.unresolved);
            if before.ind2 != after.ind2 {
                flips += 1;
            }
        }
        println!(
            "T_f{n} ({n_sites} sites): ind2 = {}, {trials} perturbations of norm 10, {flips} parity flips",
            (n.rem_euclid(2))
        );
        assert_eq!(flips, 0);
    }
}
