//! Kramers degeneracy of odd symmetric matrices: every eigenvalue cluster
//! and every singular value carries even multiplicity.
//!
//! Run with `cargo run --release --example kramers_degeneracy [seed]`.

use oddsym::factorization::{eigenvalue_cluster_sizes, singular_value_cluster_sizes};
use oddsym::rng::{random_complex, rng_for};
use oddsym::symmetry::{odd_symmetrize, standard_odd};

fn main() {
    let seed: u64 = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(0);
    let trials = 60;
    let mut checked = 0usize;
    for trial in 0..trials {
        let n = 2 * (1 + trial % 8);
        let form = standard_odd(n).unwrap();
        let raw = random_complex(&mut rng_for(seed, trial as u64), n, n);
        let t = odd_symmetrize(&raw, &form).unwrap();
        let eig_sizes = eigenvalue_cluster_sizes(&t, 1e-6).unwrap();
        let sv_sizes = singular_value_cluster_sizes(&t, 1e-6).unwrap();
        for &s in eig_sizes.iter().chain(sv_sizes.iter()) {
            assert_eq!(s % 2, 0, "odd multiplicity at n={n}, trial {trial}");
            checked += 1;
        }
        if trial < 3 {
            println!(
                "n = {n:2}: eigenvalue cluster sizes {:?}, singular clusters {:?}",
                eig_sizes, sv_sizes
            );
        }
    }
    println!("all {checked} multiplicities even across {trials} random odd symmetric matrices");
}
