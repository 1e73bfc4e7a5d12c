//! Quaternionic contrast: matrices with `I^* conj(T) I = T` have even
//! kernel and cokernel dimensions, certified by an explicit Kramers
//! pairing basis on both.
//!
//! Run with `cargo run --release --example quaternionic_contrast [seed]`.

use oddsym::linalg::DEFAULT_REL_TOL;
use oddsym::mat::*;
use oddsym::rng::{random_complex, rng_for};
use oddsym::symmetry::{quaternionic_symmetrize, standard_odd};
use oddsym::z2::quaternionic_index_check;

fn main() {
    let seed: u64 = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(0);
    let n = 8;
    let form = standard_odd(n).unwrap();
    let trials = 25;
    for trial in 0..trials {
        // rank-deficient quaternionic: invertible quaternionic factors
        // around a Kramers-pair-compatible diagonal with two zeros
        let shift = identity(n).mapv(|z| z * cr(3.0));
        let q1 = {
            let r = random_complex(&mut rng_for(seed, 2 * trial), n, n);
            &quaternionic_symmetrize(&r, &form).unwrap() + &shift
        };
        let q2 = {
            let r = random_complex(&mut rng_for(seed, 2 * trial + 1), n, n);
            &quaternionic_symmetrize(&r, &form).unwrap() + &shift
        };
        let mut d = identity(n);
        d[(0, 0)] = cr(0.0);
        d[(n / 2, n / 2)] = cr(0.0);
        let t = mul3(&q1, &d, &q2);
        let rep = quaternionic_index_check(&t, &form, DEFAULT_REL_TOL).unwrap();
        assert!(rep.kernel_even && rep.pairing_succeeded, "trial {trial}: {rep:?}");
        if trial < 4 {
            println!(
                "trial {trial}: dim Ker = {}, dim Ker(T^*) = {}, pairing ok = {}",
                rep.kernel_dim, rep.cokernel_dim, rep.pairing_succeeded
            );
        }
    }
    println!("kernel evenness and Kramers pairing held in all {trials} trials");
}
