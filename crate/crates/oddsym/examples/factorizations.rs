//! Odd and even symmetric factorizations with kernel control:
//! `T = I^* A^t I A` and `T = J A^t J A` with `rank(A) = rank(T)`.
//!
//! Run with `cargo run --release --example factorizations`.

use oddsym::factorization::{
    even_factorize, factorization_report, odd_factorize, rebuild_even, rebuild_odd,
    skew_canonical,
};
use oddsym::linalg::DEFAULT_REL_TOL;
use oddsym::mat::*;
use oddsym::rng::{random_complex, rng_for};
use oddsym::symmetry::{skew_correspondence, standard_even, standard_odd};

fn main() {
    // an 8-dim odd symmetric matrix with a planted 2-dim kernel
    let n = 8;
    let form = standard_odd(n).unwrap();
    let mut x = random_complex(&mut rng_for(1, 0), n, n);
    for i in 0..n {
        x[(i, 2)] = cr(0.0);
        x[(i, 6)] = cr(0.0);
    }
    let t = rebuild_odd(&x, &form);

    let b = skew_correspondence(&t, &form).unwrap();
    let canon = skew_canonical(&b, DEFAULT_REL_TOL).unwrap();
    println!(
        "skew canonical form of B = IT: rank {}, kernel {}, residual {:.2e}",
        2 * canon.m.nrows(),
        canon.kernel_dim,
        canon.residual
    );

    let a = odd_factorize(&t, &form, DEFAULT_REL_TOL).unwrap();
    let rep = factorization_report(&t, &a, &form, DEFAULT_REL_TOL).unwrap();
    println!(
        "odd factorization: residual {:.2e}, rank(T) = {}, rank(A) = {}, kernel {}",
        rep.residual, rep.rank_t, rep.rank_a, rep.kernel_dim
    );
    assert_eq!(rep.rank_t, rep.rank_a);

    // even symmetric case, 7-dim with rank 5
    let m = 7;
    let j = standard_even(m, 4).unwrap();
    let mut y = random_complex(&mut rng_for(1, 1), m, m);
    for i in 0..m {
        y[(i, 0)] = cr(0.0);
        y[(i, 3)] = cr(0.0);
    }
    let t_even = rebuild_even(&y, &j);
    let a_even = even_factorize(&t_even, &j, DEFAULT_REL_TOL).unwrap();
    let rep = factorization_report(&t_even, &a_even, &j, DEFAULT_REL_TOL).unwrap();
    println!(
        "even factorization: residual {:.2e}, rank(T) = {}, rank(A) = {}",
        rep.residual, rep.rank_t, rep.rank_a
    );
    assert_eq!(rep.rank_t, rep.rank_a);
}
