//! The stabilizing partial isometry: for an odd symmetric matrix with even
//! kernel dimension, an odd symmetric partial isometry V onto the kernel
//! makes T + V invertible.
//!
//! Run with `cargo run --release --example completion_isometry`.

use oddsym::factorization::rebuild_odd;
use oddsym::linalg::{numerical_kernel, DEFAULT_REL_TOL};
use oddsym::mat::*;
use oddsym::rng::{random_complex, rng_for};
use oddsym::symmetry::standard_odd;
use oddsym::z2::completion_isometry;

fn main() {
    let n = 8;
    let form = standard_odd(n).unwrap();
    let mut x = random_complex(&mut rng_for(5, 0), n, n);
    for col in [0, 1, 4, 5] {
        for i in 0..n {
            x[(i, col)] = cr(0.0);
        }
    }
    let t = rebuild_odd(&x, &form);
    let kernel = numerical_kernel(&t, DEFAULT_REL_TOL).unwrap();
    println!("dim Ker(T) = {}", kernel.kernel_dim());

    let (v, cert) = completion_isometry(&t, &form, DEFAULT_REL_TOL).unwrap();
    println!(
        "completion certificates: odd symmetry residual {:.2e}, isometry residual {:.2e}",
        cert.odd_symmetry_residual, cert.isometry_residual
    );
    println!("sigma_min(T + V) = {:.4e}", cert.sigma_min_completed);
    assert!(cert.sigma_min_completed > 1e-6);

    // V^*V projects exactly onto the kernel
    let proj = adjoint(&v).dot(&v);
    let target = kernel.kernel_basis.dot(&adjoint(&kernel.kernel_basis));
    println!("projection residual {:.2e}", diff_norm(&proj, &target));
}
