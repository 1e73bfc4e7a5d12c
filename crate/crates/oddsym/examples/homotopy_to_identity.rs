//! The trivial component is connected: a sampled two-leg path from a
//! kernel-carrying odd symmetric matrix to the identity, staying odd
//! symmetric throughout and invertible on the second leg.
//!
//! Run with `cargo run --release --example homotopy_to_identity`.

use oddsym::linalg::DEFAULT_REL_TOL;
use oddsym::mat::*;
use oddsym::toeplitz::{make_fn_loop, toeplitz_truncate};
use oddsym::z2::homotopy_path_to_identity;

fn main() {
    // truncated T_{f_2} = S² ⊕ (S^t)² has a 4-dim kernel (Ind₂ = 0)
    let n_sites = 16;
    let loop_ = make_fn_loop(2, 64).unwrap();
    let op = toeplitz_truncate(&loop_, n_sites).unwrap();
    let form = op.full_form();

    let path = homotopy_path_to_identity(&op.matrix, &form, 64, DEFAULT_REL_TOL).unwrap();
    println!("samples: {} (leg boundary at {})", path.samples.len(), path.leg_boundary);
    println!("max odd-symmetry residual over samples: {:.2e}", path.max_symmetry_residual);
    println!("min sigma over leg 2: {:.4e}", path.min_sigma_leg2);
    println!("max consecutive step: {:.4}", path.max_step);

    let last = path.samples.last().unwrap();
    let dist = diff_norm(last, &identity(last.nrows()));
    println!("distance of final sample to identity: {:.2e}", dist);
    assert!(dist < 1e-8);
    assert!(path.min_sigma_leg2 > 0.0);
}
