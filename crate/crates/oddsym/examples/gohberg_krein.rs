//! The ℤ₂ Gohberg-Krein equality: for odd symmetric unitary symbol loops,
//! the spectral-flow parity over the half circle equals the ℤ₂-index of
//! the truncated block Toeplitz operator.
//!
//! Run with `cargo run --release --example gohberg_krein`.

use oddsym::linalg::DEFAULT_REL_TOL;
use oddsym::toeplitz::{make_fn_loop, random_symmetric_loop, verify_gk};

fn main() {
    println!("paradigm family f_n(z) = diag(z^n, conj(z)^n), 64 truncation sites:");
    println!("  n | Wind2 | Ind2 | raw kernel | equal");
    for n in 0..5 {
        let l = make_fn_loop(n, 64).unwrap();
        let rep = verify_gk(&l, 64, DEFAULT_REL_TOL).unwrap();
        println!(
            " {n:2} |   {}   |  {}   |     {}      | {}",
            rep.winding.wind2, rep.index.ind2, rep.index.kernel_dim_raw, rep.equal
        );
        assert!(rep.equal);
    }

    println!("\nrandom banded odd-symmetric loops:");
    for stream in 0..6u64 {
        let parity = (stream % 2) as u8;
        let l = random_symmetric_loop(17, stream, parity, 64).unwrap();
        let rep = verify_gk(&l, 64, DEFAULT_REL_TOL).unwrap();
        println!(
            "  stream {stream}: Wind2 = {}, Ind2 = {}, reference gap {:.3}, equal {}",
            rep.winding.wind2, rep.index.ind2, rep.winding.min_gap_to_reference, rep.equal
        );
        assert!(rep.equal);
        assert_eq!(rep.winding.wind2, parity);
    }
}
