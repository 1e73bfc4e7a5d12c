//! Emit eigenphase tracks of a symbol loop as CSV for external plotting
//! (columns t, track, phase), plus the crossing data at the chosen
//! reference phase.
//!
//! Run with `cargo run --release --example winding_diagram [n] > tracks.csv`.

use oddsym::toeplitz::{eigenphase_tracks, make_fn_loop, wind2};

fn main() {
    let n: i64 = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(1);
    let loop_ = make_fn_loop(n, 128).unwrap();
    let report = wind2(&loop_).unwrap();
    eprintln!(
        "f_{n}: Wind2 = {}, reference phase {:.4}, {} crossings on the full circle",
        report.wind2,
        report.reference_phase,
        report.crossings.len()
    );
    for cr in &report.crossings {
        eprintln!("  crossing at t = {:+.4}, direction {:+}", cr.t, cr.direction);
    }
    let tracks = eigenphase_tracks(&loop_).unwrap();
    let mut buf = Vec::new();
    oddsym::io::write_crossings_csv(&mut buf, &loop_.ts, &tracks).unwrap();
    print!("{}", String::from_utf8(buf).unwrap());
}
