//! Seeded, counted random sources.
//!
//! Every harness draws from `ChaCha8Rng` keyed by a single declared seed;
//! independent trials use distinct stream counters so that ensembles are
//! replayable per-realization regardless of scheduling.

use ndarray::prelude::*;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::mat::{c, CMatrix};

/// Generator for trial number `stream` of the experiment keyed by `seed`.
pub fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Standard-normal scalar via Box-Muller; keeps the dependency surface small.
pub fn normal(rng: &mut ChaCha8Rng) -> f64 {
    let u1: f64 = rng.random_range(f64::MIN_POSITIVE..1.0);
    let u2: f64 = rng.random_range(0.0..1.0);
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

/// Dense complex Ginibre matrix (iid standard complex Gaussian entries).
pub fn random_complex(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> CMatrix {
    Array2::from_shape_fn((rows, cols), |_| {
        c(normal(rng), normal(rng)) * std::f64::consts::FRAC_1_SQRT_2
    })
}

/// Random real matrix with iid standard Gaussian entries.
pub fn random_real(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> CMatrix {
    Array2::from_shape_fn((rows, cols), |_| c(normal(rng), 0.0))
}

/// Random complex skew-symmetric matrix, `B^t = -B`.
pub fn random_skew_symmetric(rng: &mut ChaCha8Rng, n: usize) -> CMatrix {
    let g = random_complex(rng, n, n);
    let gt = g.t().to_owned();
    (&g - &gt).mapv(|z| 0.5 * z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mat::{diff_norm, transpose};

    #[test]
    fn streams_are_independent_and_replayable() {
        let a1 = random_complex(&mut rng_for(7, 0), 3, 3);
        let a2 = random_complex(&mut rng_for(7, 0), 3, 3);
        let b = random_complex(&mut rng_for(7, 1), 3, 3);
        assert_eq!(diff_norm(&a1, &a2), 0.0);
        assert!(diff_norm(&a1, &b) > 1e-3);
    }

    #[test]
    fn skew_is_skew() {
        let b = random_skew_symmetric(&mut rng_for(1, 0), 6);
        let bt = transpose(&b);
        let sum = &b + &bt;
        assert!(sum.iter().map(|z| z.norm()).fold(0.0, f64::max) < 1e-14);
    }
}
