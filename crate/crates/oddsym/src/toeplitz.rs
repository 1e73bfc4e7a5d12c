//! The odd ℤ₂ Gohberg-Krein machinery: unitary symbol loops with the
//! reflection symmetry `I^* f(conj z) I = f(z)^t`, the classical winding
//! number and the ℤ₂ invariant via eigenphase spectral flow, block Toeplitz
//! truncation, and the equality `Wind₂(f) = Ind₂(T_f)`.
//!
//! Loops are sampled on a uniform grid `t_k = −π + 2πk/n`, stored with both
//! endpoints so the pairing `t ↔ −t` is exact on the grid. Fourier
//! coefficients are taken with the convention that makes `z ↦ diag(z, z̄)`
//! truncate to `S ⊕ S^t` with `S` the left shift.

#[cfg(test)]
use ndarray::prelude::*;
use std::f64::consts::PI;

use crate::error::{OddsymError, Result};
use crate::linalg::joint_eigh;
use crate::mat::*;
use crate::symmetry::{standard_odd, SymmetryForm};
use crate::z2::{ind2, Boundary, IndexReport, TruncatedOperator};

/// A sampled loop of unitary fiber matrices with optional odd symmetry.
#[derive(Debug, Clone)]
pub struct SymbolLoop {
    pub fiber_dim: usize,
    /// `n_samples + 1` grid points `−π = t_0 < … < t_n = π`.
    pub ts: Vec<f64>,
    /// Fiber matrix at each grid point; first and last coincide.
    pub samples: Vec<CMatrix>,
    /// Odd symmetry fiber form, when the loop declares one.
    pub fiber_form: Option<SymmetryForm>,
    /// Residual of the symmetry identity over all sample pairs.
    pub symmetry_residual: f64,
}

impl SymbolLoop {
    /// Validates unitarity of every sample, the grid layout, and (when a
    /// form is declared) the reflection symmetry at every pair `(t, −t)`.
    pub fn new(
        ts: Vec<f64>,
        samples: Vec<CMatrix>,
        fiber_form: Option<SymmetryForm>,
    ) -> Result<Self> {
        if ts.len() != samples.len() || ts.len() < 5 {
            return Err(OddsymError::contract(
                "symbol loop: need matching ts/samples with at least 5 points",
            ));
        }
        let n = ts.len() - 1;
        if n % 2 != 0 {
            return Err(OddsymError::contract("symbol loop: sample count must be even"));
        }
        for (k, &t) in ts.iter().enumerate() {
            let expect = -PI + 2.0 * PI * k as f64 / n as f64;
            if (t - expect).abs() > 1e-12 {
                return Err(OddsymError::contract(format!(
                    "symbol loop: grid point {k} is {t}, expected uniform value {expect}"
                )));
            }
        }
        let d = samples[0].nrows();
        for (k, f) in samples.iter().enumerate() {
            if f.nrows() != d || f.ncols() != d {
                return Err(OddsymError::contract("symbol loop: inconsistent fiber dims"));
            }
            let uu = f.dot(&adjoint(f));
            if diff_norm(&uu, &identity(d)) > 1e-10 * (d as f64) {
                return Err(OddsymError::contract(format!(
                    "symbol loop: sample {k} not unitary"
                )));
            }
        }
        if diff_norm(&samples[0], &samples[n]) > 1e-12 {
            return Err(OddsymError::contract(
                "symbol loop: endpoint samples at ±π must coincide",
            ));
        }
        let mut sym_res = 0.0f64;
        if let Some(form) = &fiber_form {
            if form.dim() != d {
                return Err(OddsymError::contract("symbol loop: form dimension mismatch"));
            }
            for k in 0..=n {
                let refl = &samples[n - k];
                let lhs = mul3(&form.adjoint_matrix(), refl, form.matrix());
                sym_res = sym_res.max(diff_norm(&lhs, &transpose(&samples[k])));
            }
            if sym_res > 1e-9 * (1.0 + (d as f64).sqrt()) {
                return Err(OddsymError::contract(format!(
                    "symbol loop: odd symmetry residual {sym_res:.3e} exceeds 1e-9"
                )));
            }
        }
        Ok(SymbolLoop {
            fiber_dim: d,
            ts,
            samples,
            fiber_form,
            symmetry_residual: sym_res,
        })
    }

    pub fn n_segments(&self) -> usize {
        self.ts.len() - 1
    }

    /// Index of the `t = 0` grid point.
    pub fn zero_index(&self) -> usize {
        self.n_segments() / 2
    }

    /// Builds a loop by evaluating `f` on the uniform grid.
    pub fn from_fn(
        n_samples: usize,
        fiber_form: Option<SymmetryForm>,
        f: impl Fn(f64) -> CMatrix,
    ) -> Result<Self> {
        let ts: Vec<f64> = (0..=n_samples)
            .map(|k| -PI + 2.0 * PI * k as f64 / n_samples as f64)
            .collect();
        let mut samples: Vec<CMatrix> = ts.iter().map(|&t| f(t)).collect();
        // enforce exact endpoint closure
        let first = samples[0].clone();
        *samples.last_mut().unwrap() = first;
        SymbolLoop::new(ts, samples, fiber_form)
    }
}

/// The paradigm family `f_m(z) = diag(z^m, z̄^m)` on the 2-dim fiber.
pub fn make_fn_loop(m: i64, n_samples: usize) -> Result<SymbolLoop> {
    if n_samples < 4 * m.unsigned_abs() as usize || n_samples < 8 {
        return Err(OddsymError::contract(format!(
            "make_fn_loop: {n_samples} samples cannot band a degree-{m} symbol"
        )));
    }
    let form = standard_odd(2)?;
    SymbolLoop::from_fn(n_samples, Some(form), |t| {
        let mut f = zeros(2, 2);
        f[(0, 0)] = C64::from_polar(1.0, m as f64 * t);
        f[(1, 1)] = C64::from_polar(1.0, -(m as f64) * t);
        f
    })
}

/// One signed passage of an eigenphase trajectory through the reference.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct Crossing {
    pub t: f64,
    pub direction: i8,
}

/// Spectral-flow analysis of a loop at a chosen reference phase.
#[derive(Debug, Clone, serde::Serialize)]
pub struct WindingReport {
    /// Signed crossing count over the full circle.
    pub wind: i64,
    /// Crossing-count parity over `t ∈ [0, π)`.
    pub wind2: u8,
    pub reference_phase: f64,
    /// Crossings over the full circle, in trajectory order.
    pub crossings: Vec<Crossing>,
    /// Crossings restricted to `t ∈ [0, π)`.
    pub half_circle_crossings: usize,
    /// Minimal circular gap from the reference to the spectra at t = 0, π.
    pub min_gap_to_reference: f64,
    /// Even multiplicity of every eigenvalue cluster of f(1) and f(−1).
    pub kramers_even_at_real_points: bool,
    /// Whether the loop declared (and passed) the odd symmetry.
    pub odd_symmetric: bool,
}

/// Eigenphases and eigenvectors of a unitary via the commuting Hermitian
/// split; orthonormal vectors survive Kramers degeneracies.
fn unitary_eigendata(f: &CMatrix) -> Result<(Vec<f64>, CMatrix)> {
    let g = hermitize(&(f + &adjoint(f)).mapv(|z| 0.5 * z));
    let h = hermitize(&(f - &adjoint(f)).mapv(|z| z * c(0.0, -0.5)));
    let (pairs, q) = joint_eigh(&g, &h, 1e-10)?;
    let phases = pairs.iter().map(|&(re, im)| im.atan2(re)).collect();
    Ok((phases, q))
}

fn circular_distance(a: f64, b: f64) -> f64 {
    let mut d = (a - b).rem_euclid(2.0 * PI);
    if d > PI {
        d = 2.0 * PI - d;
    }
    d
}

/// Eigenphase tracks continued through eigenvector-overlap matching.
/// Returns one phase per track per grid point.
pub fn eigenphase_tracks(loop_: &SymbolLoop) -> Result<Vec<Vec<f64>>> {
    let d = loop_.fiber_dim;
    let n = loop_.n_segments();
    let (mut phases, mut vecs) = unitary_eigendata(&loop_.samples[0])?;
    let mut tracks: Vec<Vec<f64>> = (0..d).map(|i| vec![phases[i]]).collect();
    for k in 1..=n {
        let (ph_next, v_next) = unitary_eigendata(&loop_.samples[k])?;
        // greedy best-overlap assignment prev track -> next eigenvector
        let overlap = adjoint(&vecs).dot(&v_next);
        let mut entries: Vec<(f64, usize, usize)> = Vec::with_capacity(d * d);
        for i in 0..d {
            for j in 0..d {
                entries.push((overlap[(i, j)].norm(), i, j));
            }
        }
        entries.sort_by(|a, b| b.0.total_cmp(&a.0));
        let mut taken_i = vec![false; d];
        let mut taken_j = vec![false; d];
        let mut perm = vec![0usize; d];
        for (_, i, j) in entries {
            if !taken_i[i] && !taken_j[j] {
                taken_i[i] = true;
                taken_j[j] = true;
                perm[i] = j;
            }
        }
        let mut new_phases = vec![0.0; d];
        let mut new_vecs = zeros(d, d);
        for i in 0..d {
            new_phases[i] = ph_next[perm[i]];
            new_vecs.column_mut(i).assign(&v_next.column(perm[i]));
        }
        for i in 0..d {
            tracks[i].push(new_phases[i]);
        }
        phases = new_phases;
        vecs = new_vecs;
        let _ = &phases;
    }
    Ok(tracks)
}

/// Deterministic reference-phase search: 64 candidates uniform in (0, 2π),
/// keep the one maximizing the minimal gap to the spectra at t = 0 and π.
fn choose_reference_phase(loop_: &SymbolLoop) -> Result<(f64, f64)> {
    let spectra: Vec<f64> = {
        let (p0, _) = unitary_eigendata(&loop_.samples[loop_.zero_index()])?;
        let (ppi, _) = unitary_eigendata(&loop_.samples[loop_.n_segments()])?;
        p0.into_iter().chain(ppi).collect()
    };
    let mut best = (0.0, -1.0);
    // the golden-ratio offset keeps candidates off the dyadic eigenphase
    // grids of polynomial symbols, so crossings never land on a candidate
    let offset = 0.381_966_011_250_105_1;
    for cand in 0..64 {
        let phi = 2.0 * PI * (cand as f64 + offset) / 64.0;
        let gap = spectra
            .iter()
            .map(|&th| circular_distance(phi, th))
            .fold(f64::INFINITY, f64::min);
        if gap > best.1 {
            best = (phi, gap);
        }
    }
    if best.1 < 1e-6 {
        return Err(OddsymError::unresolved(format!(
            "no reference phase clears the spectra at t ∈ {{0, π}} (best gap {:.3e}); \
             sample more densely",
            best.1
        )));
    }
    Ok(best)
}

fn kramers_certificate(loop_: &SymbolLoop) -> Result<bool> {
    let mut ok = true;
    for idx in [loop_.zero_index(), loop_.n_segments()] {
        let (phases, _) = unitary_eigendata(&loop_.samples[idx])?;
        let pts: Vec<C64> = phases.iter().map(|&th| C64::from_polar(1.0, th)).collect();
        for size in crate::factorization::cluster_complex(&pts, 1e-6) {
            if size % 2 != 0 {
                ok = false;
            }
        }
    }
    Ok(ok)
}

/// Core spectral-flow scan.
fn analyze(loop_: &SymbolLoop, require_symmetry: bool) -> Result<WindingReport> {
    let symmetric = loop_.fiber_form.is_some();
    if require_symmetry && !symmetric {
        return Err(OddsymError::contract(
            "wind2 requires a loop with declared odd symmetry",
        ));
    }
    let (phi, min_gap) = choose_reference_phase(loop_)?;
    let tracks = eigenphase_tracks(loop_)?;
    let n = loop_.n_segments();
    let zero = loop_.zero_index();
    let mut crossings = Vec::new();
    let mut wind: i64 = 0;
    let mut half_count = 0usize;
    for track in &tracks {
        for k in 0..n {
            let th = track[k];
            let th_next = track[k + 1];
            let mut delta = th_next - th;
            while delta > PI {
                delta -= 2.0 * PI;
            }
            while delta < -PI {
                delta += 2.0 * PI;
            }
            // does the arc from th to th+delta sweep the ray at φ?
            let ahead = {
                let mut d_ = (phi - th).rem_euclid(2.0 * PI);
                if d_ == 0.0 {
                    d_ = 2.0 * PI;
                }
                d_
            };
            let dir: i8 = if delta > 0.0 && ahead <= delta {
                1
            } else if delta < 0.0 && ahead >= 2.0 * PI + delta {
                -1
            } else {
                0
            };
            if dir != 0 {
                crossings.push(Crossing {
                    t: loop_.ts[k],
                    direction: dir,
                });
                wind += dir as i64;
                if k >= zero {
                    half_count += 1;
                }
            }
        }
    }
    let kramers = if symmetric {
        kramers_certificate(loop_)?
    } else {
        false
    };
    Ok(WindingReport {
        wind,
        wind2: (half_count % 2) as u8,
        reference_phase: phi,
        crossings,
        half_circle_crossings: half_count,
        min_gap_to_reference: min_gap,
        kramers_even_at_real_points: kramers,
        odd_symmetric: symmetric,
    })
}

/// Integer winding number of a unitary loop by spectral flow; odd symmetric
/// loops must come out with `wind = 0`.
pub fn winding_number(loop_: &SymbolLoop) -> Result<WindingReport> {
    let report = analyze(loop_, false)?;
    if loop_.fiber_form.is_some() && report.wind != 0 {
        return Err(OddsymError::unresolved(format!(
            "odd symmetric loop scanned to nonzero winding {}; sampling too coarse",
            report.wind
        )));
    }
    Ok(report)
}

/// ℤ₂ invariant: crossing-count parity of the half circle `t ∈ [0, π)`.
pub fn wind2(loop_: &SymbolLoop) -> Result<WindingReport> {
    analyze(loop_, true)
}

/// Block Fourier coefficients of the sampled loop,
/// `f̂_k = (1/n) Σ_j f(t_j) e^{i k t_j}`, exact for trigonometric
/// polynomials of degree < n/2.
pub fn fourier_blocks(loop_: &SymbolLoop, k_max: usize) -> Vec<CMatrix> {
    let n = loop_.n_segments();
    let d = loop_.fiber_dim;
    let mut out = Vec::with_capacity(2 * k_max + 1);
    for k in -(k_max as i64)..=(k_max as i64) {
        let mut acc = zeros(d, d);
        for j in 0..n {
            let phase = C64::from_polar(1.0, k as f64 * loop_.ts[j]);
            acc = &acc + &loop_.samples[j].mapv(|z| z * phase);
        }
        out.push(acc.mapv(|z| z / cr(n as f64)));
    }
    out
}

/// Truncated block-Toeplitz matrix of the loop on `n_sites` sites, with
/// the fiberwise symmetry form attached; the banding condition requires
/// the symbol to be a trigonometric polynomial of degree ≤ n_samples/4.
pub fn toeplitz_truncate(loop_: &SymbolLoop, n_sites: usize) -> Result<TruncatedOperator> {
    let form = loop_.fiber_form.clone().ok_or_else(|| {
        OddsymError::contract("toeplitz_truncate requires a loop with a declared odd symmetry")
    })?;
    let n = loop_.n_segments();
    let d = loop_.fiber_dim;
    let k_max = n / 2;
    let blocks = fourier_blocks(loop_, k_max);
    let norm_of = |m: &CMatrix| fro_norm(m);
    let max_block = blocks.iter().map(norm_of).fold(0.0, f64::max);
    // decay check: exact banding within degree n/4
    let mut band = 0usize;
    for (idx, b) in blocks.iter().enumerate() {
        let k = idx as i64 - k_max as i64;
        if norm_of(b) > 1e-10 * max_block.max(1.0) {
            let kk = k.unsigned_abs() as usize;
            if kk > n / 4 {
                return Err(OddsymError::contract(format!(
                    "toeplitz_truncate: Fourier block at offset {k} has norm {:.3e}; \
                     the loop is not a trigonometric polynomial of degree ≤ {}",
                    norm_of(b),
                    n / 4
                )));
            }
            band = band.max(kk);
        }
    }
    let mut m = zeros(d * n_sites, d * n_sites);
    for j in 0..n_sites {
        for l in 0..n_sites {
            let off = j as i64 - l as i64;
            if off.unsigned_abs() as usize > band {
                continue;
            }
            let blk = &blocks[(off + k_max as i64) as usize];
            for a in 0..d {
                for b in 0..d {
                    m[(j * d + a, l * d + b)] = blk[(a, b)];
                }
            }
        }
    }
    let op = TruncatedOperator::new(m, d, n_sites, Boundary::HalfInfiniteLeft, form)?;
    // certify the inherited odd symmetry of the compression
    let full = op.full_form();
    let check = crate::symmetry::is_odd_symmetric(&op.matrix, &full, 1e-8)?;
    if !check.holds {
        return Err(OddsymError::unresolved(format!(
            "toeplitz_truncate: compression broke the symmetry (residual {:.3e})",
            check.residual
        )));
    }
    Ok(op)
}

/// Both sides of the ℤ₂ Gohberg-Krein equality with diagnostics.
#[derive(Debug, Clone, serde::Serialize)]
pub struct GkReport {
    pub winding: WindingReport,
    pub index: IndexReport,
    pub equal: bool,
}

/// Computes `Wind₂(f)` and `Ind₂(T_f)` and reports the verdict.
pub fn verify_gk(loop_: &SymbolLoop, n_sites: usize, rel_tol: f64) -> Result<GkReport> {
    let winding = wind2(loop_)?;
    let op = toeplitz_truncate(loop_, n_sites)?;
    let index = ind2(&op, rel_tol)?;
    let equal = !index.unresolved && winding.wind2 == index.ind2;
    Ok(GkReport {
        winding,
        index,
        equal,
    })
}

/// The loop involution `Θ(g)(z) = I^* g(z̄)^t I`; fixed points are the
/// loops with the reflection symmetry. Anti-multiplicative and involutive.
fn theta_constant(u: &CMatrix, form: &SymmetryForm) -> CMatrix {
    mul3(&form.adjoint_matrix(), &transpose(u), form.matrix())
}

/// Random exactly-banded odd-symmetric loop in the homotopy class
/// `parity`: a palindrome `u₁ d₁ u₂ d₂ Θ(u₂) d₁ Θ(u₁)` of random constant
/// unitaries `u_i` and diagonal phase loops
/// `d(t) = e^{iα} diag(e^{imt}, e^{−imt})`. The whole word is a
/// trigonometric polynomial of degree `2 m₁ + m₂` and its class is
/// `m₂ mod 2`, because contracting the constants is a symmetric homotopy.
pub fn random_symmetric_loop(
    seed: u64,
    stream: u64,
    parity: u8,
    n_samples: usize,
) -> Result<SymbolLoop> {
    let form = standard_odd(2)?;
    let mut rng = crate::rng::rng_for(seed, stream);
    let random_unitary = |rng: &mut rand_chacha::ChaCha8Rng| -> Result<CMatrix> {
        let g = crate::rng::random_complex(rng, 2, 2);
        let dec = crate::linalg::svd(&g)?;
        Ok(dec.u.dot(&dec.vh))
    };
    use rand::Rng;
    let m1: i64 = rng.random_range(0..=2);
    let m2: i64 = 2 * rng.random_range(-1..=1) + parity as i64;
    let alpha1: f64 = rng.random_range(0.0..2.0 * PI);
    let alpha2: f64 = rng.random_range(0.0..2.0 * PI);
    let u1 = random_unitary(&mut rng)?;
    let u2 = random_unitary(&mut rng)?;
    let tu1 = theta_constant(&u1, &form);
    let tu2 = theta_constant(&u2, &form);
    let degree = 2 * m1.unsigned_abs() + m2.unsigned_abs();
    if n_samples < 4 * degree.max(1) as usize {
        return Err(OddsymError::contract(format!(
            "random_symmetric_loop: {n_samples} samples cannot band degree {degree}"
        )));
    }
    let diag_loop = |m: i64, alpha: f64, t: f64| -> CMatrix {
        let mut d = zeros(2, 2);
        d[(0, 0)] = C64::from_polar(1.0, m as f64 * t + alpha);
        d[(1, 1)] = C64::from_polar(1.0, -(m as f64) * t + alpha);
        d
    };
    SymbolLoop::from_fn(n_samples, Some(form.clone()), |t| {
        let d1 = diag_loop(m1, alpha1, t);
        let d2 = diag_loop(m2, alpha2, t);
        u1.dot(&d1).dot(&u2).dot(&d2).dot(&tu2).dot(&d1).dot(&tu1)
    })
}

/// Perturbation of a loop as in the two-component picture: add a
/// Θ-symmetrized trigonometric polynomial and re-unitarize each sample by
/// its polar phase, which preserves the reflection symmetry exactly. The
/// result is only approximately banded (the phase of a polynomial is not a
/// polynomial), so pushing it through `toeplitz_truncate` needs a dense
/// sample grid and a wide truncation.
pub fn polar_phase_perturbation(
    base: &SymbolLoop,
    seed: u64,
    stream: u64,
    degree: usize,
    eps: f64,
) -> Result<SymbolLoop> {
    let form = base
        .fiber_form
        .clone()
        .ok_or_else(|| OddsymError::contract("perturbation needs a symmetric base loop"))?;
    let mut rng = crate::rng::rng_for(seed, stream);
    let d = base.fiber_dim;
    let coeffs: Vec<CMatrix> = (0..=2 * degree)
        .map(|_| crate::rng::random_complex(&mut rng, d, d))
        .collect();
    let n = base.n_segments();
    let eval_poly = |t: f64| -> CMatrix {
        let mut acc = zeros(d, d);
        for (idx, coeff) in coeffs.iter().enumerate() {
            let k = idx as i64 - degree as i64;
            let ph = C64::from_polar(1.0, k as f64 * t);
            acc = &acc + &coeff.mapv(|z| z * ph);
        }
        acc
    };
    let ts = base.ts.clone();
    let mut samples = Vec::with_capacity(n + 1);
    for j in 0..=n {
        let p_here = eval_poly(ts[j]);
        let p_refl = eval_poly(ts[n - j]);
        let theta = mul3(&form.adjoint_matrix(), &transpose(&p_refl), form.matrix());
        let sym = (&p_here + &theta).mapv(|z| 0.5 * z * cr(eps));
        let h = &base.samples[j] + &sym;
        let dec = crate::linalg::svd(&h)?;
        if dec.sigma.last().copied().unwrap_or(0.0) < 0.05 {
            return Err(OddsymError::unresolved(
                "polar_phase_perturbation: perturbed symbol nearly singular; lower eps",
            ));
        }
        samples.push(dec.u.dot(&dec.vh));
    }
    let first = samples[0].clone();
    *samples.last_mut().unwrap() = first;
    SymbolLoop::new(ts, samples, Some(form))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::DEFAULT_REL_TOL;
    use crate::z2::shift_left;

    #[test]
    fn fn_loop_values_and_symmetry() {
        let l0 = make_fn_loop(0, 16).unwrap();
        for s in &l0.samples {
            assert!(diff_norm(s, &identity(2)) < 1e-14);
        }
        let l1 = make_fn_loop(1, 16).unwrap();
        // at t = π/2 (index 12 of 16): diag(i, −i)
        let idx = 12;
        assert!((l1.ts[idx] - PI / 2.0).abs() < 1e-12);
        let expect = array![[c(0.0, 1.0), cr(0.0)], [cr(0.0), c(0.0, -1.0)]];
        assert!(diff_norm(&l1.samples[idx], &expect) < 1e-12);
        // symmetry residual is machine-zero for every n
        for m in 0..5 {
            let l = make_fn_loop(m, 64).unwrap();
            assert!(l.symmetry_residual < 1e-13, "m={m}");
        }
    }

    #[test]
    fn winding_of_fn_is_zero() {
        for m in [0, 1, 2, 3] {
            let l = make_fn_loop(m, 64).unwrap();
            let rep = winding_number(&l).unwrap();
            assert_eq!(rep.wind, 0, "m={m}");
            assert!(rep.min_gap_to_reference > 1e-3);
        }
    }

    #[test]
    fn winding_of_scalar_control_loop() {
        // z ↦ z·Id₁, no symmetry declared: winding 1
        let l = SymbolLoop::from_fn(32, None, |t| {
            let mut f = zeros(1, 1);
            f[(0, 0)] = C64::from_polar(1.0, t);
            f
        })
        .unwrap();
        let rep = winding_number(&l).unwrap();
        assert_eq!(rep.wind, 1);
    }

    #[test]
    fn wind2_of_fn_family() {
        for m in 0..5i64 {
            let l = make_fn_loop(m, 64).unwrap();
            let rep = wind2(&l).unwrap();
            assert_eq!(rep.wind2 as i64, m.rem_euclid(2), "m={m}");
            assert!(rep.kramers_even_at_real_points, "m={m}");
            assert_eq!(rep.wind, 0);
        }
    }

    #[test]
    fn wind2_gauge_invariance() {
        // conjugating the fiber by a fixed real orthogonal commuting with
        // the form leaves wind2 at 1
        let l1 = make_fn_loop(1, 64).unwrap();
        let theta = 0.6f64;
        let rot = array![
            [cr(theta.cos()), cr(-theta.sin())],
            [cr(theta.sin()), cr(theta.cos())]
        ];
        let conjugated = SymbolLoop::new(
            l1.ts.clone(),
            l1.samples
                .iter()
                .map(|f| mul3(&rot, f, &transpose(&rot)))
                .collect(),
            Some(standard_odd(2).unwrap()),
        )
        .unwrap();
        let rep = wind2(&conjugated).unwrap();
        assert_eq!(rep.wind2, 1);
    }

    #[test]
    fn wind2_independent_of_refinement() {
        for m in 0..4i64 {
            let a = wind2(&make_fn_loop(m, 64).unwrap()).unwrap();
            let b = wind2(&make_fn_loop(m, 128).unwrap()).unwrap();
            assert_eq!(a.wind2, b.wind2);
            assert_eq!(a.wind, b.wind);
        }
    }

    #[test]
    fn spectral_reflection_property() {
        let l = random_symmetric_loop(77, 0, 1, 64).unwrap();
        let n = l.n_segments();
        for k in 0..=n {
            let (mut ph_a, _) = unitary_eigendata(&l.samples[k]).unwrap();
            let (mut ph_b, _) = unitary_eigendata(&l.samples[n - k]).unwrap();
            ph_a.sort_by(f64::total_cmp);
            ph_b.sort_by(f64::total_cmp);
            for (x, y) in ph_a.iter().zip(ph_b.iter()) {
                assert!(circular_distance(*x, *y) < 1e-8, "spectra differ at k={k}");
            }
        }
    }

    #[test]
    fn toeplitz_f0_is_identity() {
        let l = make_fn_loop(0, 32).unwrap();
        let op = toeplitz_truncate(&l, 16).unwrap();
        assert!(diff_norm(&op.matrix, &identity(32)) < 1e-12);
    }

    #[test]
    fn toeplitz_f1_is_shift_pair() {
        let l = make_fn_loop(1, 32).unwrap();
        let n_sites = 16;
        let op = toeplitz_truncate(&l, n_sites).unwrap();
        let s = shift_left(n_sites);
        let st = transpose(&s);
        let mut expect = zeros(2 * n_sites, 2 * n_sites);
        for i in 0..n_sites {
            for j in 0..n_sites {
                expect[(2 * i, 2 * j)] = s[(i, j)];
                expect[(2 * i + 1, 2 * j + 1)] = st[(i, j)];
            }
        }
        assert!(diff_norm(&op.matrix, &expect) < 1e-12);
    }

    #[test]
    fn toeplitz_random_loop_banded_and_symmetric() {
        let l = random_symmetric_loop(78, 0, 1, 64).unwrap();
        let op = toeplitz_truncate(&l, 64).unwrap();
        assert!(op.block_bandwidth() <= 16);
        let full = op.full_form();
        let chk = crate::symmetry::is_odd_symmetric(&op.matrix, &full, 1e-8).unwrap();
        assert!(chk.holds, "residual {:.3e}", chk.residual);
    }

    #[test]
    fn gk_equality_fn_family() {
        for m in 0..5i64 {
            let l = make_fn_loop(m, 64).unwrap();
            let rep = verify_gk(&l, 64, DEFAULT_REL_TOL).unwrap();
            assert!(rep.equal, "m={m}: {:?} vs {:?}", rep.winding.wind2, rep.index.ind2);
            assert_eq!(rep.winding.wind2 as i64, m.rem_euclid(2));
        }
    }

    #[test]
    fn gk_equality_constant_loop() {
        let l = make_fn_loop(0, 32).unwrap();
        let rep = verify_gk(&l, 32, DEFAULT_REL_TOL).unwrap();
        assert!(rep.equal);
        assert_eq!(rep.winding.wind2, 0);
        assert_eq!(rep.index.ind2, 0);
    }

    #[test]
    fn gk_equality_random_loops() {
        for stream in 0..4 {
            for parity in 0..2u8 {
                let l = random_symmetric_loop(79, stream, parity, 64).unwrap();
                let rep = verify_gk(&l, 64, DEFAULT_REL_TOL).unwrap();
                assert!(rep.equal, "stream {stream} parity {parity}: {rep:?}");
                assert_eq!(rep.winding.wind2, parity);
            }
        }
    }

    #[test]
    fn gk_equality_polar_perturbed_f1() {
        // spec-style perturbation: symmetrize a small trigonometric
        // polynomial onto f₁ and re-unitarize by polar phase; only
        // approximately banded, so sample densely and truncate wide
        let base = make_fn_loop(1, 256).unwrap();
        let l = polar_phase_perturbation(&base, 81, 0, 3, 0.08).unwrap();
        let rep = verify_gk(&l, 200, DEFAULT_REL_TOL).unwrap();
        assert!(rep.equal, "{:?} vs {:?}", rep.winding.wind2, rep.index.ind2);
        assert_eq!(rep.winding.wind2, 1);
    }

    #[test]
    fn wind2_two_admissible_phases_agree() {
        // rerunning with a rotated candidate grid must give the same parity;
        // emulate by checking the fn family against the analytic value,
        // plus a direct second-phase scan on a random loop
        let l = random_symmetric_loop(80, 0, 0, 64).unwrap();
        let rep = wind2(&l).unwrap();
        // manual recount at a different admissible phase: rotate reference
        // by adding pi/3 if still admissible
        let tracks = eigenphase_tracks(&l).unwrap();
        let zero = l.zero_index();
        let n = l.n_segments();
        let phi2 = rep.reference_phase + PI / 3.0;
        let mut count = 0usize;
        for track in &tracks {
            for k in zero..n {
                let th = track[k];
                let mut delta = track[k + 1] - th;
                while delta > PI { delta -= 2.0 * PI; }
                while delta < -PI { delta += 2.0 * PI; }
                let mut ahead = (phi2 - th).rem_euclid(2.0 * PI);
                if ahead == 0.0 { ahead = 2.0 * PI; }
                if (delta > 0.0 && ahead <= delta) || (delta < 0.0 && ahead >= 2.0 * PI + delta) {
                    count += 1;
                }
            }
        }
        assert_eq!(rep.wind2 as usize, count % 2);
    }
}
