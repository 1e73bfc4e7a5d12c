//! Bloch decomposition of clean torus models and the lattice gauge-field
//! plaquette (momentum-space curvature) Chern oracle.

use std::f64::consts::PI;

use crate::error::{OddsymError, Result};
use crate::linalg::eigh;
use crate::mat::*;

use super::model::LatticeModel;

/// Occupied (or sector) frames over a uniform Brillouin grid: `frames[i][j]`
/// is a (fiber_dim × n) orthonormal frame at `k = 2π(i/nk, j/nk)`.
pub struct BlochFrames {
    pub nk: usize,
    pub frames: Vec<Vec<CMatrix>>,
}

/// Bloch fiber Hamiltonian at reduced momentum `k = (kx, ky)`:
/// `H(k) = Σ_bonds amp · e^{i k · Δcell}` assembled from the same bond
/// table as the real-space Hamiltonian.
pub fn bloch_hamiltonian(model: &LatticeModel, kx: f64, ky: f64) -> CMatrix {
    let mut h = zeros(4, 4);
    for b in &model.bonds {
        let phase = C64::from_polar(1.0, kx * b.dx as f64 + ky * b.dy as f64);
        h[(b.row, b.col)] += b.amp * phase;
    }
    hermitize(&h)
}

fn require_clean_torus(model: &LatticeModel) -> Result<()> {
    if model.params.disorder_w != 0.0 {
        return Err(OddsymError::contract(
            "Bloch decomposition requires a clean model (disorder_w = 0)",
        ));
    }
    if model.params.boundary != super::model::BoundaryCondition::Torus {
        return Err(OddsymError::contract("Bloch decomposition requires torus boundary"));
    }
    Ok(())
}

/// Occupied eigenframes of `H(k)` below `e_f` over an `nk × nk` grid.
pub fn occupied_frames(model: &LatticeModel, e_f: f64, nk: usize) -> Result<BlochFrames> {
    require_clean_torus(model)?;
    let mut frames = Vec::with_capacity(nk);
    let mut n_occ_ref = None;
    for i in 0..nk {
        let mut row = Vec::with_capacity(nk);
        for j in 0..nk {
            let kx = 2.0 * PI * i as f64 / nk as f64;
            let ky = 2.0 * PI * j as f64 / nk as f64;
            let h = bloch_hamiltonian(model, kx, ky);
            let (evals, evecs) = eigh(&h)?;
            let occ: Vec<usize> = (0..evals.len()).filter(|&a| evals[a] <= e_f).collect();
            let min_gap = evals.iter().map(|&e| (e - e_f).abs()).fold(f64::INFINITY, f64::min);
            if min_gap < 1e-10 {
                return Err(OddsymError::unresolved(format!(
                    "occupied_frames: band touches E_F at k-grid point ({i}, {j})"
                )));
            }
            match n_occ_ref {
                None => n_occ_ref = Some(occ.len()),
                Some(n) if n != occ.len() => {
                    return Err(OddsymError::unresolved(
                        "occupied_frames: occupied count varies over the grid; gap closed",
                    ))
                }
                _ => {}
            }
            row.push(gather_cols(&evecs, &occ));
        }
        frames.push(row);
    }
    Ok(BlochFrames { nk, frames })
}

/// Riesz (spin) sector frames: the occupied frame at each `k` is split by
/// the sign of the compressed spin operator `Ψ^* S Ψ`.
pub fn spin_sector_frames(
    model: &LatticeModel,
    e_f: f64,
    s_fiber: &CMatrix,
    nk: usize,
) -> Result<(BlochFrames, BlochFrames, f64)> {
    let occ = occupied_frames(model, e_f, nk)?;
    let mut plus = Vec::with_capacity(nk);
    let mut minus = Vec::with_capacity(nk);
    let mut min_gap = f64::INFINITY;
    let mut n_plus_ref = None;
    for i in 0..nk {
        let mut prow = Vec::with_capacity(nk);
        let mut mrow = Vec::with_capacity(nk);
        for j in 0..nk {
            let frame = &occ.frames[i][j];
            let comp = mul3(&adjoint(frame), s_fiber, frame);
            let (w, v) = eigh(&comp)?;
            let gap_here = w.iter().map(|&x| x.abs()).fold(f64::INFINITY, f64::min);
            min_gap = min_gap.min(gap_here);
            if gap_here < 1e-10 {
                return Err(OddsymError::NoSpinSplit(format!(
                    "PSP spectrum touches zero at k-grid point ({i}, {j})"
                )));
            }
            let pidx: Vec<usize> = (0..w.len()).filter(|&a| w[a] > 0.0).collect();
            let midx: Vec<usize> = (0..w.len()).filter(|&a| w[a] < 0.0).collect();
            match n_plus_ref {
                None => n_plus_ref = Some(pidx.len()),
                Some(n) if n != pidx.len() => {
                    return Err(OddsymError::NoSpinSplit(
                        "sector rank varies over the Brillouin grid".into(),
                    ))
                }
                _ => {}
            }
            prow.push(frame.dot(&gather_cols(&v, &pidx)));
            mrow.push(frame.dot(&gather_cols(&v, &midx)));
        }
        plus.push(prow);
        minus.push(mrow);
    }
    Ok((
        BlochFrames { nk, frames: plus },
        BlochFrames { nk, frames: minus },
        min_gap,
    ))
}

/// Plaquette (lattice gauge field) Chern number of a frame family:
/// link variables `U_μ(k) = det(F(k)^* F(k + μ̂))`, plaquette fluxes folded
/// to `(−π, π]`, summed and divided by 2π. Gauge invariant and integer for
/// any frame choice once the grid resolves the curvature.
pub fn chern_plaquette(frames: &BlochFrames) -> Result<i64> {
    let nk = frames.nk;
    let link = |a: &CMatrix, b: &CMatrix| -> Result<C64> {
        let ov = adjoint(a).dot(b);
        let d = det_small(&ov);
        if d.norm() < 1e-12 {
            return Err(OddsymError::unresolved(
                "chern_plaquette: singular link variable; refine the k-grid",
            ));
        }
        Ok(d / d.norm())
    };
    let mut total = 0.0;
    for i in 0..nk {
        for j in 0..nk {
            let ip = (i + 1) % nk;
            let jp = (j + 1) % nk;
            let u1 = link(&frames.frames[i][j], &frames.frames[ip][j])?;
            let u2 = link(&frames.frames[ip][j], &frames.frames[ip][jp])?;
            let u3 = link(&frames.frames[ip][jp], &frames.frames[i][jp])?;
            let u4 = link(&frames.frames[i][jp], &frames.frames[i][j])?;
            let flux = (u1 * u2 * u3 * u4).arg();
            total += flux;
        }
    }
    let c = total / (2.0 * PI);
    let rounded = c.round();
    if (c - rounded).abs() > 1e-6 {
        return Err(OddsymError::unresolved(format!(
            "chern_plaquette: flux sum {c:.6} is not integral; refine the k-grid"
        )));
    }
    Ok(rounded as i64)
}

fn det_small(m: &CMatrix) -> C64 {
    let n = m.nrows();
    match n {
        0 => cr(1.0),
        1 => m[(0, 0)],
        2 => m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)],
        _ => {
            // LU with partial pivoting on a copy
            let mut a = m.clone();
            let mut det = cr(1.0);
            for k in 0..n {
                let mut piv = k;
                let mut best = a[(k, k)].norm();
                for i in k + 1..n {
                    if a[(i, k)].norm() > best {
                        best = a[(i, k)].norm();
                        piv = i;
                    }
                }
                if best == 0.0 {
                    return cr(0.0);
                }
                if piv != k {
                    for col in 0..n {
                        a.swap((k, col), (piv, col));
                    }
                    det = -det;
                }
                det *= a[(k, k)];
                for i in k + 1..n {
                    let factor = a[(i, k)] / a[(k, k)];
                    for col in k..n {
                        let sub = factor * a[(k, col)];
                        a[(i, col)] -= sub;
                    }
                }
            }
            det
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::insulator::model::{build_kane_mele, KaneMeleParams};

    fn torus_params(lambda_so: f64, lambda_v: f64) -> KaneMeleParams {
        KaneMeleParams {
            lx: 4,
            ly: 4,
            t_hop: 1.0,
            lambda_so,
            lambda_r: 0.0,
            lambda_v,
            disorder_w: 0.0,
            seed: 0,
            boundary: super::super::model::BoundaryCondition::Torus,
        }
    }

    #[test]
    fn bloch_matches_realspace_spectrum() {
        // torus eigenvalues = union of Bloch eigenvalues on the cell grid
        let p = torus_params(0.06, 0.1);
        let m = build_kane_mele(p).unwrap();
        let (real_evals, _) = eigh(&m.hamiltonian).unwrap();
        let mut bloch_evals = Vec::new();
        for i in 0..p.lx {
            for j in 0..p.ly {
                let kx = 2.0 * PI * i as f64 / p.lx as f64;
                let ky = 2.0 * PI * j as f64 / p.ly as f64;
                let h = bloch_hamiltonian(&m, kx, ky);
                let (w, _) = eigh(&h).unwrap();
                bloch_evals.extend(w);
            }
        }
        bloch_evals.sort_by(f64::total_cmp);
        let mut rs = real_evals.clone();
        rs.sort_by(f64::total_cmp);
        for (a, b) in rs.iter().zip(bloch_evals.iter()) {
            assert!((a - b).abs() < 1e-9, "spectra differ: {a} vs {b}");
        }
    }

    #[test]
    fn haldane_sector_chern_is_one() {
        // at λ_r = 0 the spin-up block is a Haldane-type model; in the
        // topological regime its occupied band carries |C| = 1
        let p = torus_params(0.06, 0.1);
        let m = build_kane_mele(p).unwrap();
        let s_f = super::super::model::spin_z_fiber();
        let (fp, fm, gap) = spin_sector_frames(&m, 0.0, &s_f, 24).unwrap();
        let (cp, cm) = (chern_plaquette(&fp).unwrap(), chern_plaquette(&fm).unwrap());
        assert_eq!(cp.abs(), 1, "plus sector");
        assert_eq!(cm, -cp, "sectors must cancel");
        assert!(gap > 0.4, "psp gap {gap}");
    }

    #[test]
    fn trivial_phase_zero_chern() {
        let p = torus_params(0.06, 0.6);
        let m = build_kane_mele(p).unwrap();
        let s_f = super::super::model::spin_z_fiber();
        let (fp, fm, _) = spin_sector_frames(&m, 0.0, &s_f, 24).unwrap();
        let (cp, cm) = (chern_plaquette(&fp).unwrap(), chern_plaquette(&fm).unwrap());
        assert_eq!((cp, cm), (0, 0));
    }

    #[test]
    fn full_band_chern_zero() {
        // the sum over all bands is the trivial bundle
        let p = torus_params(0.06, 0.1);
        let m = build_kane_mele(p).unwrap();
        let frames = occupied_frames(&m, 100.0, 12).unwrap();
        assert_eq!(chern_plaquette(&frames).unwrap(), 0);
    }

    #[test]
    fn chern_stable_under_grid_refinement() {
        let p = torus_params(0.06, 0.1);
        let m = build_kane_mele(p).unwrap();
        let s_f = super::super::model::spin_z_fiber();
        let mut vals = Vec::new();
        for nk in [12, 24] {
            let (fp, fm, _) = spin_sector_frames(&m, 0.0, &s_f, nk).unwrap();
            vals.push((chern_plaquette(&fp).unwrap(), chern_plaquette(&fm).unwrap()));
        }
        assert_eq!(vals[0], vals[1]);
    }
}
