//! Kane-Mele tight-binding model on the honeycomb lattice: bond tables,
//! real-space Hamiltonian assembly on torus or open rectangles, disorder,
//! the time-reversal form, Fermi projections and the Dirac phase.

#[allow(unused_imports)]
use ndarray::prelude::*;
use rand::Rng;

use crate::error::{OddsymError, Result};
use crate::linalg::eigh;
use crate::mat::*;
use crate::symmetry::{is_odd_symmetric, FormKind, SymmetryForm};

/// Bravais vectors of the honeycomb lattice (lattice constant 1).
pub const A1: [f64; 2] = [1.0, 0.0];
pub const A2: [f64; 2] = [0.5, 0.866_025_403_784_438_6];

/// Real-space sublattice offsets; B sits at (a₁ + a₂)/3.
pub const DELTA_A: [f64; 2] = [0.0, 0.0];
pub const DELTA_B: [f64; 2] = [0.5, 0.288_675_134_594_812_9];

/// Square-ified (cell-index) coordinates used by the Dirac phase; the
/// fractional B offset keeps `X₁ + i X₂` off zero after the (½, ½) shift.
pub const SQ_DELTA_B: f64 = 1.0 / 3.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum BoundaryCondition {
    Torus,
    Open,
}

#[derive(Debug, Clone, Copy, serde::Serialize, serde::Deserialize)]
pub struct KaneMeleParams {
    pub lx: usize,
    pub ly: usize,
    pub t_hop: f64,
    pub lambda_so: f64,
    pub lambda_r: f64,
    pub lambda_v: f64,
    pub disorder_w: f64,
    pub seed: u64,
    pub boundary: BoundaryCondition,
}

impl Default for KaneMeleParams {
    fn default() -> Self {
        KaneMeleParams {
            lx: 8,
            ly: 8,
            t_hop: 1.0,
            lambda_so: 0.06,
            lambda_r: 0.0,
            lambda_v: 0.1,
            disorder_w: 0.0,
            seed: 0,
            boundary: BoundaryCondition::Torus,
        }
    }
}

/// One directed hopping entry: fiber block element between cells offset by
/// `(dx, dy)`, from fiber index `col` in the source cell to `row` in the
/// target cell.
#[derive(Debug, Clone, Copy)]
pub struct Bond {
    pub dx: i64,
    pub dy: i64,
    pub row: usize,
    pub col: usize,
    pub amp: C64,
}

/// A lattice model instance: Hamiltonian, time-reversal form, geometry.
#[derive(Debug, Clone)]
pub struct LatticeModel {
    pub params: KaneMeleParams,
    pub hamiltonian: CMatrix,
    /// Fiberwise time-reversal rotation extended over all sites.
    pub form: SymmetryForm,
    /// Translation-invariant bond table (fiber = sublattice ⊗ spin, dim 4).
    pub bonds: Vec<Bond>,
    /// Square-ified centered positions per orbital, as used by the Dirac phase.
    pub positions: Vec<[f64; 2]>,
    /// Onsite disorder values per (cell, sublattice) site.
    pub onsite_disorder: Vec<f64>,
    pub tr_residual: f64,
}

impl LatticeModel {
    pub fn dim(&self) -> usize {
        self.hamiltonian.nrows()
    }

    pub fn n_cells(&self) -> usize {
        self.params.lx * self.params.ly
    }
}

/// Fiber index: sublattice `a ∈ {0 = A, 1 = B}`, spin `s ∈ {0 = ↑, 1 = ↓}`.
pub fn fiber_index(sublattice: usize, spin: usize) -> usize {
    sublattice * 2 + spin
}

/// `s^z = σ^z/2` on the spin factor, extended over sublattice (4 × 4).
pub fn spin_z_fiber() -> CMatrix {
    let mut s = zeros(4, 4);
    for a in 0..2 {
        s[(fiber_index(a, 0), fiber_index(a, 0))] = cr(0.5);
        s[(fiber_index(a, 1), fiber_index(a, 1))] = cr(-0.5);
    }
    s
}

/// Spin rotation `e^{−iπ s^y} = [[0, −1], [1, 0]]` on each (site, sublattice),
/// i.e. the standard odd form in the (↑, ↓) basis.
fn time_reversal_fiber() -> CMatrix {
    let mut r = zeros(4, 4);
    for a in 0..2 {
        r[(fiber_index(a, 0), fiber_index(a, 1))] = cr(-1.0);
        r[(fiber_index(a, 1), fiber_index(a, 0))] = cr(1.0);
    }
    r
}

const PAULI_X: [[C64; 2]; 2] = [
    [C64::new(0.0, 0.0), C64::new(1.0, 0.0)],
    [C64::new(1.0, 0.0), C64::new(0.0, 0.0)],
];
const PAULI_Y: [[C64; 2]; 2] = [
    [C64::new(0.0, 0.0), C64::new(0.0, -1.0)],
    [C64::new(0.0, 1.0), C64::new(0.0, 0.0)],
];

fn real_position(dx: i64, dy: i64, sublattice: usize) -> [f64; 2] {
    let d = if sublattice == 0 { DELTA_A } else { DELTA_B };
    [
        dx as f64 * A1[0] + dy as f64 * A2[0] + d[0],
        dx as f64 * A1[1] + dy as f64 * A2[1] + d[1],
    ]
}

/// Nearest-neighbor bonds from an A site: B in cells (0,0), (−1,0), (0,−1).
const NN_CELLS: [[i64; 2]; 3] = [[0, 0], [-1, 0], [0, -1]];

/// Next-nearest displacements (A−A and B−B).
const NNN_CELLS: [[i64; 2]; 6] = [[1, 0], [-1, 0], [0, 1], [0, -1], [1, -1], [-1, 1]];

/// Chirality ν of the NNN hop `j → i` with cell displacement `v`, on
/// sublattice `a`: the sign of the cross product of the two NN bond legs
/// through the unique common neighbor.
fn nnn_chirality(v: [i64; 2], sublattice: usize) -> f64 {
    // find the common NN neighbor k of j = origin and i = origin + v
    let (from_cells, neighbor_sub): (&[[i64; 2]; 3], usize) = if sublattice == 0 {
        (&NN_CELLS, 1)
    } else {
        // B connects to A in cells (0,0), (1,0), (0,1)
        (&[[0, 0], [1, 0], [0, 1]], 0)
    };
    for jk in from_cells.iter() {
        for ik in from_cells.iter() {
            // k reached from j at cell jk; the same k reached from i means
            // i's offset to k is ik: origin + jk == v + ik
            if jk[0] == v[0] + ik[0] && jk[1] == v[1] + ik[1] {
                let rj = real_position(0, 0, sublattice);
                let rk = real_position(jk[0], jk[1], neighbor_sub);
                let ri = real_position(v[0], v[1], sublattice);
                let d1 = [rk[0] - rj[0], rk[1] - rj[1]];
                let d2 = [ri[0] - rk[0], ri[1] - rk[1]];
                let cross = d1[0] * d2[1] - d1[1] * d2[0];
                return if cross > 0.0 { 1.0 } else { -1.0 };
            }
        }
    }
    unreachable!("honeycomb NNN pair without a common neighbor");
}

/// Translation-invariant Kane-Mele bond table (both directions of every
/// bond, so the real-space and Bloch assemblies are Hermitian as written).
pub fn kane_mele_bonds(p: &KaneMeleParams) -> Vec<Bond> {
    let mut bonds = Vec::new();
    let mut push = |dx: i64, dy: i64, row: usize, col: usize, amp: C64| {
        if amp.norm() > 0.0 {
            bonds.push(Bond { dx, dy, row, col, amp });
        }
    };
    // nearest neighbor: t and Rashba, A(0) -> B(cell)
    for cell in NN_CELLS.iter() {
        let rb = real_position(cell[0], cell[1], 1);
        let ra = real_position(0, 0, 0);
        let bond = [rb[0] - ra[0], rb[1] - ra[1]];
        let len = (bond[0] * bond[0] + bond[1] * bond[1]).sqrt();
        let dhat = [bond[0] / len, bond[1] / len];
        for s in 0..2 {
            for sp in 0..2 {
                // hopping t, spin scalar: entry for B-site row, A-site col
                // (amplitude t, both directions)
                let mut amp = if s == sp { cr(p.t_hop) } else { cr(0.0) };
                // Rashba iλ_r (σ^x d_y − σ^y d_x), directed j=A -> i=B
                let rx = PAULI_X[s][sp];
                let ry = PAULI_Y[s][sp];
                amp += (rx * cr(dhat[1]) - ry * cr(dhat[0])) * c(0.0, p.lambda_r);
                // entry ⟨B cell, s | H | A origin, sp⟩ at displacement cell
                push(cell[0], cell[1], fiber_index(1, s), fiber_index(0, sp), amp);
                // Hermitian partner ⟨A, sp' | H | B, .⟩: conj transpose
                push(-cell[0], -cell[1], fiber_index(0, sp), fiber_index(1, s), amp.conj());
            }
        }
    }
    // next-nearest neighbor: intrinsic spin-orbit iλ_so ν σ^z
    for a in 0..2 {
        for v in NNN_CELLS.iter() {
            let nu = nnn_chirality(*v, a);
            for s in 0..2 {
                let sz = if s == 0 { 1.0 } else { -1.0 };
                let amp = c(0.0, p.lambda_so * nu * sz);
                push(v[0], v[1], fiber_index(a, s), fiber_index(a, s), amp);
            }
        }
    }
    // staggered sublattice potential, spin scalar
    for s in 0..2 {
        push(0, 0, fiber_index(0, s), fiber_index(0, s), cr(p.lambda_v));
        push(0, 0, fiber_index(1, s), fiber_index(1, s), cr(-p.lambda_v));
    }
    bonds
}

/// Builds the real-space Kane-Mele Hamiltonian with onsite Anderson
/// disorder (uniform in `[−w/2, w/2]`, scalar in spin) and certifies the
/// time-reversal identity `I_s^* H^t I_s = H`.
pub fn build_kane_mele(p: KaneMeleParams) -> Result<LatticeModel> {
    if p.lx < 4 || p.ly < 4 {
        return Err(OddsymError::contract("build_kane_mele: need Lx, Ly >= 4"));
    }
    let (lx, ly) = (p.lx as i64, p.ly as i64);
    let n_cells = p.lx * p.ly;
    let dim = 4 * n_cells;
    let bonds = kane_mele_bonds(&p);
    let cell_of = |x: i64, y: i64| -> Option<usize> {
        match p.boundary {
            BoundaryCondition::Torus => {
                Some((y.rem_euclid(ly) as usize) * p.lx + x.rem_euclid(lx) as usize)
            }
            BoundaryCondition::Open => {
                if x >= 0 && x < lx && y >= 0 && y < ly {
                    Some(y as usize * p.lx + x as usize)
                } else {
                    None
                }
            }
        }
    };
    let mut h = zeros(dim, dim);
    for y in 0..ly {
        for x in 0..lx {
            let src = cell_of(x, y).unwrap();
            for b in &bonds {
                if let Some(dst) = cell_of(x + b.dx, y + b.dy) {
                    h[(4 * dst + b.row, 4 * src + b.col)] += b.amp;
                }
            }
        }
    }
    // onsite Anderson disorder, one value per (cell, sublattice) site
    let mut rng = crate::rng::rng_for(p.seed, 0);
    let mut onsite = vec![0.0; 2 * n_cells];
    for site in onsite.iter_mut() {
        *site = if p.disorder_w > 0.0 {
            rng.random_range(-0.5 * p.disorder_w..0.5 * p.disorder_w)
        } else {
            0.0
        };
    }
    for cell in 0..n_cells {
        for a in 0..2 {
            let w = onsite[2 * cell + a];
            for s in 0..2 {
                let idx = 4 * cell + fiber_index(a, s);
                h[(idx, idx)] += cr(w);
            }
        }
    }
    // Hermiticity guard (exact by construction up to rounding)
    let herm_res = diff_norm(&adjoint(&h), &h);
    if herm_res > 1e-10 * (1.0 + fro_norm(&h)) {
        return Err(OddsymError::unresolved(format!(
            "build_kane_mele: Hamiltonian not Hermitian (residual {herm_res:.3e})"
        )));
    }
    let form = SymmetryForm::new(FormKind::Odd, block_diag_repeat(&time_reversal_fiber(), n_cells))?;
    let tr = is_odd_symmetric(&h, &form, 1e-9)?;
    if !tr.holds {
        return Err(OddsymError::contract(format!(
            "build_kane_mele: time-reversal broken (residual {:.3e})",
            tr.residual
        )));
    }
    // square-ified centered positions for the Dirac phase
    let mut positions = Vec::with_capacity(dim);
    for cell in 0..n_cells {
        let x = (cell % p.lx) as f64;
        let y = (cell / p.lx) as f64;
        for a in 0..2 {
            let off = if a == 0 { 0.0 } else { SQ_DELTA_B };
            for _s in 0..2 {
                let px = x + off + 0.5 - p.lx as f64 / 2.0;
                let py = y + off + 0.5 - p.ly as f64 / 2.0;
                positions.push([px, py]);
            }
        }
    }
    Ok(LatticeModel {
        params: p,
        hamiltonian: h,
        form,
        bonds,
        positions,
        onsite_disorder: onsite,
        tr_residual: tr.residual,
    })
}

/// Fermi projection data: the spectral projection below `e_f`, the spectral
/// gap, the occupied frame, and the Dirac phase.
#[derive(Debug, Clone)]
pub struct FermiData {
    pub p: CMatrix,
    pub e_f: f64,
    pub gap: f64,
    pub f: CMatrix,
    /// Orthonormal occupied eigenvectors (dim × n_occ).
    pub occ: CMatrix,
    pub form: SymmetryForm,
    /// Centered positions used by `f` (after torus minimal-imaging).
    pub positions: Vec<[f64; 2]>,
}

impl FermiData {
    pub fn n_occ(&self) -> usize {
        self.occ.ncols()
    }
}

/// Dirac-phase positions: torus models use the minimal image centered at
/// the lattice midpoint; open models use the centered absolute positions.
fn dirac_positions(model: &LatticeModel) -> Vec<[f64; 2]> {
    let lx = model.params.lx as f64;
    let ly = model.params.ly as f64;
    model
        .positions
        .iter()
        .map(|&[x, y]| match model.params.boundary {
            BoundaryCondition::Open => [x, y],
            BoundaryCondition::Torus => {
                let wrap = |v: f64, l: f64| -> f64 {
                    let mut w = (v + l / 2.0).rem_euclid(l) - l / 2.0;
                    if w >= l / 2.0 {
                        w -= l;
                    }
                    w
                };
                [wrap(x, lx), wrap(y, ly)]
            }
        })
        .collect()
}

/// Spectral projection onto energies ≤ `e_f` plus the Dirac phase
/// `F = (X₁ + i X₂)/|X₁ + i X₂|`.
pub fn fermi_projection(model: &LatticeModel, e_f: f64) -> Result<FermiData> {
    let (evals, evecs) = eigh(&model.hamiltonian)?;
    let gap = evals
        .iter()
        .map(|&e| (e - e_f).abs())
        .fold(f64::INFINITY, f64::min);
    if gap < 1e-8 {
        return Err(OddsymError::contract(format!(
            "fermi_projection: E_F = {e_f} is within {gap:.3e} of an eigenvalue; move E_F"
        )));
    }
    let occ_idx: Vec<usize> = (0..evals.len()).filter(|&i| evals[i] <= e_f).collect();
    let occ = gather_cols(&evecs, &occ_idx);
    let p = occ.dot(&adjoint(&occ));
    let positions = dirac_positions(model);
    let dim = model.dim();
    let mut f = zeros(dim, dim);
    for (i, &[x, y]) in positions.iter().enumerate() {
        let z = c(x, y);
        let r = z.norm();
        if r < 1e-9 {
            return Err(OddsymError::contract(
                "fermi_projection: a Dirac-phase position hit the origin",
            ));
        }
        f[(i, i)] = z / r;
    }
    // P inherits the odd symmetry from H by functional calculus
    let sym = is_odd_symmetric(&p, &model.form, 1e-9)?;
    if !sym.holds {
        return Err(OddsymError::unresolved(format!(
            "fermi_projection: projection broke time reversal (residual {:.3e})",
            sym.residual
        )));
    }
    Ok(FermiData {
        p,
        e_f,
        gap,
        f,
        occ,
        form: model.form.clone(),
        positions,
    })
}
