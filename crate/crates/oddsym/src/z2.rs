//! The ℤ₂-index engine: kernel-parity computation with edge-artifact
//! filtering for truncated half-infinite operators, the stabilizing
//! partial-isometry completion, perturbation-stability and homotopy
//! harnesses, and the quaternionic contrast case.
//!
//! Truncating a half-infinite banded operator to `n_sites` manufactures
//! spurious kernel vectors at the amputated right edge (the images of the
//! infinite operator's cokernel). Genuine kernel vectors of the
//! half-infinite operator localize at the physical left edge, so kernel
//! vectors are classified by their position center of mass, with a
//! forbidden middle band `[0.4, 0.6]·n_sites` in which the computation
//! abstains rather than guesses.

use ndarray::prelude::*;

use crate::error::{OddsymError, Result};
use crate::linalg::{eigh, joint_eigh, numerical_kernel, svd};
use crate::mat::*;
use crate::symmetry::{is_odd_symmetric, kramers_pairing_basis, SymmetryForm, PREDICATE_TOL};

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Boundary {
    /// Truncation of an operator on ℓ²(ℕ): the right edge is an artifact.
    HalfInfiniteLeft,
    /// The matrix is the whole operator; no filtering applies.
    Finite,
}

/// A finite matrix together with the truncation metadata needed to filter
/// edge artifacts out of kernel counts.
#[derive(Debug, Clone)]
pub struct TruncatedOperator {
    pub matrix: CMatrix,
    pub site_dim: usize,
    pub n_sites: usize,
    pub boundary: Boundary,
    /// Symmetry form acting fiberwise on each site.
    pub fiber_form: SymmetryForm,
}

impl TruncatedOperator {
    pub fn new(
        matrix: CMatrix,
        site_dim: usize,
        n_sites: usize,
        boundary: Boundary,
        fiber_form: SymmetryForm,
    ) -> Result<Self> {
        if matrix.nrows() != site_dim * n_sites || !is_square(&matrix) {
            return Err(OddsymError::contract(format!(
                "truncated operator: matrix dim {} != site_dim {site_dim} × n_sites {n_sites}",
                matrix.nrows()
            )));
        }
        if fiber_form.dim() != site_dim {
            return Err(OddsymError::contract(
                "truncated operator: fiber form dimension mismatch",
            ));
        }
        let op = TruncatedOperator {
            matrix,
            site_dim,
            n_sites,
            boundary,
            fiber_form,
        };
        if boundary == Boundary::HalfInfiniteLeft {
            let bw = op.block_bandwidth();
            if bw > n_sites / 4 {
                return Err(OddsymError::contract(format!(
                    "truncated operator: bandwidth {bw} exceeds n_sites/4 = {}; \
                     edges do not decouple",
                    n_sites / 4
                )));
            }
        }
        Ok(op)
    }

    /// Largest block offset |j − l| carrying a nonzero block.
    pub fn block_bandwidth(&self) -> usize {
        let d = self.site_dim;
        let mut bw = 0;
        for j in 0..self.n_sites {
            for l in 0..self.n_sites {
                let dist = j.abs_diff(l);
                if dist > bw {
                    let block = self
                        .matrix
                        .slice(s![j * d..(j + 1) * d, l * d..(l + 1) * d]);
                    if block.iter().any(|z| z.norm() > 1e-14) {
                        bw = dist;
                    }
                }
            }
        }
        bw
    }

    /// The symmetry form of the whole truncation, `blockdiag(I, I, …)`.
    pub fn full_form(&self) -> SymmetryForm {
        self.fiber_form.repeat(self.n_sites)
    }

    /// Position center of mass of a vector, in site units.
    pub fn center_of_mass(&self, v: &CVector) -> f64 {
        let d = self.site_dim;
        let mut num = 0.0;
        let mut den = 0.0;
        for site in 0..self.n_sites {
            let w: f64 = (0..d).map(|k| v[site * d + k].norm_sqr()).sum();
            num += site as f64 * w;
            den += w;
        }
        if den == 0.0 {
            f64::NAN
        } else {
            num / den
        }
    }
}

/// Outcome of a kernel-parity computation.
#[derive(Debug, Clone, serde::Serialize)]
pub struct IndexReport {
    pub kernel_dim_raw: usize,
    pub kernel_dim_filtered: usize,
    pub ind2: u8,
    /// Smallest singular value retained above the threshold.
    pub singular_margin: f64,
    /// Center of mass (site units) of each raw kernel vector.
    pub localization_centers: Vec<f64>,
    pub tolerance_used: f64,
    pub unresolved: bool,
    pub unresolved_reason: Option<String>,
}

impl IndexReport {
    fn unresolved(mut self, reason: String) -> Self {
        self.unresolved = true;
        self.unresolved_reason = Some(reason);
        self
    }
}

/// ℤ₂-index of a truncated operator: kernel dimension mod 2 after
/// discarding right-edge truncation artifacts.
pub fn ind2(op: &TruncatedOperator, rel_tol: f64) -> Result<IndexReport> {
    let rr = numerical_kernel(&op.matrix, rel_tol)?;
    let raw = rr.kernel_dim();
    let centers: Vec<f64> = (0..raw)
        .map(|k| op.center_of_mass(&rr.kernel_basis.column(k).to_owned()))
        .collect();
    let (filtered, abstain) = match op.boundary {
        Boundary::Finite => (raw, None),
        Boundary::HalfInfiniteLeft => {
            let mid_lo = 0.4 * op.n_sites as f64;
            let mid_hi = 0.6 * op.n_sites as f64;
            let half = 0.5 * op.n_sites as f64;
            let mut genuine = 0;
            let mut trouble = None;
            for &c in &centers {
                if c.is_nan() || (c > mid_lo && c < mid_hi) {
                    trouble = Some(format!(
                        "kernel vector center of mass {c:.2} lies in the forbidden band \
                         [{mid_lo:.1}, {mid_hi:.1}]; increase n_sites"
                    ));
                }
                if c < half {
                    genuine += 1;
                }
            }
            (genuine, trouble)
        }
    };
    let margin = rr.singular_margin();
    let mut report = IndexReport {
        kernel_dim_raw: raw,
        kernel_dim_filtered: filtered,
        ind2: (filtered % 2) as u8,
        singular_margin: margin,
        localization_centers: centers,
        tolerance_used: rr.tolerance_used,
        unresolved: false,
        unresolved_reason: None,
    };
    if let Some(reason) = abstain {
        report = report.unresolved(reason);
    }
    // a singular value hovering at the threshold makes the count unreliable
    if margin.is_finite() && margin < 10.0 * rr.tolerance_used {
        let reason = format!(
            "singular value {margin:.3e} sits within a decade of the threshold {:.3e}",
            rr.tolerance_used
        );
        report = report.unresolved(reason);
    }
    Ok(report)
}

/// Certificates produced alongside a completion isometry.
#[derive(Debug, Clone, serde::Serialize)]
pub struct CompletionCertificate {
    pub odd_symmetry_residual: f64,
    pub isometry_residual: f64,
    pub sigma_min_completed: f64,
}

/// The finite-dimensional odd symmetric partial isometry `V` built from an
/// orthonormal kernel basis `(φ_1 … φ_2N)` as
/// `V = Σ_n I|conj φ_n⟩⟨φ_{n+N}| − I|conj φ_{n+N}⟩⟨φ_n|`,
/// so that `T + V` is invertible.
pub fn completion_isometry(
    t: &CMatrix,
    form: &SymmetryForm,
    rel_tol: f64,
) -> Result<(CMatrix, CompletionCertificate)> {
    let check = is_odd_symmetric(t, form, PREDICATE_TOL)?;
    if !check.holds {
        return Err(OddsymError::contract(format!(
            "completion_isometry: input not odd symmetric (residual {:.3e})",
            check.residual
        )));
    }
    let rr = numerical_kernel(t, rel_tol)?;
    let dim_ker = rr.kernel_dim();
    if dim_ker % 2 != 0 {
        return Err(OddsymError::contract(format!(
            "completion_isometry: kernel dimension {dim_ker} is odd (Ind₂ = 1); \
             no odd symmetric completion exists"
        )));
    }
    let n = t.nrows();
    let half = dim_ker / 2;
    let mut v = zeros(n, n);
    for k in 0..half {
        let phi_a = rr.kernel_basis.column(k).to_owned();
        let phi_b = rr.kernel_basis.column(k + half).to_owned();
        let ia = form.matrix().dot(&conj_vec(&phi_a));
        let ib = form.matrix().dot(&conj_vec(&phi_b));
        v = &v + &outer(&ia, &phi_b);
        v = &v - &outer(&ib, &phi_a);
    }
    let odd_res = is_odd_symmetric(&v, form, PREDICATE_TOL)?.residual;
    let proj_ker = rr.kernel_basis.dot(&adjoint(&rr.kernel_basis));
    let iso_res = diff_norm(&adjoint(&v).dot(&v), &proj_ker);
    let completed = t + &v;
    let dec = svd(&completed)?;
    let sigma_min = dec.sigma.last().copied().unwrap_or(0.0);
    let cert = CompletionCertificate {
        odd_symmetry_residual: odd_res,
        isometry_residual: iso_res,
        sigma_min_completed: sigma_min,
    };
    if odd_res > 1e-9 * (1.0 + fro_norm(&v)) || iso_res > 1e-9 * (1.0 + dim_ker as f64) {
        return Err(OddsymError::unresolved(format!(
            "completion_isometry certificates failed: {cert:?}"
        )));
    }
    Ok((v, cert))
}

/// Applies a localized odd symmetric finite-rank perturbation and reports
/// the index before and after; compact stability means the two reports
/// carry the same `ind2`.
pub fn perturbation_stability_trial(
    op: &TruncatedOperator,
    k: &CMatrix,
    rel_tol: f64,
) -> Result<(IndexReport, IndexReport)> {
    let full = op.full_form();
    let check = is_odd_symmetric(k, &full, PREDICATE_TOL)?;
    if !check.holds {
        return Err(OddsymError::contract(format!(
            "perturbation trial: K not odd symmetric (residual {:.3e})",
            check.residual
        )));
    }
    // locality: support confined to sites [0, n_sites/4]
    let d = op.site_dim;
    let cutoff = op.n_sites / 4;
    for j in 0..op.n_sites {
        for l in 0..op.n_sites {
            if j > cutoff || l > cutoff {
                let block = k.slice(s![j * d..(j + 1) * d, l * d..(l + 1) * d]);
                if block.iter().any(|z| z.norm() > 1e-12) {
                    return Err(OddsymError::contract(format!(
                        "perturbation trial: K has support at site pair ({j}, {l}) beyond \
                         the localization cutoff {cutoff}"
                    )));
                }
            }
        }
    }
    let before = ind2(op, rel_tol)?;
    let perturbed = TruncatedOperator {
        matrix: &op.matrix + k,
        ..op.clone()
    };
    let after = ind2(&perturbed, rel_tol)?;
    Ok((before, after))
}

/// Sampled two-leg homotopy from an even-kernel odd symmetric matrix to the
/// identity: leg 1 adds the completion `s V`, leg 2 contracts the polar
/// data of an invertible factorization, `A_s = e^{iH(2−s)} |A|^{2−s}`.
#[derive(Debug, Clone)]
pub struct HomotopyPath {
    /// Sampled operators along the path, `samples[0] = T`, last = identity.
    pub samples: Vec<CMatrix>,
    /// Index of the first leg-2 sample.
    pub leg_boundary: usize,
    /// Max odd-symmetry residual over all samples (relative).
    pub max_symmetry_residual: f64,
    /// Min singular value over leg-2 samples.
    pub min_sigma_leg2: f64,
    /// Max consecutive step ‖T_{k+1} − T_k‖, a sampling-density diagnostic.
    pub max_step: f64,
}

pub fn homotopy_path_to_identity(
    t: &CMatrix,
    form: &SymmetryForm,
    samples_per_leg: usize,
    rel_tol: f64,
) -> Result<HomotopyPath> {
    let (v, _cert) = completion_isometry(t, form, rel_tol)?;
    let n = t.nrows();
    let mut samples = Vec::with_capacity(2 * samples_per_leg + 1);
    for k in 0..=samples_per_leg {
        let s_par = k as f64 / samples_per_leg as f64;
        samples.push(t + &v.mapv(|z| z * cr(s_par)));
    }
    let leg_boundary = samples.len();
    // leg 2: factor T + V = I^* A^t I A with A invertible, then contract A
    let completed = t + &v;
    let a = crate::factorization::odd_factorize(&completed, form, rel_tol)?;
    // polar data A = e^{iH} |A| via the SVD
    let dec = svd(&a)?;
    let w = dec.u.dot(&dec.vh);
    let mut sig = zeros(n, n);
    for (i, &s_val) in dec.sigma.iter().enumerate() {
        if s_val <= 0.0 {
            return Err(OddsymError::unresolved(
                "homotopy: factor A is singular; completion failed to invertibilize",
            ));
        }
        sig[(i, i)] = cr(s_val);
    }
    let absa = mul3(&adjoint(&dec.vh), &sig, &dec.vh);
    // Hermitian phase generator H with e^{iH} = W, via the commuting split
    let g_re = hermitize(&(&w + &adjoint(&w)).mapv(|z| 0.5 * z));
    let g_im = hermitize(&(&w - &adjoint(&w)).mapv(|z| z * c(0.0, -0.5)));
    let (pairs, q) = joint_eigh(&g_re, &g_im, 1e-8)?;
    let thetas: Vec<f64> = pairs.iter().map(|&(re, im)| im.atan2(re)).collect();
    let (pvals, pvecs) = eigh(&absa)?;
    for k in 1..=samples_per_leg {
        let s_par = 1.0 + k as f64 / samples_per_leg as f64;
        let expo = 2.0 - s_par;
        let mut phase_d = zeros(n, n);
        for (i, &th) in thetas.iter().enumerate() {
            phase_d[(i, i)] = C64::from_polar(1.0, th * expo);
        }
        let phase = mul3(&q, &phase_d, &adjoint(&q));
        let mut pow_d = zeros(n, n);
        for (i, &p) in pvals.iter().enumerate() {
            if p <= 0.0 {
                return Err(OddsymError::unresolved("homotopy: |A| not positive definite"));
            }
            pow_d[(i, i)] = cr(p.powf(expo));
        }
        let modulus = mul3(&pvecs, &pow_d, &adjoint(&pvecs));
        let a_s = phase.dot(&modulus);
        samples.push(crate::factorization::rebuild_odd(&a_s, form));
    }

    let mut max_sym = 0.0f64;
    for s_mat in &samples {
        let chk = is_odd_symmetric(s_mat, form, 1e-8)?;
        max_sym = max_sym.max(chk.residual / (1.0 + fro_norm(s_mat)));
    }
    let mut min_sigma = f64::INFINITY;
    for s_mat in &samples[leg_boundary.saturating_sub(1)..] {
        let dec = svd(s_mat)?;
        min_sigma = min_sigma.min(dec.sigma.last().copied().unwrap_or(0.0));
    }
    let mut max_step = 0.0f64;
    for pair in samples.windows(2) {
        max_step = max_step.max(diff_norm(&pair[1], &pair[0]));
    }
    if max_sym > 1e-8 {
        return Err(OddsymError::unresolved(format!(
            "homotopy: symmetry residual {max_sym:.3e} exceeds 1e-8"
        )));
    }
    Ok(HomotopyPath {
        samples,
        leg_boundary,
        max_symmetry_residual: max_sym,
        min_sigma_leg2: min_sigma,
        max_step,
    })
}

/// Kernel evenness of a quaternionic matrix (`I^* conj(T) I = T`): both
/// kernel and cokernel admit a Kramers pairing basis, forcing even
/// dimensions — the finite shadow of the even Noether index.
#[derive(Debug, Clone, serde::Serialize)]
pub struct QuaternionicReport {
    pub kernel_dim: usize,
    pub cokernel_dim: usize,
    pub kernel_even: bool,
    pub pairing_succeeded: bool,
}

pub fn quaternionic_index_check(
    t: &CMatrix,
    form: &SymmetryForm,
    rel_tol: f64,
) -> Result<QuaternionicReport> {
    let check = crate::symmetry::is_quaternionic(t, form, PREDICATE_TOL)?;
    if !check.holds {
        return Err(OddsymError::contract(format!(
            "quaternionic_index_check: input not quaternionic (residual {:.3e})",
            check.residual
        )));
    }
    let ker = numerical_kernel(t, rel_tol)?;
    let coker = numerical_kernel(&adjoint(t), rel_tol)?;
    let pairing_ker = kramers_pairing_basis(&ker.kernel_basis, form);
    let pairing_coker = kramers_pairing_basis(&coker.kernel_basis, form);
    Ok(QuaternionicReport {
        kernel_dim: ker.kernel_dim(),
        cokernel_dim: coker.kernel_dim(),
        kernel_even: ker.kernel_dim() % 2 == 0 && coker.kernel_dim() % 2 == 0,
        pairing_succeeded: pairing_ker.is_ok() && pairing_coker.is_ok(),
    })
}

/// Truncated left shift: ones on the superdiagonal, kernel `e_1`.
pub fn shift_left(n: usize) -> CMatrix {
    let mut s = zeros(n, n);
    for i in 0..n - 1 {
        s[(i, i + 1)] = cr(1.0);
    }
    s
}
