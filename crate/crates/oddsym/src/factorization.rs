//! Constructive canonical forms and factorizations: the unitary congruence
//! normal form of complex skew-symmetric matrices, the odd factorization
//! `T = I^* A^t I A` with kernel control, its even counterpart
//! `T = J A^t J A`, and the polar-decomposition relations of odd symmetric
//! operators.
//!
//! The skew canonical form follows the constructive proof route: diagonalize
//! `B^* B`, pass to the normal skew matrix `N`, split `N = N₁ + i N₂` into
//! commuting purely imaginary self-adjoint parts, pick one representative
//! per conjugate pair of joint eigenvalues, and assemble a real orthogonal
//! out of the paired eigenbasis and the Cayley block
//! `C = (1/√2)[[1, −i],[1, i]]`.

use ndarray::prelude::*;
use ndarray_linalg::{Eigh, UPLO};

use crate::error::{OddsymError, Result};
use crate::linalg::{eigh, joint_eigh, numerical_kernel, polar_decompose, svd};
#[cfg(test)]
use crate::linalg::DEFAULT_REL_TOL;
use crate::mat::*;
use crate::symmetry::{
    is_even_symmetric, is_odd_symmetric, normalize_form, FormKind, SymmetryForm, PREDICATE_TOL,
};

/// Canonical congruence data of a skew-symmetric matrix:
/// `u^t B u = diag(m, m, 0) · [[0,−1,0],[1,0,0],[0,0,0]] · diag(m, m, 0)^t`.
#[derive(Debug, Clone)]
pub struct SkewCanonicalForm {
    /// Unitary congruence factor (n × n).
    pub u: CMatrix,
    /// Diagonal block factor with trivial kernel (rank/2 × rank/2).
    pub m: CMatrix,
    pub kernel_dim: usize,
    /// Absolute residual `‖u^t B u − canonical‖`.
    pub residual: f64,
}

impl SkewCanonicalForm {
    /// Assembles the full n × n three-block canonical matrix.
    pub fn canonical_matrix(&self) -> CMatrix {
        let half = self.m.nrows();
        let n = 2 * half + self.kernel_dim;
        let mmt = self.m.dot(&transpose(&self.m));
        let mut out = zeros(n, n);
        out.slice_mut(s![..half, half..2 * half])
            .assign(&mmt.mapv(|z| -z));
        out.slice_mut(s![half..2 * half, ..half]).assign(&mmt);
        out
    }
}

/// Joint eigenvalue bookkeeping for the conjugate-pair selection.
struct PlusEntry {
    index: usize,
    n1: f64,
    n2: f64,
}

/// Unitary congruence canonical form of a skew-symmetric matrix.
pub fn skew_canonical(b: &CMatrix, rel_tol: f64) -> Result<SkewCanonicalForm> {
    if !is_square(b) {
        return Err(OddsymError::contract("skew_canonical: matrix must be square"));
    }
    let n = b.nrows();
    let norm_b = fro_norm(b);
    let skew_res = diff_norm(&transpose(b), &b.mapv(|z| -z));
    if skew_res > 1e-9 * (1.0 + norm_b) {
        return Err(OddsymError::contract(format!(
            "skew_canonical: not skew-symmetric (residual {skew_res:.3e})"
        )));
    }
    // singular data of B; the right singular vectors diagonalize B^* B at
    // full precision, which the Gram matrix would not
    let dec = svd(b)?;
    let e = adjoint(&dec.vh);
    let sigmas = dec.sigma.clone();
    let smax = sigmas.iter().cloned().fold(0.0, f64::max);
    let tol = rel_tol * smax;
    let kern: Vec<usize> = (0..n).filter(|&j| sigmas[j] <= tol).collect();
    let pos: Vec<usize> = (0..n).filter(|&j| sigmas[j] > tol).collect();
    let r = pos.len();

    if r == 0 {
        return Ok(SkewCanonicalForm {
            u: e,
            m: zeros(0, 0),
            kernel_dim: n,
            residual: smax * (n as f64),
        });
    }
    if r % 2 != 0 {
        return Err(OddsymError::unresolved(format!(
            "skew_canonical: numerical rank {r} is odd; nonzero singular values of a \
             skew-symmetric matrix pair up — the threshold {tol:.3e} splits a pair \
             (σ near threshold: {:.3e})",
            sigmas[pos[r - 1]]
        )));
    }

    // N = E^t B E is normal and skew-symmetric with N^* N diagonal
    let nfull = mul3(&transpose(&e), b, &e);
    let e_pos = gather_cols(&e, &pos);
    let mut nr = zeros(r, r);
    for (a, &i) in pos.iter().enumerate() {
        for (c_, &j) in pos.iter().enumerate() {
            nr[(a, c_)] = nfull[(i, j)];
        }
    }
    // commuting purely imaginary self-adjoint parts
    let n1 = hermitize(&(&nr - &conj(&nr)).mapv(|z| 0.5 * z));
    let n2 = hermitize(&(&nr + &conj(&nr)).mapv(|z| z * c(0.0, -0.5)));
    let cluster_gap = 1e-7 * smax.max(1e-300);
    let (pairs, q) = joint_eigh(&n1, &n2, cluster_gap)?;

    // match joint eigenvalues into conjugate pairs (a, b) ↔ (−a, −b)
    let mut unmatched: Vec<usize> = (0..r).collect();
    let mut plus: Vec<PlusEntry> = Vec::with_capacity(r / 2);
    while let Some(&j) = unmatched.first() {
        unmatched.retain(|&x| x != j);
        let (a, bb) = pairs[j];
        let mut best = usize::MAX;
        let mut best_res = f64::INFINITY;
        for &k in &unmatched {
            let (a2, b2) = pairs[k];
            let res = ((a + a2).powi(2) + (bb + b2).powi(2)).sqrt();
            if res < best_res {
                best_res = res;
                best = k;
            }
        }
        let sigma_pair = (a * a + bb * bb).sqrt();
        if best == usize::MAX || best_res > 1e-6 * smax {
            return Err(OddsymError::unresolved(format!(
                "skew_canonical: joint eigenvalue ({a:.6e}, {bb:.6e}) has no conjugate \
                 partner within 1e-6·σ_max (best residual {best_res:.3e}); \
                 degenerate cluster ambiguity"
            )));
        }
        unmatched.retain(|&x| x != best);
        // representative choice keeps λ' = i(n1 + i n2) off the branch cut:
        // n1 > 0 puts it in the open upper half plane, otherwise n2 < 0
        // puts it on the positive real axis
        let chosen = if a.abs() > 1e-6 * sigma_pair {
            if a > 0.0 {
                j
            } else {
                best
            }
        } else if bb < 0.0 {
            j
        } else {
            best
        };
        let (ca, cb) = pairs[chosen];
        plus.push(PlusEntry {
            index: chosen,
            n1: ca,
            n2: cb,
        });
    }
    plus.sort_by(|x, y| {
        let sx = (x.n1 * x.n1 + x.n2 * x.n2).sqrt();
        let sy = (y.n1 * y.n1 + y.n2 * y.n2).sqrt();
        sy.total_cmp(&sx)
            .then(y.n1.total_cmp(&x.n1))
            .then(y.n2.total_cmp(&x.n2))
    });

    let half = r / 2;
    let mut u_plus = zeros(r, half);
    let mut lambda = Vec::with_capacity(half);
    for (k, entry) in plus.iter().enumerate() {
        u_plus.column_mut(k).assign(&q.column(entry.index));
        lambda.push(c(-entry.n2, entry.n1));
    }
    for l in &lambda {
        if !(l.re > 1e-12 * l.norm() || l.im.abs() > 1e-12 * l.norm()) {
            return Err(OddsymError::unresolved(format!(
                "skew_canonical: canonical eigenvalue {l} sits on the branch cut"
            )));
        }
    }

    // O = [u₊ | conj(u₊)] · C is real because conjugation swaps the halves
    let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
    let mut u_spec = zeros(r, r);
    u_spec.slice_mut(s![.., ..half]).assign(&u_plus);
    u_spec.slice_mut(s![.., half..]).assign(&conj(&u_plus));
    let mut cayley = zeros(r, r);
    for i in 0..half {
        cayley[(i, i)] = cr(inv_sqrt2);
        cayley[(i, half + i)] = c(0.0, -inv_sqrt2);
        cayley[(half + i, i)] = cr(inv_sqrt2);
        cayley[(half + i, half + i)] = c(0.0, inv_sqrt2);
    }
    let o_r = u_spec.dot(&cayley);
    let imag = max_abs_imag(&o_r);
    if imag > 1e-8 * (1.0 + smax) {
        return Err(OddsymError::unresolved(format!(
            "skew_canonical: orthogonal assembly has imaginary residue {imag:.3e}"
        )));
    }
    let o_r = o_r.mapv(|z| cr(z.re));

    let mut m = zeros(half, half);
    for (k, l) in lambda.iter().enumerate() {
        m[(k, k)] = l.sqrt();
    }

    let mut u = zeros(n, n);
    u.slice_mut(s![.., ..r]).assign(&e_pos.dot(&o_r));
    for (k, &j) in kern.iter().enumerate() {
        u.column_mut(r + k).assign(&e.column(j));
    }

    let form = SkewCanonicalForm {
        u,
        m,
        kernel_dim: kern.len(),
        residual: 0.0,
    };
    let brought = mul3(&transpose(&form.u), b, &form.u);
    let residual = diff_norm(&brought, &form.canonical_matrix());
    if residual > 1e-8 * (1.0 + norm_b) {
        return Err(OddsymError::unresolved(format!(
            "skew_canonical: reconstruction residual {residual:.3e} exceeds 1e-8·‖B‖"
        )));
    }
    Ok(SkewCanonicalForm { residual, ..form })
}

/// Factor an odd symmetric matrix as `T = I^* A^t I A` with
/// `rank(A) = rank(T)`.
pub fn odd_factorize(t: &CMatrix, form: &SymmetryForm, rel_tol: f64) -> Result<CMatrix> {
    let check = is_odd_symmetric(t, form, PREDICATE_TOL)?;
    if !check.holds {
        return Err(OddsymError::contract(format!(
            "odd_factorize: input not odd symmetric (residual {:.3e})",
            check.residual
        )));
    }
    let n = t.nrows();
    let b = form.matrix().dot(t);
    let skf = skew_canonical(&b, rel_tol)?;
    let k = skf.kernel_dim;
    if k % 2 != 0 {
        // cannot occur for a valid even-dimensional form (skew rank is even),
        // but keep the guarantee honest if thresholds misbehave
        return Err(OddsymError::unresolved(
            "odd_factorize: odd kernel dimension after rank decision; \
             kernel-matching factorization unavailable",
        ));
    }
    let half = skf.m.nrows();
    let k2 = k / 2;
    // reorder the canonical grading (m, m, k) into (m, k/2, m, k/2)
    let mut u_re = zeros(n, n);
    for i in 0..half {
        u_re.column_mut(i).assign(&skf.u.column(i));
        u_re.column_mut(half + k2 + i).assign(&skf.u.column(half + i));
    }
    for i in 0..k2 {
        u_re.column_mut(half + i).assign(&skf.u.column(2 * half + i));
        u_re.column_mut(2 * half + k2 + i)
            .assign(&skf.u.column(2 * half + k2 + i));
    }
    // G = diag(M, 0, M, 0) in that grading
    let mut g = zeros(n, n);
    for i in 0..half {
        g[(i, i)] = skf.m[(i, i)];
        g[(half + k2 + i, half + k2 + i)] = skf.m[(i, i)];
    }
    let (o_i, _) = normalize_form(form)?;
    // B = conj(U') G (O^t I O) G^t U'^*  ⇒  A = O G^t U'^*
    let a = mul3(&o_i, &transpose(&g), &adjoint(&u_re));
    let rebuilt = rebuild_odd(&a, form);
    let res = diff_norm(&rebuilt, t);
    if res > 1e-8 * (1.0 + fro_norm(t)) {
        return Err(OddsymError::unresolved(format!(
            "odd_factorize: reconstruction residual {res:.3e} exceeds 1e-8·(1+‖T‖)"
        )));
    }
    Ok(a)
}

/// `I^* A^t I A`, the odd factorization rebuild.
pub fn rebuild_odd(a: &CMatrix, form: &SymmetryForm) -> CMatrix {
    mul3(&form.adjoint_matrix(), &transpose(a), &form.matrix().dot(a))
}

/// `J A^t J A`, the even factorization rebuild.
pub fn rebuild_even(a: &CMatrix, form: &SymmetryForm) -> CMatrix {
    mul3(form.matrix(), &transpose(a), &form.matrix().dot(a))
}

/// Joint diagonalization of two commuting real symmetric matrices by a real
/// orthogonal, clustering the first spectrum and rediagonalizing the second
/// inside each cluster.
fn joint_eigh_real(
    h1: &Array2<f64>,
    h2: &Array2<f64>,
    cluster_gap: f64,
) -> Result<(Vec<(f64, f64)>, Array2<f64>)> {
    let n = h1.nrows();
    let sym1 = (h1 + &h1.t()).mapv(|x| 0.5 * x);
    let (w1, mut q) = sym1.eigh(UPLO::Lower).map_err(OddsymError::Linalg)?;
    let mut pairs = vec![(0.0, 0.0); n];
    for cluster in crate::linalg::cluster_indices(w1.as_slice().unwrap(), cluster_gap) {
        let mut sub = Array2::<f64>::zeros((n, cluster.len()));
        for (k, &j) in cluster.iter().enumerate() {
            sub.column_mut(k).assign(&q.column(j));
        }
        let comp = sub.t().dot(h2).dot(&sub);
        let comp = (&comp + &comp.t()).mapv(|x| 0.5 * x);
        let (w2, s) = comp.eigh(UPLO::Lower).map_err(OddsymError::Linalg)?;
        let refined = sub.dot(&s);
        for (k, &j) in cluster.iter().enumerate() {
            q.column_mut(j).assign(&refined.column(k));
            pairs[j] = (w1[j], w2[k]);
        }
    }
    Ok((pairs, q))
}

/// Factor an even symmetric matrix as `T = J A^t J A` with
/// `rank(A) = rank(T)`; no parity obstruction exists in the even case.
pub fn even_factorize(t: &CMatrix, form: &SymmetryForm, rel_tol: f64) -> Result<CMatrix> {
    let check = is_even_symmetric(t, form, PREDICATE_TOL)?;
    if !check.holds {
        return Err(OddsymError::contract(format!(
            "even_factorize: input not even symmetric (residual {:.3e})",
            check.residual
        )));
    }
    let n = t.nrows();
    let gram = adjoint(t).dot(t);
    let (_, e) = eigh(&gram)?;
    let jt = form.matrix().dot(t);
    let nmat = mul3(&transpose(&e), &jt, &e);
    // symmetric normal; split into commuting real symmetric parts
    let nmat = (&nmat + &transpose(&nmat)).mapv(|z| 0.5 * z);
    let n1c = (&nmat + &conj(&nmat)).mapv(|z| 0.5 * z);
    let n2c = (&nmat - &conj(&nmat)).mapv(|z| z * c(0.0, -0.5));
    let imag_leak = max_abs_imag(&n1c).max(max_abs_imag(&n2c));
    let scale = fro_norm(&nmat);
    if imag_leak > 1e-8 * (1.0 + scale) {
        return Err(OddsymError::unresolved(format!(
            "even_factorize: split parts not real (leak {imag_leak:.3e})"
        )));
    }
    let n1: Array2<f64> = n1c.mapv(|z| z.re);
    let n2: Array2<f64> = n2c.mapv(|z| z.re);
    let (pairs, o) = joint_eigh_real(&n1, &n2, 1e-7 * scale.max(1e-300))?;

    let lam_max = pairs
        .iter()
        .map(|&(a, b)| (a * a + b * b).sqrt())
        .fold(0.0, f64::max);
    let cut = rel_tol * lam_max;
    let mut lam_sqrt = zeros(n, n);
    for (j, &(a, b)) in pairs.iter().enumerate() {
        let l = c(a, b);
        lam_sqrt[(j, j)] = if l.norm() <= cut { cr(0.0) } else { l.sqrt() };
    }
    let oc = o.mapv(|x| cr(x));
    let a0 = mul3(&lam_sqrt, &transpose(&oc), &adjoint(&e));
    // K with K K^t = J absorbs the form: K = O_J diag(1_p, i 1_q)
    let (o_j, j_std) = normalize_form(form)?;
    let mut phase = zeros(n, n);
    for i in 0..n {
        phase[(i, i)] = if j_std.matrix()[(i, i)].re > 0.0 {
            cr(1.0)
        } else {
            c(0.0, 1.0)
        };
    }
    let a = mul3(&o_j, &phase, &a0);
    let rebuilt = rebuild_even(&a, form);
    let res = diff_norm(&rebuilt, t);
    if res > 1e-8 * (1.0 + fro_norm(t)) {
        return Err(OddsymError::unresolved(format!(
            "even_factorize: reconstruction residual {res:.3e} exceeds 1e-8·(1+‖T‖)"
        )));
    }
    Ok(a)
}

/// Residuals of the polar relations for odd symmetric `T`:
/// `|T^*| = I^* conj(|T|) I` and the phase relation
/// `V_{T^*} = I^* conj(V_T) I` away from the kernel.
#[derive(Debug, Clone, serde::Serialize)]
pub struct PolarRelationReport {
    pub modulus_residual: f64,
    pub phase_residual: f64,
    pub tolerance: f64,
    pub holds: bool,
}

pub fn polar_relation_check(t: &CMatrix, form: &SymmetryForm) -> Result<PolarRelationReport> {
    let check = is_odd_symmetric(t, form, PREDICATE_TOL)?;
    if !check.holds {
        return Err(OddsymError::contract(format!(
            "polar_relation_check: input not odd symmetric (residual {:.3e})",
            check.residual
        )));
    }
    let (v, p) = polar_decompose(t)?;
    let ts = adjoint(t);
    let (v2, p2) = polar_decompose(&ts)?;
    let modulus_pred = mul3(&form.adjoint_matrix(), &conj(&p), form.matrix());
    let modulus_residual = diff_norm(&p2, &modulus_pred) / (1.0 + fro_norm(t));
    // compare phases on the co-kernel complement ran(v2^* v2)
    let phase_pred = mul3(&form.adjoint_matrix(), &conj(&v), form.matrix());
    let proj = adjoint(&v2).dot(&v2);
    let phase_residual =
        diff_norm(&v2.dot(&proj), &phase_pred.dot(&proj)) / (1.0 + fro_norm(t));
    let tolerance = 1e-8;
    Ok(PolarRelationReport {
        modulus_residual,
        phase_residual,
        tolerance,
        holds: modulus_residual <= tolerance && phase_residual <= tolerance,
    })
}

/// Report serialized for the `factorize` command.
#[derive(Debug, Clone, serde::Serialize)]
pub struct FactorizationReport {
    pub residual: f64,
    pub rank_t: usize,
    pub rank_a: usize,
    pub kernel_dim: usize,
    pub rel_tol: f64,
}

pub fn factorization_report(
    t: &CMatrix,
    a: &CMatrix,
    form: &SymmetryForm,
    rel_tol: f64,
) -> Result<FactorizationReport> {
    let rebuilt = match form.kind() {
        FormKind::Odd => rebuild_odd(a, form),
        FormKind::Even => rebuild_even(a, form),
    };
    let residual = diff_norm(&rebuilt, t) / (1.0 + fro_norm(t));
    let rt = numerical_kernel(t, rel_tol)?;
    let ra = numerical_kernel(a, rel_tol)?;
    Ok(FactorizationReport {
        residual,
        rank_t: rt.rank,
        rank_a: ra.rank,
        kernel_dim: rt.kernel_dim(),
        rel_tol,
    })
}

/// Multiplicity structure of a spectrum: eigenvalue cluster sizes at the
/// declared separation, computed after normalizing the matrix to unit norm.
pub fn eigenvalue_cluster_sizes(t: &CMatrix, cluster_tol: f64) -> Result<Vec<usize>> {
    let scale = fro_norm(t);
    let m = if scale > 0.0 {
        t.mapv(|z| z / scale)
    } else {
        t.clone()
    };
    let evals = crate::linalg::eigenvalues(&m)?;
    Ok(cluster_complex(&evals, cluster_tol))
}

/// Greedy single-linkage clustering of complex points; returns cluster sizes.
pub fn cluster_complex(points: &[C64], gap: f64) -> Vec<usize> {
    let mut remaining: Vec<C64> = points.to_vec();
    let mut sizes = Vec::new();
    while let Some(seed) = remaining.pop() {
        let mut cluster = vec![seed];
        loop {
            let mut grabbed = false;
            let mut idx = 0;
            while idx < remaining.len() {
                let p = remaining[idx];
                if cluster.iter().any(|q| (p - q).norm() <= gap) {
                    cluster.push(remaining.swap_remove(idx));
                    grabbed = true;
                } else {
                    idx += 1;
                }
            }
            if !grabbed {
                break;
            }
        }
        sizes.push(cluster.len());
    }
    sizes
}

/// Singular value multiplicities at the declared relative separation.
pub fn singular_value_cluster_sizes(t: &CMatrix, cluster_tol: f64) -> Result<Vec<usize>> {
    let scale = fro_norm(t);
    let m = if scale > 0.0 {
        t.mapv(|z| z / scale)
    } else {
        t.clone()
    };
    let dec = svd(&m)?;
    let pts: Vec<C64> = dec.sigma.iter().map(|&s| cr(s)).collect();
    Ok(cluster_complex(&pts, cluster_tol))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{random_complex, random_skew_symmetric, rng_for};
    use crate::symmetry::{odd_symmetrize, standard_even, standard_odd};

    #[test]
    fn skew_canonical_two_by_two_cell() {
        let sigma = 1.7;
        let b = array![[cr(0.0), cr(sigma)], [cr(-sigma), cr(0.0)]];
        let f = skew_canonical(&b, DEFAULT_REL_TOL).unwrap();
        assert_eq!(f.kernel_dim, 0);
        assert_eq!(f.m.nrows(), 1);
        assert!((f.m[(0, 0)].norm() - sigma.sqrt()).abs() < 1e-10);
        assert!(f.residual < 1e-10);
    }

    #[test]
    fn skew_canonical_zero_matrix() {
        let f = skew_canonical(&zeros(3, 3), DEFAULT_REL_TOL).unwrap();
        assert_eq!(f.kernel_dim, 3);
        assert_eq!(f.m.nrows(), 0);
    }

    #[test]
    fn skew_canonical_rank_deficient() {
        // rank-6 skew in dimension 8
        let x = random_complex(&mut rng_for(41, 0), 6, 8);
        let core = random_skew_symmetric(&mut rng_for(41, 1), 6);
        let b = mul3(&transpose(&x), &core, &x);
        let f = skew_canonical(&b, DEFAULT_REL_TOL).unwrap();
        assert_eq!(f.kernel_dim, 2);
        assert!(f.residual <= 1e-8 * (1.0 + fro_norm(&b)), "residual {}", f.residual);
        // u unitary
        assert!(diff_norm(&f.u.dot(&adjoint(&f.u)), &identity(8)) < 1e-9);
        // m has trivial kernel
        for i in 0..f.m.nrows() {
            assert!(f.m[(i, i)].norm() > 1e-9);
        }
    }

    fn rng_real_skew(seed: u64, n: usize) -> CMatrix {
        let g = crate::rng::random_real(&mut rng_for(seed, 0), n, n);
        (&g - &transpose(&g)).mapv(|z| 0.5 * z)
    }

    #[test]
    fn skew_canonical_real_skew_input() {
        // N1 vanishes identically for real skew input; exercises the
        // n2-based representative choice
        let g = rng_real_skew(42, 6);
        let f = skew_canonical(&g, DEFAULT_REL_TOL).unwrap();
        assert!(f.residual <= 1e-8 * (1.0 + fro_norm(&g)));
    }

    #[test]
    fn singular_values_pair_up() {
        for trial in 0..60 {
            let n = 2 * (2 + (trial % 4));
            let b = random_skew_symmetric(&mut rng_for(43, trial as u64), n);
            let clusters = singular_value_cluster_sizes(&b, 1e-8).unwrap();
            for size in clusters {
                assert_eq!(size % 2, 0, "singular multiplicity odd at n={n}");
            }
        }
    }

    #[test]
    fn odd_factorize_identity_and_scalar() {
        let form = standard_odd(4).unwrap();
        let a = odd_factorize(&identity(4), &form, DEFAULT_REL_TOL).unwrap();
        let rebuilt = rebuild_odd(&a, &form);
        assert!(diff_norm(&rebuilt, &identity(4)) < 1e-9);
        assert_eq!(numerical_kernel(&a, 1e-9).unwrap().rank, 4);

        let f2 = standard_odd(2).unwrap();
        let t = identity(2).mapv(|z| z * cr(1.9));
        let a = odd_factorize(&t, &f2, DEFAULT_REL_TOL).unwrap();
        assert!(diff_norm(&rebuild_odd(&a, &f2), &t) < 1e-9);
        assert_eq!(numerical_kernel(&a, 1e-9).unwrap().rank, 2);
    }

    #[test]
    fn odd_factorize_planted_kernel() {
        let n = 8;
        let form = standard_odd(n).unwrap();
        // T = I^* X^t I X with rank-6 X has a 2-dim kernel
        let mut x = random_complex(&mut rng_for(44, 0), n, n);
        for i in 0..n {
            x[(i, 3)] = cr(0.0);
            x[(i, 7)] = cr(0.0);
        }
        let t = rebuild_odd(&x, &form);
        let rank_t = numerical_kernel(&t, 1e-9).unwrap().rank;
        assert_eq!(rank_t, 6);
        let a = odd_factorize(&t, &form, DEFAULT_REL_TOL).unwrap();
        let res = diff_norm(&rebuild_odd(&a, &form), &t);
        assert!(res <= 1e-8 * (1.0 + fro_norm(&t)), "residual {res}");
        assert_eq!(numerical_kernel(&a, 1e-9).unwrap().rank, 6);
    }

    #[test]
    fn odd_factorize_rejects_asymmetric() {
        let form = standard_odd(2).unwrap();
        let t = array![[cr(1.0), cr(0.0)], [cr(0.0), cr(2.0)]];
        assert!(odd_factorize(&t, &form, DEFAULT_REL_TOL).is_err());
    }

    #[test]
    fn rebuild_is_projection_onto_odd_symmetrics() {
        let form = standard_odd(6).unwrap();
        let raw = random_complex(&mut rng_for(45, 0), 6, 6);
        let t = odd_symmetrize(&raw, &form).unwrap();
        let a = odd_factorize(&t, &form, DEFAULT_REL_TOL).unwrap();
        let rebuilt = rebuild_odd(&a, &form);
        assert!(is_odd_symmetric(&rebuilt, &form, 1e-9).unwrap().holds);
    }

    #[test]
    fn even_factorize_diagonal() {
        let j = standard_even(2, 2).unwrap();
        let t = array![[cr(4.0), cr(0.0)], [cr(0.0), cr(9.0)]];
        let a = even_factorize(&t, &j, DEFAULT_REL_TOL).unwrap();
        assert!(diff_norm(&rebuild_even(&a, &j), &t) < 1e-8 * 10.0);
        // A^t A = T here, so singular values are (2, 3)
        let dec = svd(&a).unwrap();
        let mut s = dec.sigma.clone();
        s.sort_by(f64::total_cmp);
        assert!((s[0] - 2.0).abs() < 1e-9 && (s[1] - 3.0).abs() < 1e-9);
    }

    #[test]
    fn even_factorize_identity_unitary() {
        let j = standard_even(3, 3).unwrap();
        let a = even_factorize(&identity(3), &j, DEFAULT_REL_TOL).unwrap();
        assert!(diff_norm(&a.dot(&adjoint(&a)), &identity(3)) < 1e-8);
    }

    #[test]
    fn even_factorize_planted_rank() {
        let n = 7;
        let j = standard_even(n, 4).unwrap();
        let mut x = random_complex(&mut rng_for(46, 0), n, n);
        for i in 0..n {
            x[(i, 1)] = cr(0.0);
            x[(i, 5)] = cr(0.0);
        }
        let t = rebuild_even(&x, &j);
        assert_eq!(numerical_kernel(&t, 1e-9).unwrap().rank, 5);
        let a = even_factorize(&t, &j, DEFAULT_REL_TOL).unwrap();
        let res = diff_norm(&rebuild_even(&a, &j), &t);
        assert!(res <= 1e-8 * (1.0 + fro_norm(&t)), "residual {res}");
        assert_eq!(numerical_kernel(&a, 1e-9).unwrap().rank, 5);
    }

    #[test]
    fn even_factorize_nontrivial_form() {
        let n = 4;
        let j = standard_even(n, 2).unwrap();
        let x = random_complex(&mut rng_for(47, 0), n, n);
        let t = rebuild_even(&x, &j);
        let a = even_factorize(&t, &j, DEFAULT_REL_TOL).unwrap();
        assert!(diff_norm(&rebuild_even(&a, &j), &t) <= 1e-8 * (1.0 + fro_norm(&t)));
    }

    #[test]
    fn polar_relation_unitary_and_scalar() {
        let form = standard_odd(2).unwrap();
        // unitary odd symmetric: scalar phase
        let t = identity(2).mapv(|z| z * C64::from_polar(1.0, 0.8));
        let rep = polar_relation_check(&t, &form).unwrap();
        assert!(rep.holds, "unitary case: {rep:?}");
        let t = identity(2).mapv(|z| z * cr(2.5));
        let rep = polar_relation_check(&t, &form).unwrap();
        assert!(rep.holds, "scalar case: {rep:?}");
    }

    #[test]
    fn polar_relation_with_kernel() {
        let n = 6;
        let form = standard_odd(n).unwrap();
        let mut x = random_complex(&mut rng_for(48, 0), n, n);
        for i in 0..n {
            x[(i, 0)] = cr(0.0);
            x[(i, 1)] = cr(0.0);
        }
        let t = rebuild_odd(&x, &form);
        let rep = polar_relation_check(&t, &form).unwrap();
        assert!(rep.holds, "kernel case: {rep:?}");
    }

    #[test]
    fn kramers_eigenvalue_multiplicities() {
        for trial in 0..40 {
            let n = 2 * (1 + (trial % 8));
            let form = standard_odd(n).unwrap();
            let raw = random_complex(&mut rng_for(49, trial as u64), n, n);
            let t = odd_symmetrize(&raw, &form).unwrap();
            for size in eigenvalue_cluster_sizes(&t, 1e-6).unwrap() {
                assert_eq!(size % 2, 0, "odd eigenvalue multiplicity at n={n}");
            }
            for size in singular_value_cluster_sizes(&t, 1e-6).unwrap() {
                assert_eq!(size % 2, 0, "odd singular multiplicity at n={n}");
            }
        }
    }

    #[test]
    fn compact_shadow_generalized_kernels_even() {
        // for random odd symmetric K and a detected eigenvalue λ,
        // dim Ker((K−λ)^k) is even for k = 1, 2, 3
        let n = 8;
        let form = standard_odd(n).unwrap();
        let raw = random_complex(&mut rng_for(50, 0), n, n);
        let t = odd_symmetrize(&raw, &form).unwrap();
        let evals = crate::linalg::eigenvalues(&t).unwrap();
        let lambda = evals[0];
        for k in 1..=3 {
            let d = crate::linalg::generalized_kernel_dim(&t, lambda, k, 1e-6).unwrap();
            assert_eq!(d % 2, 0, "d_{k} odd");
        }
    }
}
