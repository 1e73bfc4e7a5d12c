//! Dense complex linear-algebra substrate: SVD with contract checks,
//! numerical rank/kernel at a declared relative tolerance, polar
//! decomposition, generalized kernel dimensions, and simultaneous
//! diagonalization of commuting Hermitian pairs.
//!
//! Exact kernel dimensions of the theory become numerical-rank decisions
//! here; every routine that makes one takes a relative tolerance
//! (`rel_tol`, defaulting to [`DEFAULT_REL_TOL`]) and reports the absolute
//! threshold it used.

#[cfg(test)]
use ndarray::prelude::*;
use ndarray_linalg::{Eig, Eigh, SVD, UPLO};

use crate::error::{OddsymError, Result};
use crate::mat::*;

/// Default relative numerical-rank threshold: σ below
/// `DEFAULT_REL_TOL · σ_max` count as kernel.
pub const DEFAULT_REL_TOL: f64 = 1e-9;

/// Full singular value decomposition `m = u · diag(sigma) · vh`.
#[derive(Debug, Clone)]
pub struct Svd {
    pub u: CMatrix,
    /// Nonincreasing, nonnegative.
    pub sigma: Vec<f64>,
    /// `v^adjoint`; rows are conjugated right singular vectors.
    pub vh: CMatrix,
}

impl Svd {
    pub fn sigma_max(&self) -> f64 {
        self.sigma.first().copied().unwrap_or(0.0)
    }

    /// Right singular vector for `sigma[i]` (column vector).
    pub fn right_vector(&self, i: usize) -> CVector {
        self.vh.row(i).mapv(|z| z.conj())
    }

    /// Left singular vector for `sigma[i]`.
    pub fn left_vector(&self, i: usize) -> CVector {
        self.u.column(i).to_owned()
    }
}

/// SVD with finite-entry precondition and full U, V factors.
pub fn svd(m: &CMatrix) -> Result<Svd> {
    if !all_finite(m) {
        return Err(OddsymError::contract("svd: matrix has non-finite entries"));
    }
    let (u, s, vh) = m.svd(true, true).map_err(|e| {
        OddsymError::unresolved(format!("svd did not converge: {e}"))
    })?;
    Ok(Svd {
        u: u.expect("svd requested U"),
        sigma: s.to_vec(),
        vh: vh.expect("svd requested V^H"),
    })
}

/// Numerical rank and kernel data of a matrix.
#[derive(Debug, Clone)]
pub struct RankResult {
    pub rank: usize,
    /// All singular values, nonincreasing.
    pub singular_values: Vec<f64>,
    /// Orthonormal columns spanning the numerical kernel (cols = ncols − rank).
    pub kernel_basis: CMatrix,
    /// Absolute threshold `rel_tol · σ_max` that was applied.
    pub tolerance_used: f64,
}

impl RankResult {
    pub fn kernel_dim(&self) -> usize {
        self.kernel_basis.ncols()
    }

    /// Smallest retained singular value; `f64::INFINITY` when rank is 0.
    pub fn singular_margin(&self) -> f64 {
        if self.rank == 0 {
            f64::INFINITY
        } else {
            self.singular_values[self.rank - 1]
        }
    }
}

/// Rank decision at `rel_tol`: `rank = #{σ_i > rel_tol · σ_max}`, kernel
/// spanned by the right singular vectors of the remaining σ.
pub fn numerical_kernel(m: &CMatrix, rel_tol: f64) -> Result<RankResult> {
    if !(rel_tol > 0.0 && rel_tol < 1.0) {
        return Err(OddsymError::contract(format!(
            "numerical_kernel: rel_tol must lie in (0, 1), got {rel_tol}"
        )));
    }
    let dec = svd(m)?;
    let smax = dec.sigma_max();
    let tol = rel_tol * smax;
    let rank = dec.sigma.iter().filter(|&&s| s > tol).count();
    let n = m.ncols();
    let mut kernel = zeros(n, n - rank);
    for (k, i) in (rank..n).enumerate() {
        if i < dec.vh.nrows() {
            kernel.column_mut(k).assign(&dec.right_vector(i));
        }
    }
    Ok(RankResult {
        rank,
        singular_values: dec.sigma,
        kernel_basis: kernel,
        tolerance_used: tol,
    })
}

/// Polar decomposition `t = v · p` with `p = (t^* t)^{1/2}` and `v` the
/// partial isometry whose kernel matches the numerical kernel of `t`.
pub fn polar_decompose(t: &CMatrix) -> Result<(CMatrix, CMatrix)> {
    polar_decompose_with_tol(t, DEFAULT_REL_TOL)
}

pub fn polar_decompose_with_tol(t: &CMatrix, rel_tol: f64) -> Result<(CMatrix, CMatrix)> {
    if !is_square(t) {
        return Err(OddsymError::contract("polar_decompose: matrix must be square"));
    }
    let dec = svd(t)?;
    let tol = rel_tol * dec.sigma_max();
    let n = t.nrows();
    // v = u · d · vh with d zeroing sub-threshold directions
    let mut d = zeros(n, n);
    for (i, &s) in dec.sigma.iter().enumerate() {
        d[(i, i)] = if s > tol { cr(1.0) } else { cr(0.0) };
    }
    let v = mul3(&dec.u, &d, &dec.vh);
    // p = vh^* · Σ · vh keeps the full singular data
    let mut sig = zeros(n, n);
    for (i, &s) in dec.sigma.iter().enumerate() {
        sig[(i, i)] = cr(s);
    }
    let p = mul3(&adjoint(&dec.vh), &sig, &dec.vh);
    Ok((v, p))
}

/// dim Ker((t − λ)^k) via the numerical kernel of the scaled k-th power.
pub fn generalized_kernel_dim(t: &CMatrix, lambda: C64, k: usize, rel_tol: f64) -> Result<usize> {
    if !is_square(t) {
        return Err(OddsymError::contract("generalized_kernel_dim: square matrix required"));
    }
    if k == 0 {
        return Err(OddsymError::contract("generalized_kernel_dim: k must be >= 1"));
    }
    let n = t.nrows();
    let mut m = t.clone();
    for i in 0..n {
        m[(i, i)] -= lambda;
    }
    let scale = fro_norm(&m);
    if scale == 0.0 {
        return Ok(n);
    }
    // only the nullspace matters, so normalize before powering
    let m = m.mapv(|z| z / scale);
    let mut pw = m.clone();
    for _ in 1..k {
        pw = pw.dot(&m);
    }
    Ok(numerical_kernel(&pw, rel_tol)?.kernel_dim())
}

/// Eigenvalues of a general complex matrix.
pub fn eigenvalues(m: &CMatrix) -> Result<Vec<C64>> {
    let (w, _) = m.eig()?;
    Ok(w.to_vec())
}

/// Hermitian eigendecomposition; eigenvalues ascending, columns of the
/// returned matrix are orthonormal eigenvectors.
pub fn eigh(m: &CMatrix) -> Result<(Vec<f64>, CMatrix)> {
    let (w, v) = hermitize(m).eigh(UPLO::Lower)?;
    // the complex backend hands back conj(V); columns of the conjugate are
    // the eigenvectors (m = v diag(w) v^*), which unit tests pin down
    Ok((w.to_vec(), v.mapv(|z| z.conj())))
}

/// Group sorted indices of `vals` into clusters separated by more than `gap`.
pub fn cluster_indices(vals: &[f64], gap: f64) -> Vec<Vec<usize>> {
    let mut order: Vec<usize> = (0..vals.len()).collect();
    order.sort_by(|&a, &b| vals[a].total_cmp(&vals[b]));
    let mut out: Vec<Vec<usize>> = Vec::new();
    for i in order {
        match out.last_mut() {
            Some(cluster) if (vals[i] - vals[*cluster.last().unwrap()]).abs() <= gap => {
                cluster.push(i)
            }
            _ => out.push(vec![i]),
        }
    }
    out
}

/// Joint eigendecomposition of two commuting Hermitian matrices.
///
/// Diagonalizes `h1`, then rediagonalizes the compression of `h2` inside
/// each `h1` eigenvalue cluster. Returns `(pairs, q)` with `q` unitary and
/// `q^* h1 q`, `q^* h2 q` both diagonal with entries `pairs[j]`.
pub fn joint_eigh(h1: &CMatrix, h2: &CMatrix, cluster_gap: f64) -> Result<(Vec<(f64, f64)>, CMatrix)> {
    let n = h1.nrows();
    let (w1, mut q) = eigh(h1)?;
    let mut pairs = vec![(0.0, 0.0); n];
    for cluster in cluster_indices(&w1, cluster_gap) {
        let sub = gather_cols(&q, &cluster);
        let comp = mul3(&adjoint(&sub), h2, &sub);
        let (w2, s) = eigh(&comp)?;
        let refined = sub.dot(&s);
        for (k, &j) in cluster.iter().enumerate() {
            q.column_mut(j).assign(&refined.column(k));
            pairs[j] = (w1[j], w2[k]);
        }
    }
    Ok((pairs, q))
}

/// `‖Π_a − Π_b‖_F` for the orthogonal projections onto the column spans;
/// zero iff the subspaces agree.
pub fn subspace_distance(a: &CMatrix, b: &CMatrix) -> f64 {
    let pa = a.dot(&adjoint(a));
    let pb = b.dot(&adjoint(b));
    diff_norm(&pa, &pb)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{random_complex, rng_for};

    fn reconstruct(dec: &Svd, rows: usize, cols: usize) -> CMatrix {
        let mut sig = zeros(rows, cols);
        for (i, &s) in dec.sigma.iter().enumerate() {
            sig[(i, i)] = cr(s);
        }
        mul3(&dec.u, &sig, &dec.vh)
    }

    #[test]
    fn svd_identity() {
        let dec = svd(&identity(3)).unwrap();
        for &s in &dec.sigma {
            assert!((s - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn svd_diagonal_with_zero() {
        let m = array![[cr(2.0), cr(0.0)], [cr(0.0), cr(0.0)]];
        let dec = svd(&m).unwrap();
        assert!((dec.sigma[0] - 2.0).abs() < 1e-14);
        assert!(dec.sigma[1].abs() < 1e-14);
    }

    #[test]
    fn svd_reconstructs_random() {
        let m = random_complex(&mut rng_for(3, 0), 5, 5);
        let dec = svd(&m).unwrap();
        let r = reconstruct(&dec, 5, 5);
        assert!(diff_norm(&m, &r) <= 1e-12 * dec.sigma_max().max(1.0));
        // unitarity of factors
        let uu = dec.u.dot(&adjoint(&dec.u));
        let vv = dec.vh.dot(&adjoint(&dec.vh));
        assert!(diff_norm(&uu, &identity(5)) < 1e-12);
        assert!(diff_norm(&vv, &identity(5)) < 1e-12);
    }

    #[test]
    fn kernel_of_zero_matrix() {
        let r = numerical_kernel(&zeros(2, 2), 1e-9).unwrap();
        assert_eq!(r.rank, 0);
        assert_eq!(r.kernel_dim(), 2);
        assert_eq!(r.tolerance_used, 0.0);
    }

    #[test]
    fn kernel_below_threshold() {
        let m = array![[cr(1.0), cr(0.0)], [cr(0.0), cr(1e-15)]];
        let r = numerical_kernel(&m, 1e-9).unwrap();
        assert_eq!(r.rank, 1);
        assert_eq!(r.kernel_dim(), 1);
        // kernel vector annihilated to tolerance
        let v = r.kernel_basis.column(0).to_owned();
        let mv = m.dot(&v);
        assert!(vec_norm(&mv) <= r.tolerance_used * (1.0 + 1.0));
    }

    /// Truncated shifts: S_N ⊕ S_N^t has a kernel vector at each edge.
    #[test]
    fn kernel_of_truncated_shift_sum() {
        let n = 8;
        let mut s = zeros(n, n);
        for i in 0..n - 1 {
            s[(i, i + 1)] = cr(1.0);
        }
        let t = direct_sum(&s, &transpose(&s));
        let r = numerical_kernel(&t, 1e-9).unwrap();
        assert_eq!(r.kernel_dim(), 2);
    }

    #[test]
    fn kernel_scale_invariant() {
        let m = {
            let g = random_complex(&mut rng_for(4, 0), 6, 6);
            // plant a 2-dim kernel
            let mut d = zeros(6, 6);
            for i in 0..4 {
                d[(i, i)] = cr(1.0 + i as f64);
            }
            let h = random_complex(&mut rng_for(4, 1), 6, 6);
            g.dot(&d).dot(&h)
        };
        let base = numerical_kernel(&m, 1e-9).unwrap().kernel_dim();
        for scale in [1e-3, 1.0, 1e3] {
            let scaled = m.mapv(|z| z * scale);
            assert_eq!(numerical_kernel(&scaled, 1e-9).unwrap().kernel_dim(), base);
        }
    }

    #[test]
    fn polar_of_unitary_and_diagonal() {
        // unitary input: v = input, p = id
        let u = array![[cr(0.0), cr(-1.0)], [cr(1.0), cr(0.0)]];
        let (v, p) = polar_decompose(&u).unwrap();
        assert!(diff_norm(&v, &u) < 1e-12);
        assert!(diff_norm(&p, &identity(2)) < 1e-12);

        let d = array![[cr(2.0), cr(0.0)], [cr(0.0), cr(0.0)]];
        let (v, p) = polar_decompose(&d).unwrap();
        assert!(diff_norm(&v, &array![[cr(1.0), cr(0.0)], [cr(0.0), cr(0.0)]]) < 1e-12);
        assert!(diff_norm(&p, &d) < 1e-12);
    }

    #[test]
    fn polar_reconstructs_invertible() {
        let m = random_complex(&mut rng_for(5, 0), 4, 4);
        let (v, p) = polar_decompose(&m).unwrap();
        assert!(diff_norm(&v.dot(&p), &m) <= 1e-10 * fro_norm(&m));
        assert!(diff_norm(&v.dot(&adjoint(&v)), &identity(4)) < 1e-10);
        let (w, _) = eigh(&p).unwrap();
        assert!(w.iter().all(|&x| x > 0.0));
    }

    #[test]
    fn generalized_kernel_jordan() {
        // J2(0) ⊕ J2(0)
        let mut m = zeros(4, 4);
        m[(0, 1)] = cr(1.0);
        m[(2, 3)] = cr(1.0);
        assert_eq!(generalized_kernel_dim(&m, cr(0.0), 1, 1e-9).unwrap(), 2);
        assert_eq!(generalized_kernel_dim(&m, cr(0.0), 2, 1e-9).unwrap(), 4);
        assert_eq!(generalized_kernel_dim(&m, cr(0.0), 3, 1e-9).unwrap(), 4);
    }

    #[test]
    fn generalized_kernel_scalar_matrix() {
        let a = c(1.3, -0.4);
        let m = array![[a, cr(0.0)], [cr(0.0), a]];
        assert_eq!(generalized_kernel_dim(&m, a, 1, 1e-9).unwrap(), 2);
    }

    #[test]
    fn eigh_columns_are_eigenvectors() {
        let g = random_complex(&mut rng_for(9, 0), 5, 5);
        let h = hermitize(&g.dot(&adjoint(&g)));
        let (w, v) = eigh(&h).unwrap();
        for k in 0..5 {
            let col = v.column(k).to_owned();
            let r = &h.dot(&col) - &col.mapv(|z| z * cr(w[k]));
            assert!(vec_norm(&r) < 1e-10 * (1.0 + w[4].abs()), "column {k} not an eigenvector");
        }
        // reconstruction
        let mut d = zeros(5, 5);
        for (i, &x) in w.iter().enumerate() {
            d[(i, i)] = cr(x);
        }
        assert!(diff_norm(&mul3(&v, &d, &adjoint(&v)), &h) < 1e-10 * (1.0 + w[4].abs()));
    }

    #[test]
    fn joint_eigh_commuting_pair() {
        // build commuting Hermitians sharing an eigenbasis with a degeneracy
        let mut rng = rng_for(8, 0);
        let g = random_complex(&mut rng, 4, 4);
        let (_, q) = eigh(&(g.dot(&adjoint(&g)))).unwrap();
        let d1 = Array2::from_diag(&arr1(&[cr(1.0), cr(1.0), cr(2.0), cr(3.0)]));
        let d2 = Array2::from_diag(&arr1(&[cr(5.0), cr(-1.0), cr(0.5), cr(0.5)]));
        let h1 = mul3(&q, &d1, &adjoint(&q));
        let h2 = mul3(&q, &d2, &adjoint(&q));
        let (pairs, w) = joint_eigh(&h1, &h2, 1e-8).unwrap();
        // w diagonalizes both
        let r1 = mul3(&adjoint(&w), &h1, &w);
        let r2 = mul3(&adjoint(&w), &h2, &w);
        for i in 0..4 {
            for j in 0..4 {
                if i != j {
                    assert!(r1[(i, j)].norm() < 1e-9, "h1 off-diagonal");
                    assert!(r2[(i, j)].norm() < 1e-9, "h2 off-diagonal");
                }
            }
            assert!((r1[(i, i)].re - pairs[i].0).abs() < 1e-9);
            assert!((r2[(i, i)].re - pairs[i].1).abs() < 1e-9);
        }
    }
}
