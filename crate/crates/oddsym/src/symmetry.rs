//! Real unitary symmetry forms `I` (I² = −1) and `J` (J² = +1), their
//! normal forms, the odd/even/quaternionic predicates, symmetrizers, the
//! skew-symmetric correspondence and the Kramers pairing construction.
//!
//! Complex conjugation is entrywise in the computational basis and every
//! transpose is taken w.r.t. that same basis, so all predicates are
//! deterministic functions of the matrix entries.

use ndarray::prelude::*;

use crate::error::{OddsymError, Result};
use crate::linalg::{eigh, subspace_distance};
use crate::mat::*;

/// Structural tolerance a form's defining identities must meet.
pub const FORM_TOL: f64 = 1e-12;

/// Default relative tolerance for the symmetry predicates.
pub const PREDICATE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum FormKind {
    /// `I² = −1` (real skew-adjoint unitary); requires even dimension.
    Odd,
    /// `J² = +1` (real symmetric unitary).
    Even,
}

/// A real unitary squaring to ∓1, carried with its species tag.
#[derive(Debug, Clone)]
pub struct SymmetryForm {
    kind: FormKind,
    mat: CMatrix,
}

impl SymmetryForm {
    /// Validates reality, unitarity, the square identity and (odd case)
    /// even dimension before accepting the matrix.
    pub fn new(kind: FormKind, mat: CMatrix) -> Result<Self> {
        if !is_square(&mat) {
            return Err(OddsymError::contract("symmetry form must be square"));
        }
        let n = mat.nrows();
        if kind == FormKind::Odd && n % 2 != 0 {
            return Err(OddsymError::contract(format!(
                "odd symmetry form needs even dimension, got {n}"
            )));
        }
        if max_abs_imag(&mat) > FORM_TOL {
            return Err(OddsymError::contract("symmetry form must be real"));
        }
        let uu = mat.dot(&adjoint(&mat));
        if diff_norm(&uu, &identity(n)) > FORM_TOL * (n as f64).sqrt().max(1.0) {
            return Err(OddsymError::contract("symmetry form must be unitary"));
        }
        let sq = mat.dot(&mat);
        let target = match kind {
            FormKind::Odd => identity(n).mapv(|z| -z),
            FormKind::Even => identity(n),
        };
        if diff_norm(&sq, &target) > FORM_TOL * (n as f64).sqrt().max(1.0) {
            return Err(OddsymError::contract(match kind {
                FormKind::Odd => "odd form must satisfy I^2 = -1",
                FormKind::Even => "even form must satisfy J^2 = +1",
            }));
        }
        Ok(SymmetryForm { kind, mat })
    }

    pub fn kind(&self) -> FormKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.mat
    }

    /// `F^adjoint`; for these real unitaries this equals `F^t`.
    pub fn adjoint_matrix(&self) -> CMatrix {
        adjoint(&self.mat)
    }

    /// Block-diagonal extension of the form over `copies` fibers.
    pub fn repeat(&self, copies: usize) -> SymmetryForm {
        SymmetryForm {
            kind: self.kind,
            mat: block_diag_repeat(&self.mat, copies),
        }
    }

    /// Direct sum of two forms of the same kind.
    pub fn direct_sum(&self, other: &SymmetryForm) -> Result<SymmetryForm> {
        if self.kind != other.kind {
            return Err(OddsymError::contract("direct sum of mismatched form kinds"));
        }
        Ok(SymmetryForm {
            kind: self.kind,
            mat: direct_sum(&self.mat, &other.mat),
        })
    }
}

/// The normal form `[[0, −1],[1, 0]]` in dim/2 blocks.
pub fn standard_odd(dim: usize) -> Result<SymmetryForm> {
    if dim % 2 != 0 || dim == 0 {
        return Err(OddsymError::contract(format!(
            "standard odd form needs positive even dimension, got {dim}"
        )));
    }
    let h = dim / 2;
    let mut m = zeros(dim, dim);
    for i in 0..h {
        m[(i, h + i)] = cr(-1.0);
        m[(h + i, i)] = cr(1.0);
    }
    SymmetryForm::new(FormKind::Odd, m)
}

/// The normal form `diag(+1 × n_plus, −1 × (dim − n_plus))`.
pub fn standard_even(dim: usize, n_plus: usize) -> Result<SymmetryForm> {
    if n_plus > dim || dim == 0 {
        return Err(OddsymError::contract("standard even form: n_plus must be <= dim"));
    }
    let mut m = zeros(dim, dim);
    for i in 0..dim {
        m[(i, i)] = if i < n_plus { cr(1.0) } else { cr(-1.0) };
    }
    SymmetryForm::new(FormKind::Even, m)
}

/// Result of a symmetry predicate: the verdict plus the residual that
/// produced it, so callers can tighten the tolerance afterwards.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct SymmetryCheck {
    pub holds: bool,
    pub residual: f64,
    pub tolerance: f64,
}

fn relative_check(residual: f64, scale: f64, tol: f64) -> SymmetryCheck {
    let tolerance = tol * (1.0 + scale);
    SymmetryCheck {
        holds: residual <= tolerance,
        residual,
        tolerance,
    }
}

/// `I^* T^t I = T` up to `tol · (1 + ‖T‖)`.
pub fn is_odd_symmetric(t: &CMatrix, form: &SymmetryForm, tol: f64) -> Result<SymmetryCheck> {
    if form.kind() != FormKind::Odd {
        return Err(OddsymError::contract("is_odd_symmetric requires an odd form"));
    }
    if t.nrows() != form.dim() || !is_square(t) {
        return Err(OddsymError::contract("is_odd_symmetric: dimension mismatch"));
    }
    let lhs = mul3(&form.adjoint_matrix(), &transpose(t), form.matrix());
    Ok(relative_check(diff_norm(&lhs, t), fro_norm(t), tol))
}

/// `J T^t J = T` up to `tol · (1 + ‖T‖)`.
pub fn is_even_symmetric(t: &CMatrix, form: &SymmetryForm, tol: f64) -> Result<SymmetryCheck> {
    if form.kind() != FormKind::Even {
        return Err(OddsymError::contract("is_even_symmetric requires an even form"));
    }
    if t.nrows() != form.dim() || !is_square(t) {
        return Err(OddsymError::contract("is_even_symmetric: dimension mismatch"));
    }
    let lhs = mul3(form.matrix(), &transpose(t), form.matrix());
    Ok(relative_check(diff_norm(&lhs, t), fro_norm(t), tol))
}

/// `I^* conj(T) I = T` up to `tol · (1 + ‖T‖)`.
pub fn is_quaternionic(t: &CMatrix, form: &SymmetryForm, tol: f64) -> Result<SymmetryCheck> {
    if form.kind() != FormKind::Odd {
        return Err(OddsymError::contract("is_quaternionic requires an odd form"));
    }
    if t.nrows() != form.dim() || !is_square(t) {
        return Err(OddsymError::contract("is_quaternionic: dimension mismatch"));
    }
    let lhs = mul3(&form.adjoint_matrix(), &conj(t), form.matrix());
    Ok(relative_check(diff_norm(&lhs, t), fro_norm(t), tol))
}

/// Linear idempotent onto the odd symmetric operators: `(I^* A^t I + A)/2`.
pub fn odd_symmetrize(a: &CMatrix, form: &SymmetryForm) -> Result<CMatrix> {
    if form.kind() != FormKind::Odd {
        return Err(OddsymError::contract("odd_symmetrize requires an odd form"));
    }
    let sym = mul3(&form.adjoint_matrix(), &transpose(a), form.matrix());
    Ok((&sym + a).mapv(|z| 0.5 * z))
}

/// Even analogue of [`odd_symmetrize`]: `(J A^t J + A)/2`.
pub fn even_symmetrize(a: &CMatrix, form: &SymmetryForm) -> Result<CMatrix> {
    if form.kind() != FormKind::Even {
        return Err(OddsymError::contract("even_symmetrize requires an even form"));
    }
    let sym = mul3(form.matrix(), &transpose(a), form.matrix());
    Ok((&sym + a).mapv(|z| 0.5 * z))
}

/// Quaternionic symmetrizer `(I^* conj(A) I + A)/2`.
pub fn quaternionic_symmetrize(a: &CMatrix, form: &SymmetryForm) -> Result<CMatrix> {
    if form.kind() != FormKind::Odd {
        return Err(OddsymError::contract("quaternionic_symmetrize requires an odd form"));
    }
    let sym = mul3(&form.adjoint_matrix(), &conj(a), form.matrix());
    Ok((&sym + a).mapv(|z| 0.5 * z))
}

/// `B = I T` is skew-symmetric iff `T` is odd symmetric; inverse `T = I^* B`.
pub fn skew_correspondence(t: &CMatrix, form: &SymmetryForm) -> Result<CMatrix> {
    let check = is_odd_symmetric(t, form, PREDICATE_TOL)?;
    if !check.holds {
        return Err(OddsymError::contract(format!(
            "skew_correspondence: input not odd symmetric (residual {:.3e})",
            check.residual
        )));
    }
    Ok(form.matrix().dot(t))
}

/// Inverse of [`skew_correspondence`].
pub fn odd_from_skew(b: &CMatrix, form: &SymmetryForm) -> CMatrix {
    form.adjoint_matrix().dot(b)
}

/// `T = i I A` for real skew-adjoint `A`; the result is odd symmetric and
/// satisfies `conj(T) = −T` with the same kernel as `A`.
pub fn real_skew_to_odd(a: &CMatrix, form: &SymmetryForm) -> Result<CMatrix> {
    if max_abs_imag(a) > 1e-10 * (1.0 + fro_norm(a)) {
        return Err(OddsymError::contract("real_skew_to_odd: matrix must be real"));
    }
    let skew_res = diff_norm(&adjoint(a), &a.mapv(|z| -z));
    if skew_res > 1e-10 * (1.0 + fro_norm(a)) {
        return Err(OddsymError::contract("real_skew_to_odd: matrix must be skew-adjoint"));
    }
    Ok(form.matrix().dot(a).mapv(|z| z * c(0.0, 1.0)))
}

/// Per-column phase convention: first component of magnitude above
/// `0.1 · max` is rotated to the positive real axis.
fn fix_column_phases(m: &mut CMatrix) {
    for mut col in m.columns_mut() {
        let maxmag = col.iter().map(|z| z.norm()).fold(0.0, f64::max);
        if maxmag == 0.0 {
            continue;
        }
        let lead = col.iter().find(|z| z.norm() > 0.1 * maxmag).copied();
        if let Some(z) = lead {
            let phase = z / z.norm();
            let rot = phase.conj();
            col.mapv_inplace(|x| x * rot);
        }
    }
}

/// Real orthogonal `O` with `O^t F O` in normal form, following the
/// eigenbasis-plus-Cayley construction: in the odd case the +i eigenbasis
/// `v` yields `O = [conj(v) | v] · C` with the Cayley block
/// `C = (1/√2)[[1, −i],[1, i]]`.
pub fn normalize_form(form: &SymmetryForm) -> Result<(CMatrix, SymmetryForm)> {
    let n = form.dim();
    match form.kind() {
        FormKind::Odd => {
            // I v = i v  ⟺  (iI) v = −v
            let herm = form.matrix().mapv(|z| z * c(0.0, 1.0));
            let (w, mut vecs) = eigh(&herm)?;
            let minus: Vec<usize> = (0..n).filter(|&i| w[i] < 0.0).collect();
            if minus.len() != n / 2 {
                return Err(OddsymError::contract(format!(
                    "normalize_form: ±i eigenspaces of I have dimensions {} and {}",
                    minus.len(),
                    n - minus.len()
                )));
            }
            fix_column_phases(&mut vecs);
            let v = gather_cols(&vecs, &minus);
            let h = n / 2;
            let mut u = zeros(n, n);
            u.slice_mut(s![.., ..h]).assign(&conj(&v));
            u.slice_mut(s![.., h..]).assign(&v);
            // O = U C, real because conjugation swaps the two column groups
            let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
            let mut cayley = zeros(n, n);
            for i in 0..h {
                cayley[(i, i)] = cr(inv_sqrt2);
                cayley[(i, h + i)] = c(0.0, -inv_sqrt2);
                cayley[(h + i, i)] = cr(inv_sqrt2);
                cayley[(h + i, h + i)] = c(0.0, inv_sqrt2);
            }
            let o = u.dot(&cayley);
            let imag = max_abs_imag(&o);
            if imag > 1e-10 {
                return Err(OddsymError::unresolved(format!(
                    "normalize_form: assembled orthogonal has imaginary residue {imag:.3e}"
                )));
            }
            let o = o.mapv(|z| cr(z.re));
            Ok((o, standard_odd(n)?))
        }
        FormKind::Even => {
            // J is real symmetric; diagonalize over the reals
            let real: Array2<f64> = form.matrix().mapv(|z| z.re);
            let real = (&real + &real.t()).mapv(|x| 0.5 * x);
            let (w, vecs) = ndarray_linalg::Eigh::eigh(&real, ndarray_linalg::UPLO::Lower)
                .map_err(OddsymError::Linalg)?;
            // +1 eigenvectors first, then −1 (eigh is ascending)
            let mut order: Vec<usize> = (0..n).collect();
            order.sort_by(|&a, &b| w[b].total_cmp(&w[a]));
            let n_plus = (0..n).filter(|&i| w[i] > 0.0).count();
            let mut o = zeros(n, n);
            for (k, &j) in order.iter().enumerate() {
                for i in 0..n {
                    o[(i, k)] = cr(vecs[(i, j)]);
                }
            }
            fix_column_phases(&mut o);
            Ok((o, standard_even(n, n_plus)?))
        }
    }
}

/// Orthonormal basis of a conjugation-invariant subspace reordered into
/// Kramers pairs `(φ_k, I conj(φ_k))`, by the iterative
/// orthogonal-complement construction. Columns of the result alternate
/// `φ_1, I conj(φ_1), φ_2, …`; odd input dimension is a certified
/// impossibility.
pub fn kramers_pairing_basis(span: &CMatrix, form: &SymmetryForm) -> Result<CMatrix> {
    if form.kind() != FormKind::Odd {
        return Err(OddsymError::contract("kramers_pairing_basis requires an odd form"));
    }
    let m = span.ncols();
    let n = span.nrows();
    if n != form.dim() {
        return Err(OddsymError::contract("kramers_pairing_basis: dimension mismatch"));
    }
    if m == 0 {
        return Ok(zeros(n, 0));
    }
    // invariance of the span under ψ ↦ I conj(ψ)
    let projector = span.dot(&adjoint(span));
    for col in span.columns() {
        let mapped = form.matrix().dot(&conj_vec(&col.to_owned()));
        let inside = projector.dot(&mapped);
        let outside = &mapped - &inside;
        if vec_norm(&outside) > 1e-8 {
            return Err(OddsymError::contract(format!(
                "kramers_pairing_basis: span not invariant under I·conj (leak {:.3e})",
                vec_norm(&outside)
            )));
        }
    }
    if m % 2 != 0 {
        return Err(OddsymError::contract(format!(
            "kramers_pairing_basis: invariant span has odd dimension {m}; \
             no quaternionic pairing exists (parity obstruction certified)"
        )));
    }

    let mut remaining = span.clone();
    let mut out = zeros(n, m);
    let mut filled = 0;
    while remaining.ncols() > 0 {
        let phi = remaining.column(0).to_owned();
        let mut psi = form.matrix().dot(&conj_vec(&phi));
        // ψ is orthogonal to φ exactly (skew quadratic form); project into
        // the remaining span to scrub rounding, then renormalize
        let proj = remaining.dot(&adjoint(&remaining));
        psi = proj.dot(&psi);
        let overlap = phi
            .iter()
            .zip(psi.iter())
            .map(|(a, b)| a.conj() * b)
            .sum::<C64>();
        psi = &psi - &phi.mapv(|z| z * overlap);
        let nrm = vec_norm(&psi);
        if nrm < 0.9 {
            return Err(OddsymError::contract(
                "kramers_pairing_basis: partner vector collapsed; span not invariant",
            ));
        }
        psi.mapv_inplace(|z| z / nrm);
        out.column_mut(filled).assign(&phi);
        out.column_mut(filled + 1).assign(&psi);
        filled += 2;
        // deflate span(φ, ψ) from the remaining space
        let mut kept: Vec<CVector> = Vec::new();
        for col in remaining.columns() {
            let v = col.to_owned();
            let a = phi.iter().zip(v.iter()).map(|(x, y)| x.conj() * y).sum::<C64>();
            let b = psi.iter().zip(v.iter()).map(|(x, y)| x.conj() * y).sum::<C64>();
            let mut w = &v - &phi.mapv(|z| z * a);
            w = &w - &psi.mapv(|z| z * b);
            let nw = vec_norm(&w);
            if nw > 1e-6 {
                kept.push(w.mapv(|z| z / nw));
            }
        }
        // re-orthonormalize the kept vectors (modified Gram-Schmidt)
        let mut basis: Vec<CVector> = Vec::new();
        for mut v in kept {
            for b in &basis {
                let ov = b.iter().zip(v.iter()).map(|(x, y)| x.conj() * y).sum::<C64>();
                v = &v - &b.mapv(|z| z * ov);
            }
            let nv = vec_norm(&v);
            if nv > 1e-6 {
                basis.push(v.mapv(|z| z / nv));
            }
        }
        let mut next = zeros(n, basis.len());
        for (k, b) in basis.iter().enumerate() {
            next.column_mut(k).assign(b);
        }
        remaining = next;
    }
    if filled != m {
        return Err(OddsymError::unresolved(format!(
            "kramers_pairing_basis: produced {filled} of {m} vectors"
        )));
    }
    // certify orthonormality
    let gram = adjoint(&out).dot(&out);
    let res = diff_norm(&gram, &identity(m));
    if res > 1e-8 {
        return Err(OddsymError::unresolved(format!(
            "kramers_pairing_basis: Gram residual {res:.3e}"
        )));
    }
    Ok(out)
}

/// `Ker(T^*) = I · conj(Ker(T))` as subspaces, the kernel/cokernel pairing.
pub fn kernel_cokernel_pairing_distance(
    t: &CMatrix,
    form: &SymmetryForm,
    rel_tol: f64,
) -> Result<f64> {
    let ker = crate::linalg::numerical_kernel(t, rel_tol)?;
    let coker = crate::linalg::numerical_kernel(&adjoint(t), rel_tol)?;
    let mapped = form.matrix().dot(&conj(&ker.kernel_basis));
    Ok(subspace_distance(&mapped, &coker.kernel_basis))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::numerical_kernel;
    use crate::rng::{random_complex, random_real, rng_for};
    use ndarray_linalg::QR;

    fn random_odd_symmetric(seed: u64, n: usize) -> (CMatrix, SymmetryForm) {
        let form = standard_odd(n).unwrap();
        let a = random_complex(&mut rng_for(seed, 0), n, n);
        (odd_symmetrize(&a, &form).unwrap(), form)
    }

    #[test]
    fn standard_odd_shape() {
        let i2 = standard_odd(2).unwrap();
        assert_eq!(i2.matrix()[(0, 1)], cr(-1.0));
        assert_eq!(i2.matrix()[(1, 0)], cr(1.0));
        let i6 = standard_odd(6).unwrap();
        let sq = i6.matrix().dot(i6.matrix());
        assert!(diff_norm(&sq, &identity(6).mapv(|z| -z)) < 1e-14);
        assert!(standard_odd(3).is_err());
    }

    #[test]
    fn scalar_is_odd_symmetric_in_dim_two() {
        let form = standard_odd(2).unwrap();
        let t = identity(2).mapv(|z| z * c(0.7, -0.2));
        assert!(is_odd_symmetric(&t, &form, 1e-9).unwrap().holds);
        let d = array![[cr(1.0), cr(0.0)], [cr(0.0), cr(2.0)]];
        let chk = is_odd_symmetric(&d, &form, 1e-9).unwrap();
        assert!(!chk.holds);
        // residual is ‖diag(2,1) − diag(1,2)‖ = √2
        assert!((chk.residual - 2.0_f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn closure_factor_form() {
        let form = standard_odd(6).unwrap();
        let a = random_complex(&mut rng_for(21, 0), 6, 6);
        let t = mul3(&form.adjoint_matrix(), &transpose(&a), &form.matrix().dot(&a));
        assert!(is_odd_symmetric(&t, &form, 1e-9).unwrap().holds);
    }

    #[test]
    fn even_predicate() {
        let j = standard_even(3, 3).unwrap();
        let sym = array![
            [cr(1.0), c(0.5, 0.1), cr(0.0)],
            [c(0.5, 0.1), cr(2.0), c(0.0, 1.0)],
            [cr(0.0), c(0.0, 1.0), cr(-1.0)]
        ];
        assert!(is_even_symmetric(&sym, &j, 1e-9).unwrap().holds);
        let anti = array![[cr(0.0), cr(1.0)], [cr(-1.0), cr(0.0)]];
        let j2 = standard_even(2, 2).unwrap();
        assert!(!is_even_symmetric(&anti, &j2, 1e-9).unwrap().holds);
        // Theorem-8-style closure
        let a = random_complex(&mut rng_for(22, 0), 3, 3);
        let t = mul3(j.matrix(), &transpose(&a), &j.matrix().dot(&a));
        assert!(is_even_symmetric(&t, &j, 1e-9).unwrap().holds);
    }

    #[test]
    fn quaternionic_predicate() {
        let form = standard_odd(4).unwrap();
        assert!(is_quaternionic(&identity(4), &form, 1e-9).unwrap().holds);
        assert!(is_quaternionic(form.matrix(), &form, 1e-9).unwrap().holds);
        let q = random_complex(&mut rng_for(23, 0), 4, 4);
        let t = quaternionic_symmetrize(&q, &form).unwrap();
        assert!(is_quaternionic(&t, &form, 1e-9).unwrap().holds);
    }

    #[test]
    fn symmetrizer_is_idempotent_projection() {
        let form = standard_odd(4).unwrap();
        let (t, _) = random_odd_symmetric(24, 4);
        let again = odd_symmetrize(&t, &form).unwrap();
        assert!(diff_norm(&again, &t) < 1e-12 * (1.0 + fro_norm(&t)));
        // direct computation in dim 2
        let f2 = standard_odd(2).unwrap();
        let d = array![[cr(1.0), cr(0.0)], [cr(0.0), cr(2.0)]];
        let s = odd_symmetrize(&d, &f2).unwrap();
        assert!(diff_norm(&s, &identity(2).mapv(|z| z * cr(1.5))) < 1e-14);
        let a = random_complex(&mut rng_for(25, 0), 4, 4);
        let once = odd_symmetrize(&a, &form).unwrap();
        let twice = odd_symmetrize(&once, &form).unwrap();
        assert!(diff_norm(&once, &twice) < 1e-12 * (1.0 + fro_norm(&once)));
    }

    #[test]
    fn skew_correspondence_round_trip() {
        let form = standard_odd(2).unwrap();
        let b = skew_correspondence(&identity(2), &form).unwrap();
        assert!(diff_norm(&b, form.matrix()) < 1e-14);
        let (t, f6) = random_odd_symmetric(26, 6);
        let b = skew_correspondence(&t, &f6).unwrap();
        let skew_res = diff_norm(&transpose(&b), &b.mapv(|z| -z));
        assert!(skew_res <= 1e-10 * (1.0 + fro_norm(&b)));
        let back = odd_from_skew(&b, &f6);
        assert!(diff_norm(&back, &t) < 1e-12 * (1.0 + fro_norm(&t)));
    }

    #[test]
    fn spectra_of_t_and_b_differ() {
        // eigenvalue sets of T and B = IT are generically disjoint
        let (t, form) = random_odd_symmetric(27, 6);
        let b = skew_correspondence(&t, &form).unwrap();
        let et = crate::linalg::eigenvalues(&t).unwrap();
        let eb = crate::linalg::eigenvalues(&b).unwrap();
        let min_gap = et
            .iter()
            .map(|x| eb.iter().map(|y| (x - y).norm()).fold(f64::INFINITY, f64::min))
            .fold(f64::INFINITY, f64::min);
        assert!(min_gap > 1e-6, "spectra unexpectedly overlap");
    }

    #[test]
    fn normalize_form_recovers_standard_odd() {
        let n = 6;
        let std_form = standard_odd(n).unwrap();
        // conjugate by a random real orthogonal
        let g = random_real(&mut rng_for(28, 0), n, n);
        let (q, _) = g.qr().unwrap();
        let conjugated = mul3(&q, std_form.matrix(), &transpose(&q));
        let form = SymmetryForm::new(FormKind::Odd, conjugated).unwrap();
        let (o, std_back) = normalize_form(&form).unwrap();
        // O real orthogonal
        assert!(max_abs_imag(&o) < 1e-10);
        assert!(diff_norm(&o.dot(&adjoint(&o)), &identity(n)) < 1e-10);
        let brought = mul3(&transpose(&o), form.matrix(), &o);
        assert!(diff_norm(&brought, std_back.matrix()) < 1e-10);
        // round trip
        let back = mul3(&o, std_back.matrix(), &transpose(&o));
        assert!(diff_norm(&back, form.matrix()) < 1e-9);
    }

    #[test]
    fn normalize_form_even_case() {
        let j = SymmetryForm::new(
            FormKind::Even,
            array![
                [cr(1.0), cr(0.0), cr(0.0)],
                [cr(0.0), cr(1.0), cr(0.0)],
                [cr(0.0), cr(0.0), cr(-1.0)]
            ],
        )
        .unwrap();
        let (o, std_j) = normalize_form(&j).unwrap();
        let brought = mul3(&transpose(&o), j.matrix(), &o);
        assert!(diff_norm(&brought, std_j.matrix()) < 1e-10);
        assert_eq!(std_j.matrix()[(0, 0)], cr(1.0));
        assert_eq!(std_j.matrix()[(2, 2)], cr(-1.0));
    }

    #[test]
    fn standard_identity_normalizes_to_itself_up_to_phase() {
        let form = standard_odd(4).unwrap();
        let (o, _) = normalize_form(&form).unwrap();
        assert!(diff_norm(&mul3(&transpose(&o), form.matrix(), &o), form.matrix()) < 1e-10);
    }

    #[test]
    fn kramers_pairs_full_space() {
        let form = standard_odd(2).unwrap();
        let basis = identity(2);
        let paired = kramers_pairing_basis(&basis, &form).unwrap();
        // φ = e1, partner = I conj(e1) = e2 (up to sign convention)
        let partner = paired.column(1).to_owned();
        assert!((partner[0].norm() - 0.0).abs() < 1e-12);
        assert!((partner[1].norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn kramers_pairs_random_invariant_subspace() {
        let n = 8;
        let form = standard_odd(n).unwrap();
        // seed two vectors, close under the pairing map, orthonormalize
        let mut rng = rng_for(29, 0);
        let s1 = random_complex(&mut rng, n, 1).column(0).to_owned();
        let s2 = random_complex(&mut rng, n, 1).column(0).to_owned();
        let mut cols: Vec<CVector> = vec![s1.clone(), s2.clone()];
        cols.push(form.matrix().dot(&conj_vec(&s1)));
        cols.push(form.matrix().dot(&conj_vec(&s2)));
        let mut raw = zeros(n, 4);
        for (k, v) in cols.iter().enumerate() {
            raw.column_mut(k).assign(v);
        }
        let (q, _) = raw.qr().unwrap();
        let paired = kramers_pairing_basis(&q, &form).unwrap();
        assert_eq!(paired.ncols(), 4);
        let gram = adjoint(&paired).dot(&paired);
        assert!(diff_norm(&gram, &identity(4)) < 1e-9);
        // pairs really are (φ, I conj φ)
        for k in (0..4).step_by(2) {
            let phi = paired.column(k).to_owned();
            let psi = paired.column(k + 1).to_owned();
            let expect = form.matrix().dot(&conj_vec(&phi));
            let mut d = 0.0;
            for (a, b) in expect.iter().zip(psi.iter()) {
                d += (a - b).norm_sqr();
            }
            assert!(d.sqrt() < 1e-8);
        }
    }

    #[test]
    fn kramers_rejects_odd_or_noninvariant() {
        let form = standard_odd(4).unwrap();
        // 3-dim non-invariant span
        let span = gather_cols(&identity(4), &[0, 1, 2]);
        assert!(kramers_pairing_basis(&span, &form).is_err());
    }

    #[test]
    fn real_skew_map_and_kernel() {
        let form = standard_odd(2).unwrap();
        let t = real_skew_to_odd(&zeros(2, 2), &form).unwrap();
        assert_eq!(fro_norm(&t), 0.0);
        // A = standard I is real skew-adjoint; T = i I^2 = −i Id
        let t = real_skew_to_odd(form.matrix(), &form).unwrap();
        assert!(diff_norm(&t, &identity(2).mapv(|z| z * c(0.0, -1.0))) < 1e-14);
        assert!(is_odd_symmetric(&t, &form, 1e-9).unwrap().holds);
        // random real skew of forced rank 4 in dim 6
        let f6 = standard_odd(6).unwrap();
        let g = random_real(&mut rng_for(30, 0), 6, 4);
        let core = {
            let mut j = zeros(4, 4);
            j[(0, 1)] = cr(1.0);
            j[(1, 0)] = cr(-1.0);
            j[(2, 3)] = cr(1.0);
            j[(3, 2)] = cr(-1.0);
            j
        };
        let a = mul3(&g, &core, &transpose(&g)); // real, antisymmetric = skew-adjoint
        let t = real_skew_to_odd(&a, &f6).unwrap();
        assert!(is_odd_symmetric(&t, &f6, 1e-9).unwrap().holds);
        // conj(T) = −T
        assert!(diff_norm(&conj(&t), &t.mapv(|z| -z)) < 1e-12 * (1.0 + fro_norm(&t)));
        let ka = numerical_kernel(&a, 1e-9).unwrap().kernel_dim();
        let kt = numerical_kernel(&t, 1e-9).unwrap().kernel_dim();
        assert_eq!(ka, 2);
        assert_eq!(kt, 2);
    }

    #[test]
    fn kernel_cokernel_pairing() {
        // odd symmetric with a planted kernel: T = I^* X^t I X, X rank-deficient
        let n = 6;
        let form = standard_odd(n).unwrap();
        let mut x = random_complex(&mut rng_for(31, 0), n, n);
        for i in 0..n {
            x[(i, 0)] = cr(0.0);
            x[(i, 1)] = cr(0.0);
        }
        let t = mul3(&form.adjoint_matrix(), &transpose(&x), &form.matrix().dot(&x));
        assert!(is_odd_symmetric(&t, &form, 1e-9).unwrap().holds);
        let d = kernel_cokernel_pairing_distance(&t, &form, 1e-9).unwrap();
        assert!(d < 1e-8, "pairing distance {d}");
    }
}
