//! Small dense-matrix helpers shared by every module.
//!
//! All operators live in a fixed computational basis; complex conjugation
//! is entrywise in that basis and transposition is taken w.r.t. the same
//! basis. The carrier type is a dense `Array2<Complex64>`.

use ndarray::prelude::*;
use num_complex::Complex64;

pub type C64 = Complex64;
pub type CMatrix = Array2<C64>;
pub type CVector = Array1<C64>;

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn cr(re: f64) -> C64 {
    C64::new(re, 0.0)
}

pub fn identity(n: usize) -> CMatrix {
    Array2::eye(n)
}

pub fn zeros(rows: usize, cols: usize) -> CMatrix {
    Array2::zeros((rows, cols))
}

/// Entrywise complex conjugate.
pub fn conj(m: &CMatrix) -> CMatrix {
    m.mapv(|z| z.conj())
}

/// Transpose w.r.t. the computational basis.
pub fn transpose(m: &CMatrix) -> CMatrix {
    m.t().to_owned()
}

/// Hermitian adjoint.
pub fn adjoint(m: &CMatrix) -> CMatrix {
    m.t().mapv(|z| z.conj())
}

pub fn conj_vec(v: &CVector) -> CVector {
    v.mapv(|z| z.conj())
}

/// Frobenius norm, used for all residual checks.
pub fn fro_norm(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn vec_norm(v: &CVector) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn max_abs_imag(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.im.abs()).fold(0.0, f64::max)
}

/// `a * b` with owned output.
pub fn mul(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.dot(b)
}

/// Three-factor product.
pub fn mul3(a: &CMatrix, b: &CMatrix, c: &CMatrix) -> CMatrix {
    a.dot(b).dot(c)
}

/// Residual `‖a − b‖_F`.
pub fn diff_norm(a: &CMatrix, b: &CMatrix) -> f64 {
    let mut s = 0.0;
    for (x, y) in a.iter().zip(b.iter()) {
        s += (x - y).norm_sqr();
    }
    s.sqrt()
}

pub fn is_square(m: &CMatrix) -> bool {
    m.nrows() == m.ncols()
}

pub fn all_finite(m: &CMatrix) -> bool {
    m.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

/// Block diagonal of two square matrices.
pub fn direct_sum(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let (na, nb) = (a.nrows(), b.nrows());
    let mut out = zeros(na + nb, a.ncols() + b.ncols());
    out.slice_mut(s![..na, ..a.ncols()]).assign(a);
    out.slice_mut(s![na.., a.ncols()..]).assign(b);
    out
}

/// Block diagonal of `copies` copies of `block`.
pub fn block_diag_repeat(block: &CMatrix, copies: usize) -> CMatrix {
    let d = block.nrows();
    let mut out = zeros(d * copies, d * copies);
    for k in 0..copies {
        out.slice_mut(s![k * d..(k + 1) * d, k * d..(k + 1) * d])
            .assign(block);
    }
    out
}

/// Outer product `|a⟩⟨b| = a b^*`.
pub fn outer(a: &CVector, b: &CVector) -> CMatrix {
    let mut out = zeros(a.len(), b.len());
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[(i, j)] = x * y.conj();
        }
    }
    out
}

/// Columns of `m` as a matrix restricted to `idx` (column gather).
pub fn gather_cols(m: &CMatrix, idx: &[usize]) -> CMatrix {
    let mut out = zeros(m.nrows(), idx.len());
    for (k, &j) in idx.iter().enumerate() {
        out.column_mut(k).assign(&m.column(j));
    }
    out
}

/// Hermitization `(m + m^*)/2`, used to clean up numerically Hermitian data.
pub fn hermitize(m: &CMatrix) -> CMatrix {
    let a = adjoint(m);
    (m + &a).mapv(|z| 0.5 * z)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn direct_sum_shapes() {
        let a = identity(2);
        let b = identity(3);
        let d = direct_sum(&a, &b);
        assert_eq!(d.dim(), (5, 5));
        assert_eq!(d[(0, 0)], cr(1.0));
        assert_eq!(d[(4, 4)], cr(1.0));
        assert_eq!(d[(0, 3)], cr(0.0));
    }

    #[test]
    fn adjoint_is_conj_transpose() {
        let m = array![[c(1.0, 2.0), c(3.0, -1.0)], [c(0.0, 1.0), c(2.0, 0.0)]];
        let a = adjoint(&m);
        assert_eq!(a[(0, 1)], c(0.0, -1.0));
        assert_eq!(a[(1, 0)], c(3.0, 1.0));
    }
}
