//! Pfaffian of a complex skew-symmetric matrix by Parlett-Reid skew
//! tridiagonalization with partial pivoting, the permutation sign tracked
//! explicitly. `Pf(B)^2 = det(B)` is the test oracle.

use crate::error::{OddsymError, Result};
use crate::mat::*;

/// Pfaffian of an even-dimensional skew-symmetric matrix.
///
/// The input must satisfy `‖B + B^t‖ ≤ 1e-10 (1 + ‖B‖)`; odd dimension and
/// symmetry violations are contract errors.
pub fn pfaffian(b: &CMatrix) -> Result<C64> {
    if !is_square(b) {
        return Err(OddsymError::contract("pfaffian: matrix must be square"));
    }
    let n = b.nrows();
    if n % 2 != 0 {
        return Err(OddsymError::contract(format!(
            "pfaffian: dimension {n} is odd; the Pfaffian is defined for even dimension"
        )));
    }
    let norm = fro_norm(b);
    let skew_residual = diff_norm(&transpose(b), &b.mapv(|z| -z));
    if skew_residual > 1e-10 * (1.0 + norm) {
        return Err(OddsymError::contract(format!(
            "pfaffian: matrix is not skew-symmetric (residual {skew_residual:.3e} vs bound {:.3e})",
            1e-10 * (1.0 + norm)
        )));
    }
    if n == 0 {
        return Ok(cr(1.0));
    }

    let mut a = b.clone();
    let mut pf = cr(1.0);
    for k in (0..n - 1).step_by(2) {
        // partial pivot: move the largest entry of column k below row k to row k+1
        let mut kp = k + 1;
        let mut best = a[(k + 1, k)].norm();
        for i in k + 2..n {
            let v = a[(i, k)].norm();
            if v > best {
                best = v;
                kp = i;
            }
        }
        if kp != k + 1 {
            swap_rows(&mut a, k + 1, kp);
            swap_cols(&mut a, k + 1, kp);
            pf = -pf;
        }
        let pivot = a[(k + 1, k)];
        if pivot.norm() == 0.0 {
            return Ok(cr(0.0));
        }
        pf *= a[(k, k + 1)];
        if k + 2 < n {
            // Gauss update clearing column k below row k+1:
            // A ← A + τ w^t − w τ^t on the trailing block
            let tau: Vec<C64> = (k + 2..n).map(|i| a[(i, k)] / pivot).collect();
            let w: Vec<C64> = (k + 2..n).map(|i| a[(i, k + 1)]).collect();
            for (ii, i) in (k + 2..n).enumerate() {
                for (jj, j) in (k + 2..n).enumerate() {
                    a[(i, j)] += tau[ii] * w[jj] - w[ii] * tau[jj];
                }
            }
        }
    }
    Ok(pf)
}

fn swap_rows(a: &mut CMatrix, i: usize, j: usize) {
    for col in 0..a.ncols() {
        a.swap((i, col), (j, col));
    }
}

fn swap_cols(a: &mut CMatrix, i: usize, j: usize) {
    for row in 0..a.nrows() {
        a.swap((row, i), (row, j));
    }
}
