//! Numerical toolkit for odd symmetric operators at finite truncation:
//! structural theorems (Kramers degeneracy, canonical factorizations,
//! polar relations), the ℤ₂-index with its stabilizing partial-isometry
//! completion, a ℤ₂ Gohberg-Krein theorem for block Toeplitz operators,
//! and the ℤ₂ phase label for time-reversal symmetric topological
//! insulators with spin Chern numbers.
//!
//! Start with the runnable examples (`cargo run --example ...`) or the
//! `oddsym` binary for file-driven workflows.

pub mod error;
pub mod factorization;
pub mod insulator;
pub mod io;
pub mod linalg;
pub mod mat;
pub mod pfaffian;
pub mod rng;
pub mod symmetry;
pub mod toeplitz;
pub mod z2;

pub use error::{OddsymError, Result};
pub use linalg::{numerical_kernel, polar_decompose, svd, RankResult, DEFAULT_REL_TOL};
pub use mat::{CMatrix, CVector, C64};
pub use pfaffian::pfaffian;
pub use symmetry::{
    is_even_symmetric, is_odd_symmetric, is_quaternionic, standard_even, standard_odd,
    FormKind, SymmetryForm,
};
