//! Self-contained dense complex linear-algebra kernel.
//!
//! One row-pivoted elimination backs both the solver and the determinant;
//! eigendecomposition of real symmetric matrices uses cyclic Jacobi sweeps.
//! Everything here is pure and thread-safe; dimensions in this crate stay
//! small enough that O(n^3) dense kernels are the right tool.

mod jacobi;
mod lu;
mod matrix;

use thiserror::Error;

pub use jacobi::{sym_eigen, SYMMETRY_RTOL};
pub use lu::{det, solve_linear, PIVOT_RTOL};
pub use matrix::{ComplexMatrix, StateVector, NORMALIZATION_TOL};

#[derive(Debug, Error)]
pub enum NumericsError {
    #[error("singular matrix: pivot magnitude {pivot:.3e} below threshold {threshold:.3e}")]
    SingularMatrix { pivot: f64, threshold: f64 },
    #[error("matrix is not real symmetric: deviation {deviation:.3e} exceeds {tolerance:.3e}")]
    NotSymmetric { deviation: f64, tolerance: f64 },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
}
