//! Row-pivoted Gaussian elimination: one audited kernel backs both the
//! linear solver and the determinant.

use num_complex::Complex64;

use super::{ComplexMatrix, NumericsError};

/// Pivot magnitudes below this fraction of the largest initial entry
/// magnitude are treated as exact rank deficiency.
pub const PIVOT_RTOL: f64 = 1e-14;

/// Solve A X = B by row-pivoted elimination.
///
/// Fails with `SingularMatrix` when a pivot falls below
/// `PIVOT_RTOL * max |A_ij|`.
pub fn solve_linear(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix, NumericsError> {
    if !a.is_square() {
        return Err(NumericsError::DimensionMismatch(format!(
            "coefficient matrix is {}x{}, expected square",
            a.rows(),
            a.cols()
        )));
    }
    if b.rows() != a.rows() {
        return Err(NumericsError::DimensionMismatch(format!(
            "rhs has {} rows, coefficient matrix has {}",
            b.rows(),
            a.rows()
        )));
    }
    let n = a.rows();
    let m = b.cols();
    let threshold = PIVOT_RTOL * a.max_norm();

    // Augmented working copies.
    let mut lhs = a.clone();
    let mut rhs = b.clone();

    for col in 0..n {
        // Partial pivoting on modulus.
        let (pivot_row, pivot_mag) = (col..n)
            .map(|r| (r, lhs.get(r, col).norm()))
            .max_by(|x, y| x.1.total_cmp(&y.1))
            .expect("non-empty pivot search");
        if pivot_mag < threshold {
            return Err(NumericsError::SingularMatrix {
                pivot: pivot_mag,
                threshold,
            });
        }
        if pivot_row != col {
            swap_rows(&mut lhs, col, pivot_row);
            swap_rows(&mut rhs, col, pivot_row);
        }
        let pivot = lhs.get(col, col);
        for row in col + 1..n {
            let factor = lhs.get(row, col) / pivot;
            if factor == Complex64::ZERO {
                continue;
            }
            for j in col..n {
                let v = lhs.get(row, j) - factor * lhs.get(col, j);
                lhs.set(row, j, v);
            }
            for j in 0..m {
                let v = rhs.get(row, j) - factor * rhs.get(col, j);
                rhs.set(row, j, v);
            }
        }
    }

    // Back substitution.
    let mut x = ComplexMatrix::zeros(n, m);
    for j in 0..m {
        for row in (0..n).rev() {
            let mut acc = rhs.get(row, j);
            for k in row + 1..n {
                acc -= lhs.get(row, k) * x.get(k, j);
            }
            x.set(row, j, acc / lhs.get(row, row));
        }
    }
    Ok(x)
}

/// Determinant as the signed product of elimination pivots.
///
/// Singular input is not an error: the product simply comes out zero.
pub fn det(a: &ComplexMatrix) -> Result<Complex64, NumericsError> {
    if !a.is_square() {
        return Err(NumericsError::DimensionMismatch(format!(
            "determinant of a {}x{} matrix",
            a.rows(),
            a.cols()
        )));
    }
    let n = a.rows();
    let mut work = a.clone();
    let mut result = Complex64::ONE;

    for col in 0..n {
        let (pivot_row, pivot_mag) = (col..n)
            .map(|r| (r, work.get(r, col).norm()))
            .max_by(|x, y| x.1.total_cmp(&y.1))
            .expect("non-empty pivot search");
        if pivot_mag == 0.0 {
            return Ok(Complex64::ZERO);
        }
        if pivot_row != col {
            swap_rows(&mut work, col, pivot_row);
            result = -result;
        }
        let pivot = work.get(col, col);
        result *= pivot;
        for row in col + 1..n {
            let factor = work.get(row, col) / pivot;
            if factor == Complex64::ZERO {
                continue;
            }
            for j in col..n {
                let v = work.get(row, j) - factor * work.get(col, j);
                work.set(row, j, v);
            }
        }
    }
    Ok(result)
}

fn swap_rows(m: &mut ComplexMatrix, r1: usize, r2: usize) {
    if r1 == r2 {
        return;
    }
    for j in 0..m.cols() {
        let a = m.get(r1, j);
        let b = m.get(r2, j);
        m.set(r1, j, b);
        m.set(r2, j, a);
    }
}
