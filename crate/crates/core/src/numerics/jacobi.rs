//! Cyclic Jacobi eigensolver for real symmetric matrices.

use super::{ComplexMatrix, NumericsError};

/// Asymmetry (or imaginary residue) beyond this fraction of the largest
/// entry magnitude disqualifies the input.
pub const SYMMETRY_RTOL: f64 = 1e-12;

/// Eigendecomposition of a real symmetric matrix by cyclic Jacobi sweeps.
///
/// Returns eigenvalues in ascending order and the matching orthogonal
/// eigenvector matrix (eigenvectors as columns), so that
/// `A = V diag(lambda) V^T`.
pub fn sym_eigen(a: &ComplexMatrix) -> Result<(Vec<f64>, ComplexMatrix), NumericsError> {
    if !a.is_square() {
        return Err(NumericsError::DimensionMismatch(format!(
            "eigendecomposition of a {}x{} matrix",
            a.rows(),
            a.cols()
        )));
    }
    let n = a.rows();
    let scale = a.max_norm();
    let tolerance = SYMMETRY_RTOL * scale;
    let deviation = a.real_symmetry_deviation();
    if deviation > tolerance {
        return Err(NumericsError::NotSymmetric {
            deviation,
            tolerance,
        });
    }

    // Real working copy (symmetrized to kill round-off asymmetry).
    let mut m = vec![0.0f64; n * n];
    for i in 0..n {
        for j in 0..n {
            m[i * n + j] = 0.5 * (a.get(i, j).re + a.get(j, i).re);
        }
    }
    let mut v = vec![0.0f64; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }

    let off = |m: &[f64]| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += m[i * n + j] * m[i * n + j];
                }
            }
        }
        s.sqrt()
    };

    let stop = 1e-15 * scale.max(f64::MIN_POSITIVE) * n as f64;
    for _sweep in 0..100 {
        if off(&m) <= stop {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[p * n + q];
                if apq.abs() <= f64::MIN_POSITIVE {
                    continue;
                }
                let app = m[p * n + p];
                let aqq = m[q * n + q];
                let theta = (aqq - app) / (2.0 * apq);
                // Stable rotation: t = sign(theta) / (|theta| + sqrt(theta^2 + 1)).
                let t = if theta >= 0.0 {
                    1.0 / (theta + (theta * theta + 1.0).sqrt())
                } else {
                    -1.0 / (-theta + (theta * theta + 1.0).sqrt())
                };
                let cos = 1.0 / (t * t + 1.0).sqrt();
                let sin = t * cos;

                // Update rows/columns p and q of M = J^T M J.
                for k in 0..n {
                    let mkp = m[k * n + p];
                    let mkq = m[k * n + q];
                    m[k * n + p] = cos * mkp - sin * mkq;
                    m[k * n + q] = sin * mkp + cos * mkq;
                }
                for k in 0..n {
                    let mpk = m[p * n + k];
                    let mqk = m[q * n + k];
                    m[p * n + k] = cos * mpk - sin * mqk;
                    m[q * n + k] = sin * mpk + cos * mqk;
                }
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = cos * vkp - sin * vkq;
                    v[k * n + q] = sin * vkp + cos * vkq;
                }
            }
        }
    }

    // Sort ascending, permuting eigenvector columns along.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[i * n + i].total_cmp(&m[j * n + j]));
    let eigenvalues: Vec<f64> = order.iter().map(|&i| m[i * n + i]).collect();
    let mut vectors = ComplexMatrix::zeros(n, n);
    for (new_col, &old_col) in order.iter().enumerate() {
        for row in 0..n {
            vectors.set(
                row,
                new_col,
                num_complex::Complex64::new(v[row * n + old_col], 0.0),
            );
        }
    }
    Ok((eigenvalues, vectors))
}
