//! 2D irreps of one-dimensional translations and reflections, and the
//! beam-splitter unitary built from them.

use num_complex::Complex64;

use crate::numerics::ComplexMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SymmetryKind {
    Translation,
    Reflection,
}

/// One symmetry element with its 2x2 unitary in the translation eigenbasis:
/// translations are `diag(exp(-i k a), exp(i k a))`, reflections are
/// anti-diagonal with `exp(-2 i k a)` above and `exp(2 i k a)` below.
#[derive(Debug, Clone)]
pub struct IrrepElement {
    a: f64,
    k_w: f64,
    kind: SymmetryKind,
    matrix: ComplexMatrix,
}

impl IrrepElement {
    pub fn translation(a: f64, k_w: f64) -> Self {
        let phase = Complex64::from_polar(1.0, -k_w * a);
        let matrix = ComplexMatrix::from_rows(&[
            vec![phase, Complex64::ZERO],
            vec![Complex64::ZERO, phase.conj()],
        ])
        .expect("2x2");
        Self {
            a,
            k_w,
            kind: SymmetryKind::Translation,
            matrix,
        }
    }

    pub fn reflection(a: f64, k_w: f64) -> Self {
        let phase = Complex64::from_polar(1.0, -2.0 * k_w * a);
        let matrix = ComplexMatrix::from_rows(&[
            vec![Complex64::ZERO, phase],
            vec![phase.conj(), Complex64::ZERO],
        ])
        .expect("2x2");
        Self {
            a,
            k_w,
            kind: SymmetryKind::Reflection,
            matrix,
        }
    }

    pub fn parameter(&self) -> f64 {
        self.a
    }

    pub fn wavenumber(&self) -> f64 {
        self.k_w
    }

    pub fn kind(&self) -> SymmetryKind {
        self.kind
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn apply(&self, state: [Complex64; 2]) -> [Complex64; 2] {
        [
            self.matrix.get(0, 0) * state[0] + self.matrix.get(0, 1) * state[1],
            self.matrix.get(1, 0) * state[0] + self.matrix.get(1, 1) * state[1],
        ]
    }
}

/// Beam-splitter unitary `(1/sqrt 2)(I - i S(a0))` at `a0 = pi / (4 k)`.
///
/// At that parameter the reflection is `[[0, -i], [i, 0]]`, so the matrix
/// collapses to `(1/sqrt 2) [[1, -1], [1, 1]]`; it is built in that exact
/// form rather than through trigonometry.
pub fn beam_splitter(k_w: f64) -> ComplexMatrix {
    assert!(k_w > 0.0, "wavenumber must be positive");
    let s = std::f64::consts::FRAC_1_SQRT_2;
    ComplexMatrix::from_real(2, 2, &[s, -s, s, s]).expect("2x2")
}
