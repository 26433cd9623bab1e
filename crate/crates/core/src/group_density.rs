//! Finite-group representation engine: dihedral groups with their 2D
//! irreps, the orthogonality relations, and density matrices rebuilt from
//! irrep averages.
//!
//! The average of an irrep element in a state `rho0` is the scalar
//! `Tr(rho0 D(g))`; summing `(n/N) D(g^-1) <D(g)>` over the group then
//! reconstructs `rho0` exactly, because the matrix elements of an
//! n-dimensional irrep span the n^2-dimensional operator space.

use std::sync::Arc;

use num_complex::Complex64;
use thiserror::Error;

use crate::numerics::{sym_eigen, ComplexMatrix};

#[derive(Debug, Error)]
pub enum GroupError {
    #[error("representation is not irreducible: |chi|^2 indicator = {indicator}")]
    NotIrreducible { indicator: f64 },
    #[error("irreps belong to different groups")]
    GroupMismatch,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("averages not realizable by any state: {0}")]
    InconsistentAverages(String),
    #[error("invalid group table: {0}")]
    InvalidGroup(String),
    #[error("invalid irrep: {0}")]
    InvalidIrrep(String),
    #[error("invalid density matrix: {0}")]
    InvalidDensity(String),
}

/// Finite group as an explicit multiplication table.
#[derive(Debug, PartialEq)]
pub struct FiniteGroup {
    labels: Vec<String>,
    multiply: Vec<Vec<usize>>,
    inverse: Vec<usize>,
    identity: usize,
}

impl FiniteGroup {
    /// Validate and wrap a multiplication table. Closure, identity and
    /// inverse laws are always checked; associativity exhaustively for
    /// order <= 48 and on sampled triples beyond that.
    pub fn new(
        labels: Vec<String>,
        multiply: Vec<Vec<usize>>,
        inverse: Vec<usize>,
        identity: usize,
    ) -> Result<Arc<Self>, GroupError> {
        let n = labels.len();
        if n == 0 {
            return Err(GroupError::InvalidGroup("empty element set".to_string()));
        }
        if multiply.len() != n
            || multiply.iter().any(|row| row.len() != n)
            || inverse.len() != n
            || identity >= n
        {
            return Err(GroupError::InvalidGroup(
                "table shape does not match element count".to_string(),
            ));
        }
        for row in &multiply {
            if row.iter().any(|&k| k >= n) {
                return Err(GroupError::InvalidGroup("closure violated".to_string()));
            }
        }
        for g in 0..n {
            if multiply[identity][g] != g || multiply[g][identity] != g {
                return Err(GroupError::InvalidGroup(format!(
                    "identity law fails at element {g}"
                )));
            }
            if inverse[g] >= n
                || multiply[g][inverse[g]] != identity
                || multiply[inverse[g]][g] != identity
            {
                return Err(GroupError::InvalidGroup(format!(
                    "inverse law fails at element {g}"
                )));
            }
        }
        let check =
            |a: usize, b: usize, c: usize| multiply[multiply[a][b]][c] == multiply[a][multiply[b][c]];
        if n <= 48 {
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        if !check(a, b, c) {
                            return Err(GroupError::InvalidGroup(format!(
                                "associativity fails at ({a}, {b}, {c})"
                            )));
                        }
                    }
                }
            }
        } else {
            // Deterministic stride-based sample of triples.
            let step = (n / 7).max(1);
            for a in (0..n).step_by(step) {
                for b in (0..n).step_by(step) {
                    for c in (0..n).step_by(step) {
                        if !check(a, b, c) {
                            return Err(GroupError::InvalidGroup(format!(
                                "associativity fails at ({a}, {b}, {c})"
                            )));
                        }
                    }
                }
            }
        }
        Ok(Arc::new(Self {
            labels,
            multiply,
            inverse,
            identity,
        }))
    }

    pub fn order(&self) -> usize {
        self.labels.len()
    }

    pub fn label(&self, g: usize) -> &str {
        &self.labels[g]
    }

    pub fn multiply(&self, a: usize, b: usize) -> usize {
        self.multiply[a][b]
    }

    pub fn inverse(&self, g: usize) -> usize {
        self.inverse[g]
    }

    pub fn identity(&self) -> usize {
        self.identity
    }
}

/// Homomorphism / unitarity tolerance for certified irreps.
pub const IRREP_TOL: f64 = 1e-12;
/// Tolerance on the `(1/N) sum |chi(g)|^2 = 1` irreducibility criterion.
pub const IRREDUCIBILITY_TOL: f64 = 1e-10;

/// Unitary irreducible representation: one matrix per group element,
/// certified on construction.
#[derive(Debug, Clone)]
pub struct Irrep {
    group: Arc<FiniteGroup>,
    dim: usize,
    matrices: Vec<ComplexMatrix>,
}

impl Irrep {
    pub fn new(group: Arc<FiniteGroup>, matrices: Vec<ComplexMatrix>) -> Result<Self, GroupError> {
        let n = group.order();
        if matrices.len() != n {
            return Err(GroupError::InvalidIrrep(format!(
                "{} matrices for a group of order {n}",
                matrices.len()
            )));
        }
        let dim = matrices[0].rows();
        for m in &matrices {
            if m.rows() != dim || m.cols() != dim {
                return Err(GroupError::InvalidIrrep("mixed dimensions".to_string()));
            }
        }
        // D(e) = I.
        let id_dev = matrices[group.identity()]
            .sub(&ComplexMatrix::identity(dim))
            .expect("same shape")
            .max_norm();
        if id_dev > IRREP_TOL {
            return Err(GroupError::InvalidIrrep(format!(
                "D(e) deviates from identity by {id_dev:.3e}"
            )));
        }
        // Unitarity and homomorphism.
        for (g, m) in matrices.iter().enumerate() {
            let dev = m
                .dagger()
                .mul(m)
                .expect("square")
                .sub(&ComplexMatrix::identity(dim))
                .expect("same shape")
                .max_norm();
            if dev > IRREP_TOL {
                return Err(GroupError::InvalidIrrep(format!(
                    "D({}) unitarity deviation {dev:.3e}",
                    group.label(g)
                )));
            }
        }
        for a in 0..n {
            for b in 0..n {
                let prod = matrices[a].mul(&matrices[b]).expect("square");
                let dev = prod
                    .sub(&matrices[group.multiply(a, b)])
                    .expect("same shape")
                    .max_norm();
                if dev > IRREP_TOL {
                    return Err(GroupError::InvalidIrrep(format!(
                        "homomorphism deviation {dev:.3e} at ({a}, {b})"
                    )));
                }
            }
        }
        // Irreducibility: (1/N) sum_g |trace D(g)|^2 = 1.
        let indicator: f64 = matrices.iter().map(|m| m.trace().norm_sqr()).sum::<f64>() / n as f64;
        if (indicator - 1.0).abs() > IRREDUCIBILITY_TOL {
            return Err(GroupError::NotIrreducible { indicator });
        }
        Ok(Self {
            group,
            dim,
            matrices,
        })
    }

    /// The one-dimensional trivial irrep of any group.
    pub fn trivial(group: Arc<FiniteGroup>) -> Self {
        let matrices = vec![ComplexMatrix::identity(1); group.order()];
        Self {
            group,
            dim: 1,
            matrices,
        }
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self, g: usize) -> &ComplexMatrix {
        &self.matrices[g]
    }

    fn same_representation(&self, other: &Self) -> bool {
        self.dim == other.dim
            && self
                .matrices
                .iter()
                .zip(&other.matrices)
                .all(|(a, b)| a.sub(b).map(|d| d.max_norm() <= IRREP_TOL).unwrap_or(false))
    }
}

/// Dihedral group of order `2n` together with its 2D irrep built from the
/// translation generator `diag(exp(-i k a), exp(i k a))`, `a = 2 pi / (n k)`,
/// and the exchange reflection.
pub fn build_dihedral(n: usize, k_w: f64) -> Result<(Arc<FiniteGroup>, Irrep), GroupError> {
    if n == 0 {
        return Err(GroupError::InvalidGroup("empty rotation set".to_string()));
    }
    if !(k_w > 0.0) {
        return Err(GroupError::InvalidGroup(format!(
            "wavenumber must be positive, got {k_w}"
        )));
    }
    let order = 2 * n;
    let mut labels = Vec::with_capacity(order);
    for j in 0..n {
        labels.push(format!("t{j}"));
    }
    for j in 0..n {
        labels.push(format!("s{j}"));
    }
    // Rotations occupy 0..n, reflections n..2n.
    let mut multiply = vec![vec![0usize; order]; order];
    let mut inverse = vec![0usize; order];
    for a in 0..order {
        for b in 0..order {
            let (ra, ja) = (a >= n, a % n);
            let (rb, jb) = (b >= n, b % n);
            multiply[a][b] = match (ra, rb) {
                (false, false) => (ja + jb) % n,
                (false, true) => n + (jb + n - ja) % n,
                (true, false) => n + (ja + jb) % n,
                (true, true) => (jb + n - ja) % n,
            };
        }
    }
    for j in 0..n {
        inverse[j] = (n - j) % n;
        inverse[n + j] = n + j;
    }
    let group = FiniteGroup::new(labels, multiply, inverse, 0)?;

    // theta = k_w * a with a = 2 pi / (n k_w).
    let theta = 2.0 * std::f64::consts::PI / n as f64;
    let mut matrices = Vec::with_capacity(order);
    for j in 0..n {
        let phase = Complex64::from_polar(1.0, -(j as f64) * theta);
        matrices.push(
            ComplexMatrix::from_rows(&[
                vec![phase, Complex64::ZERO],
                vec![Complex64::ZERO, phase.conj()],
            ])
            .expect("2x2"),
        );
    }
    for j in 0..n {
        let phase = Complex64::from_polar(1.0, (j as f64) * theta);
        matrices.push(
            ComplexMatrix::from_rows(&[
                vec![Complex64::ZERO, phase],
                vec![phase.conj(), Complex64::ZERO],
            ])
            .expect("2x2"),
        );
    }
    let irrep = Irrep::new(Arc::clone(&group), matrices)?;
    Ok((group, irrep))
}

/// Max deviation of the Georgi orthogonality sums from their Kronecker
/// targets, over all index tuples of the two irreps.
pub fn check_orthogonality(a: &Irrep, b: &Irrep) -> Result<f64, GroupError> {
    if !Arc::ptr_eq(a.group(), b.group()) && a.group().as_ref() != b.group().as_ref() {
        return Err(GroupError::GroupMismatch);
    }
    let group = a.group();
    let order = group.order() as f64;
    let same = a.same_representation(b);
    let weight = a.dim() as f64 / order;

    let mut max_dev = 0.0f64;
    for k in 0..a.dim() {
        for j in 0..a.dim() {
            for l in 0..b.dim() {
                for m in 0..b.dim() {
                    let mut sum = Complex64::ZERO;
                    for g in 0..group.order() {
                        let ginv = group.inverse(g);
                        sum += a.matrix(ginv).get(k, j) * b.matrix(g).get(l, m) * weight;
                    }
                    let target = if same && j == l && k == m {
                        Complex64::ONE
                    } else {
                        Complex64::ZERO
                    };
                    max_dev = max_dev.max((sum - target).norm());
                }
            }
        }
    }
    Ok(max_dev)
}

/// Hermiticity / unit-trace tolerance for density matrices.
pub const DENSITY_TOL: f64 = 1e-10;
/// Round-off floor on eigenvalue positivity.
pub const POSITIVITY_TOL: f64 = -1e-10;

/// Validated density matrix: Hermitian, unit trace, positive spectrum.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    pub fn new(matrix: ComplexMatrix) -> Result<Self, GroupError> {
        if !matrix.is_square() {
            return Err(GroupError::InvalidDensity(format!(
                "{}x{} is not square",
                matrix.rows(),
                matrix.cols()
            )));
        }
        let herm = matrix.hermiticity_deviation();
        if herm > DENSITY_TOL {
            return Err(GroupError::InvalidDensity(format!(
                "hermiticity deviation {herm:.3e}"
            )));
        }
        let trace = matrix.trace();
        if (trace - Complex64::ONE).norm() > DENSITY_TOL {
            return Err(GroupError::InvalidDensity(format!(
                "trace {trace} differs from 1"
            )));
        }
        let min_eig = min_hermitian_eigenvalue(&matrix)?;
        if min_eig < POSITIVITY_TOL {
            return Err(GroupError::InvalidDensity(format!(
                "negative eigenvalue {min_eig:.3e}"
            )));
        }
        Ok(Self { matrix })
    }

    pub fn maximally_mixed(n: usize) -> Self {
        let m = ComplexMatrix::identity(n).scale(Complex64::new(1.0 / n as f64, 0.0));
        Self { matrix: m }
    }

    /// Rank-one projector onto a (normalized) amplitude vector.
    pub fn pure(amplitudes: &[Complex64]) -> Result<Self, GroupError> {
        let norm: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum();
        if norm <= 0.0 {
            return Err(GroupError::InvalidDensity("zero state".to_string()));
        }
        let n = amplitudes.len();
        let mut m = ComplexMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                m.set(i, j, amplitudes[i] * amplitudes[j].conj() / norm);
            }
        }
        Ok(Self { matrix: m })
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }
}

/// Smallest eigenvalue of a Hermitian matrix, via the real-symmetric
/// embedding [[Re, -Im], [Im, Re]] whose spectrum doubles the original.
fn min_hermitian_eigenvalue(m: &ComplexMatrix) -> Result<f64, GroupError> {
    let n = m.rows();
    let mut embed = ComplexMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            let z = m.get(i, j);
            embed.set(i, j, Complex64::new(z.re, 0.0));
            embed.set(i, j + n, Complex64::new(-z.im, 0.0));
            embed.set(i + n, j, Complex64::new(z.im, 0.0));
            embed.set(i + n, j + n, Complex64::new(z.re, 0.0));
        }
    }
    let (vals, _) = sym_eigen(&embed)
        .map_err(|e| GroupError::InvalidDensity(format!("eigensolve failed: {e}")))?;
    Ok(vals[0])
}

/// Per-element scalar averages `<D(g)> = Tr(rho0 D(g))`.
#[derive(Debug, Clone)]
pub struct AverageTable {
    values: Vec<Complex64>,
}

impl AverageTable {
    pub fn new(values: Vec<Complex64>) -> Self {
        Self { values }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn value(&self, g: usize) -> Complex64 {
        self.values[g]
    }
}

/// Expectation table of the irrep elements in a source state.
pub fn averages_from_state(
    irrep: &Irrep,
    rho0: &DensityMatrix,
) -> Result<AverageTable, GroupError> {
    if rho0.dim() != irrep.dim() {
        return Err(GroupError::DimensionMismatch(format!(
            "state dimension {} vs irrep dimension {}",
            rho0.dim(),
            irrep.dim()
        )));
    }
    let values = (0..irrep.group().order())
        .map(|g| {
            rho0.matrix()
                .mul(irrep.matrix(g))
                .expect("matching dims")
                .trace()
        })
        .collect();
    Ok(AverageTable::new(values))
}

/// Density matrix from irrep averages: `rho = (n/N) sum_g D(g^-1) <D(g)>`.
///
/// When the averages come from an actual state this reproduces it; tables
/// that violate Hermiticity, unit trace or positivity report
/// `InconsistentAverages`.
pub fn density_from_averages(
    irrep: &Irrep,
    averages: &AverageTable,
) -> Result<DensityMatrix, GroupError> {
    let order = irrep.group().order();
    if averages.len() != order {
        return Err(GroupError::DimensionMismatch(format!(
            "{} averages for a group of order {order}",
            averages.len()
        )));
    }
    let weight = Complex64::new(irrep.dim() as f64 / order as f64, 0.0);
    let mut acc = ComplexMatrix::zeros(irrep.dim(), irrep.dim());
    for g in 0..order {
        let ginv = irrep.group().inverse(g);
        acc = acc
            .add(&irrep.matrix(ginv).scale(weight * averages.value(g)))
            .expect("same shape");
    }
    DensityMatrix::new(acc).map_err(|e| GroupError::InconsistentAverages(e.to_string()))
}

/// GG^dagger / Tr normalization of a random complex matrix: a valid
/// density matrix for any draw.
pub fn random_density(n: usize, rng: &mut impl rand::Rng) -> DensityMatrix {
    let mut g = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            g.set(
                i,
                j,
                Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5),
            );
        }
    }
    let gram = g.mul(&g.dagger()).expect("square");
    let trace = gram.trace();
    DensityMatrix::new(gram.scale(Complex64::ONE / trace)).expect("positive by construction")
}
