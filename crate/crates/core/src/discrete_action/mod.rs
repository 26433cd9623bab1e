//! Discrete Gaussian-action engine.
//!
//! A pair of coupled oscillators is discretized in time into a symmetric
//! action matrix; the transition amplitude of the resulting Gaussian
//! integral has the closed form
//! `Z = prod_j sqrt(2 pi i / (lambda_j + i eps)) * exp(-i/2 J.(A + i eps)^-1.J)`
//! with principal-branch square roots fixing the Fresnel phases. In the
//! temporally continuous limit the same action yields a frequency-domain
//! propagator whose pair kernel drives twin-slit amplitudes, and matching
//! those against the free-particle form induces a relational distance
//! between coupled sources.

mod quadrature;

pub use quadrature::{quadrature_amplitude, QuadratureSpec};

use num_complex::Complex64;
use thiserror::Error;

use crate::numerics::{solve_linear, sym_eigen, ComplexMatrix, NumericsError};

#[derive(Debug, Error)]
pub enum ActionError {
    #[error("on resonance: |k^2 - (omega^2 m - kappa)^2| = {denominator:.3e}")]
    Resonance { denominator: f64 },
    #[error("no interaction: relational distance undefined at zero coupling")]
    NoInteraction,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

/// Masses and spring constants of the coupled-oscillator pair.
#[derive(Debug, Clone, Copy)]
pub struct OscillatorParams {
    pub m: f64,
    pub kappa: f64,
    pub k12: f64,
}

impl OscillatorParams {
    pub fn new(m: f64, kappa: f64, k12: f64) -> Result<Self, ActionError> {
        if !(m > 0.0) || kappa < 0.0 || !kappa.is_finite() || !k12.is_finite() {
            return Err(ActionError::InvalidParams(format!(
                "m > 0, kappa >= 0 required (got m = {m}, kappa = {kappa}, k12 = {k12})"
            )));
        }
        Ok(Self { m, kappa, k12 })
    }
}

/// Monochromatic source: amplitude, drive frequency, impulse magnitude.
#[derive(Debug, Clone, Copy)]
pub struct SourceSpec {
    pub gamma: f64,
    pub omega0: f64,
    pub j: f64,
}

impl SourceSpec {
    pub fn new(gamma: f64, omega0: f64, j: f64) -> Result<Self, ActionError> {
        if !(omega0 > 0.0) {
            return Err(ActionError::InvalidParams(format!(
                "source frequency must be positive, got {omega0}"
            )));
        }
        Ok(Self { gamma, omega0, j })
    }
}

/// Symmetric action matrix with its source vector and time step.
#[derive(Debug, Clone)]
pub struct DiscreteAction {
    matrix: ComplexMatrix,
    source: Vec<f64>,
    dt: f64,
    n_sources: usize,
    n_time: usize,
    hbar: f64,
}

/// Relative symmetry tolerance on the action matrix.
pub const ACTION_SYMMETRY_RTOL: f64 = 1e-12;

impl DiscreteAction {
    pub fn new(
        matrix: ComplexMatrix,
        source: Vec<f64>,
        dt: f64,
        n_sources: usize,
        n_time: usize,
        hbar: f64,
    ) -> Result<Self, ActionError> {
        let dim = n_sources * n_time;
        if matrix.rows() != dim || matrix.cols() != dim {
            return Err(ActionError::Dimension(format!(
                "matrix is {}x{}, expected {dim}x{dim}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        if source.len() != dim {
            return Err(ActionError::Dimension(format!(
                "source vector has {} entries, expected {dim}",
                source.len()
            )));
        }
        if !(dt > 0.0) || !(hbar > 0.0) {
            return Err(ActionError::InvalidParams(format!(
                "dt and hbar must be positive (got {dt}, {hbar})"
            )));
        }
        let dev = matrix.real_symmetry_deviation();
        if dev > ACTION_SYMMETRY_RTOL * matrix.max_norm().max(1.0) {
            return Err(ActionError::InvalidParams(format!(
                "action matrix deviates from real-symmetric by {dev:.3e}"
            )));
        }
        Ok(Self {
            matrix,
            source,
            dt,
            n_sources,
            n_time,
            hbar,
        })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn source(&self) -> &[f64] {
        &self.source
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn n_sources(&self) -> usize {
        self.n_sources
    }

    pub fn n_time(&self) -> usize {
        self.n_time
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn with_source(mut self, source: Vec<f64>) -> Result<Self, ActionError> {
        if source.len() != self.source.len() {
            return Err(ActionError::Dimension(format!(
                "source vector has {} entries, expected {}",
                source.len(),
                self.source.len()
            )));
        }
        self.source = source;
        Ok(self)
    }

    /// Quadratic form `0.5 Q.A.Q` of a sampled trajectory.
    pub fn quadratic_form(&self, q: &[f64]) -> Result<f64, ActionError> {
        let dim = self.n_sources * self.n_time;
        if q.len() != dim {
            return Err(ActionError::Dimension(format!(
                "trajectory has {} samples, expected {dim}",
                q.len()
            )));
        }
        let mut acc = 0.0;
        for i in 0..dim {
            for j in 0..dim {
                acc += q[i] * self.matrix.get(i, j).re * q[j];
            }
        }
        Ok(0.5 * acc)
    }
}

/// Two-source oscillator action on `n_time` slices.
///
/// Each source block carries the raw stencil `(m/dt + kappa dt, -2m/dt,
/// m/dt)` along offsets (0, +1, +2); the interaction blocks couple equal
/// time indices with `k12 dt`. The assembled matrix is symmetrized, which
/// leaves the quadratic form unchanged.
pub fn build_oscillator_action(
    params: &OscillatorParams,
    dt: f64,
    n_time: usize,
) -> Result<DiscreteAction, ActionError> {
    if n_time < 3 {
        return Err(ActionError::InvalidParams(format!(
            "need at least 3 time slices, got {n_time}"
        )));
    }
    if !(dt > 0.0) {
        return Err(ActionError::InvalidParams(format!(
            "time step must be positive, got {dt}"
        )));
    }
    let n = n_time;
    let dim = 2 * n;
    let mut raw = vec![0.0f64; dim * dim];
    let diag = params.m / dt + params.kappa * dt;
    let band1 = -2.0 * params.m / dt;
    let band2 = params.m / dt;
    for s in 0..2 {
        let base = s * n;
        for i in 0..n {
            raw[(base + i) * dim + base + i] = diag;
            if i + 1 < n {
                raw[(base + i) * dim + base + i + 1] = band1;
            }
            if i + 2 < n {
                raw[(base + i) * dim + base + i + 2] = band2;
            }
        }
    }
    for i in 0..n {
        raw[i * dim + n + i] = params.k12 * dt;
        raw[(n + i) * dim + i] = params.k12 * dt;
    }
    // Symmetrize: A <- (A + A^T) / 2.
    let mut data = vec![Complex64::ZERO; dim * dim];
    for i in 0..dim {
        for j in 0..dim {
            data[i * dim + j] = Complex64::new(0.5 * (raw[i * dim + j] + raw[j * dim + i]), 0.0);
        }
    }
    let matrix = ComplexMatrix::new(dim, dim, data)?;
    DiscreteAction::new(matrix, vec![0.0; dim], dt, 2, n, 1.0)
}

/// Closed-form regularized transition amplitude.
///
/// `Z(eps) = prod_j (2 pi i / (lambda_j + i eps))^(1/2)
///           * exp(-i/2 J.(A + i eps I)^-1.J)`
/// with principal-branch square roots of each eigenvalue factor. The
/// exponent solves the shifted linear system by row-pivoted elimination.
pub fn gaussian_amplitude(action: &DiscreteAction, eps: f64) -> Result<Complex64, ActionError> {
    if !(eps > 0.0) {
        return Err(ActionError::InvalidParams(format!(
            "regulator must be positive, got {eps}"
        )));
    }
    let (eigenvalues, _) = sym_eigen(action.matrix())?;
    let two_pi_i = Complex64::new(0.0, 2.0 * std::f64::consts::PI);
    let mut prefactor = Complex64::ONE;
    for lambda in &eigenvalues {
        prefactor *= (two_pi_i / Complex64::new(*lambda, eps)).sqrt();
    }

    let dim = action.matrix().rows();
    let shifted = action
        .matrix()
        .add(&ComplexMatrix::identity(dim).scale(Complex64::new(0.0, eps)))?;
    let j_col = ComplexMatrix::new(
        dim,
        1,
        action
            .source()
            .iter()
            .map(|&x| Complex64::new(x, 0.0))
            .collect(),
    )?;
    let x = solve_linear(&shifted, &j_col)?;
    let mut j_ainv_j = Complex64::ZERO;
    for i in 0..dim {
        j_ainv_j += Complex64::new(action.source()[i], 0.0) * x.get(i, 0);
    }
    let exponent = Complex64::new(0.0, -0.5) * j_ainv_j;
    Ok(prefactor * exponent.exp())
}

/// Frequency-domain kernel values of the coupled pair.
#[derive(Debug, Clone, Copy)]
pub struct PropagatorBlock {
    /// Diagonal kernel `(omega^2 m - kappa) / (k12^2 - (omega^2 m - kappa)^2)`.
    pub aw: f64,
    /// Off-diagonal kernel `k12 / (k12^2 - (omega^2 m - kappa)^2)`.
    pub bw: f64,
    /// Pair kernel at the configured coupling; equals `bw` for the pair
    /// the params describe.
    pub d: f64,
}

/// Margin below which the kernel denominator counts as resonant.
pub const RESONANCE_TOL: f64 = 1e-12;

/// Pair kernel `k / (k^2 - (omega^2 m - kappa)^2)` for an arbitrary
/// coupling `k` at frequency `omega`.
pub fn pair_kernel(
    coupling: f64,
    omega: f64,
    params: &OscillatorParams,
) -> Result<f64, ActionError> {
    let u = omega * omega * params.m - params.kappa;
    let denominator = coupling * coupling - u * u;
    if denominator.abs() <= RESONANCE_TOL {
        return Err(ActionError::Resonance { denominator });
    }
    Ok(coupling / denominator)
}

/// Continuum-limit frequency propagator of the coupled pair.
pub fn frequency_propagator(
    params: &OscillatorParams,
    omega: f64,
) -> Result<PropagatorBlock, ActionError> {
    let u = omega * omega * params.m - params.kappa;
    let denominator = params.k12 * params.k12 - u * u;
    if denominator.abs() <= RESONANCE_TOL {
        return Err(ActionError::Resonance { denominator });
    }
    let bw = params.k12 / denominator;
    Ok(PropagatorBlock {
        aw: u / denominator,
        bw,
        d: bw,
    })
}

/// Monochromatic pair amplitude `exp(i Gamma_i d_ik j_k / (2 pi hbar))`.
///
/// Self-interaction kernels are omitted, so the amplitude is a pure phase.
pub fn pair_amplitude(
    src: &SourceSpec,
    tgt: &SourceSpec,
    params: &OscillatorParams,
    hbar: f64,
) -> Result<Complex64, ActionError> {
    let block = frequency_propagator(params, src.omega0)?;
    let phase = src.gamma * block.d * tgt.j / (2.0 * std::f64::consts::PI * hbar);
    Ok(Complex64::from_polar(1.0, phase))
}

/// Four-source twin-slit arrangement: emitter (1), slits (2, 4), detector
/// site (3), the couplings along both interaction chains and the path
/// lengths used in the free-particle comparison.
#[derive(Debug, Clone, Copy)]
pub struct TwinSlitLayout {
    /// Slit amplitudes Gamma_2, Gamma_4.
    pub slit_gamma: (f64, f64),
    /// Slit impulses j_2, j_4.
    pub slit_impulse: (f64, f64),
    /// Detector impulse j_3.
    pub detector_impulse: f64,
    /// Chain couplings.
    pub k12: f64,
    pub k23: f64,
    pub k14: f64,
    pub k43: f64,
    /// Path lengths for the wave-mechanics comparison.
    pub x12: f64,
    pub x14: f64,
    pub x23: f64,
    pub x43: f64,
}

impl TwinSlitLayout {
    pub fn new(
        slit_gamma: (f64, f64),
        slit_impulse: (f64, f64),
        detector_impulse: f64,
        couplings: (f64, f64, f64, f64),
        paths: (f64, f64, f64, f64),
    ) -> Result<Self, ActionError> {
        let (x12, x14, x23, x43) = paths;
        if !(x12 > 0.0 && x14 > 0.0 && x23 > 0.0 && x43 > 0.0) {
            return Err(ActionError::InvalidParams(
                "path lengths must be positive".to_string(),
            ));
        }
        let (k12, k23, k14, k43) = couplings;
        Ok(Self {
            slit_gamma,
            slit_impulse,
            detector_impulse,
            k12,
            k23,
            k14,
            k43,
            x12,
            x14,
            x23,
            x43,
        })
    }
}

/// Phase pair (chain via slit 2, chain via slit 4) of the twin-slit
/// amplitude, with the equidistant-emitter reduction applied.
pub fn twin_slit_phases(
    layout: &TwinSlitLayout,
    src: &SourceSpec,
    params: &OscillatorParams,
    hbar: f64,
) -> Result<(f64, f64), ActionError> {
    let two_pi_hbar = 2.0 * std::f64::consts::PI * hbar;
    let d12 = pair_kernel(layout.k12, src.omega0, params)?;
    let d23 = pair_kernel(layout.k23, src.omega0, params)?;
    let d14 = pair_kernel(layout.k14, src.omega0, params)?;
    let d43 = pair_kernel(layout.k43, src.omega0, params)?;

    let emitter_2 = src.gamma * d12 * layout.slit_impulse.0 / two_pi_hbar;
    let emitter_4 = src.gamma * d14 * layout.slit_impulse.1 / two_pi_hbar;
    let slit_2 = layout.slit_gamma.0 * d23 * layout.detector_impulse / two_pi_hbar;
    let slit_4 = layout.slit_gamma.1 * d43 * layout.detector_impulse / two_pi_hbar;

    let scale = emitter_2.abs().max(1.0);
    if (emitter_2 - emitter_4).abs() <= 1e-12 * scale {
        // Equidistant slits: the common factor drops.
        Ok((slit_2, slit_4))
    } else {
        Ok((emitter_2 + slit_2, emitter_4 + slit_4))
    }
}

/// Two-chain twin-slit amplitude; when the emitter-to-slit phases agree
/// the common factor is dropped and the familiar two-phasor form remains.
pub fn twin_slit_amplitude(
    layout: &TwinSlitLayout,
    src: &SourceSpec,
    params: &OscillatorParams,
    hbar: f64,
) -> Result<Complex64, ActionError> {
    let (upper, lower) = twin_slit_phases(layout, src, params, hbar)?;
    Ok(Complex64::from_polar(1.0, upper) + Complex64::from_polar(1.0, lower))
}

/// Free-particle twin-slit result with its prefactor kept separate.
#[derive(Debug, Clone, Copy)]
pub struct SchrodingerAmplitude {
    /// Two-phasor sum `exp(i p x23 / 2 hbar) + exp(i p x43 / 2 hbar)`.
    pub psi: Complex64,
    /// `sqrt(m / (2 pi i hbar t))`, tracked for normalization studies.
    pub prefactor: Complex64,
    /// Set when any path length drops below `10 hbar / p`; the phases
    /// are still returned.
    pub regime_violation: bool,
}

/// Wave-mechanics counterpart of the twin-slit amplitude.
pub fn schrodinger_twin_slit(
    layout: &TwinSlitLayout,
    p: f64,
    m: f64,
    hbar: f64,
    t: f64,
) -> Result<SchrodingerAmplitude, ActionError> {
    if !(p > 0.0 && m > 0.0 && hbar > 0.0 && t > 0.0) {
        return Err(ActionError::InvalidParams(
            "momentum, mass, hbar and interaction time must be positive".to_string(),
        ));
    }
    let psi = Complex64::from_polar(1.0, p * layout.x23 / (2.0 * hbar))
        + Complex64::from_polar(1.0, p * layout.x43 / (2.0 * hbar));
    let prefactor = (Complex64::new(m, 0.0)
        / Complex64::new(0.0, 2.0 * std::f64::consts::PI * hbar * t))
    .sqrt();
    let floor = 10.0 * hbar / p;
    let regime_violation =
        layout.x12 < floor || layout.x14 < floor || layout.x23 < floor || layout.x43 < floor;
    Ok(SchrodingerAmplitude {
        psi,
        prefactor,
        regime_violation,
    })
}

/// Relational separation of two coupled sources.
#[derive(Debug, Clone, Copy)]
pub struct RelationalMetric {
    /// `scale * Gamma * k / (k^2 - (omega0^2 m - kappa)^2)`.
    pub x_im: f64,
    /// Momentum transfer under the unit impulse-momentum identification;
    /// with `j = p` all layout dependence cancels and only the global
    /// scale survives.
    pub p: f64,
}

/// Global proportionality constant of the relational metric.
pub const DEFAULT_METRIC_SCALE: f64 = 1.0;

/// Relational distance with the default global scale.
pub fn relational_distance(
    gamma: f64,
    k_im: f64,
    params: &OscillatorParams,
    omega0: f64,
) -> Result<RelationalMetric, ActionError> {
    relational_distance_scaled(gamma, k_im, params, omega0, DEFAULT_METRIC_SCALE)
}

/// Relational distance with an explicit global scale.
///
/// Distance is only defined between interacting sources: zero coupling is
/// `NoInteraction`, not zero distance; the kernel pole is `Resonance`.
pub fn relational_distance_scaled(
    gamma: f64,
    k_im: f64,
    params: &OscillatorParams,
    omega0: f64,
    scale: f64,
) -> Result<RelationalMetric, ActionError> {
    if k_im == 0.0 {
        return Err(ActionError::NoInteraction);
    }
    let kernel = pair_kernel(k_im, omega0, params)?;
    Ok(RelationalMetric {
        x_im: scale * gamma * kernel,
        p: 1.0 / (std::f64::consts::PI * scale),
    })
}

/// Frozen reference systems driven by both the closed form and the
/// quadrature oracle: small well-conditioned symmetric matrices whose
/// spectra keep the oscillatory integrand resolvable on a truncated cube.
pub fn reference_system(n: usize) -> Option<(ComplexMatrix, Vec<f64>)> {
    match n {
        1 => Some((
            ComplexMatrix::from_real(1, 1, &[2.0]).expect("1x1"),
            vec![1.0],
        )),
        2 => Some((
            ComplexMatrix::from_real(2, 2, &[0.30, 0.08, 0.08, 0.22]).expect("2x2"),
            vec![0.3, -0.2],
        )),
        3 => Some((
            ComplexMatrix::from_real(
                3,
                3,
                &[0.18, 0.04, -0.03, 0.04, 0.15, 0.05, -0.03, 0.05, 0.20],
            )
            .expect("3x3"),
            vec![0.2, -0.1, 0.15],
        )),
        _ => None,
    }
}

/// Oracle resolution matched to the frozen reference systems.
pub fn reference_quadrature_spec(n: usize, eps: f64) -> QuadratureSpec {
    // Truncate where the damping falls to ~1e-8 of the peak.
    let half_width = (2.0 * 18.5 / eps).sqrt();
    match n {
        1 => QuadratureSpec::new(half_width, 512, 10),
        2 => QuadratureSpec::new(half_width, 96, 8),
        _ => QuadratureSpec::new(half_width, 72, 8),
    }
}

#[cfg(test)]
mod tests;
