//! Spin measurements as planar rotations: a measurement at angle theta
//! rotates into that basis (transpose as the basis change) and projects
//! on Z.

use num_complex::Complex64;

use super::InterferometerError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpinSign {
    Plus,
    Minus,
}

impl SpinSign {
    pub fn value(&self) -> i8 {
        match self {
            SpinSign::Plus => 1,
            SpinSign::Minus => -1,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            SpinSign::Plus => "+1",
            SpinSign::Minus => "-1",
        }
    }

    fn index(&self) -> usize {
        match self {
            SpinSign::Plus => 0,
            SpinSign::Minus => 1,
        }
    }
}

/// Stern-Gerlach orientations. Z, Gamma and Delta sit 120 degrees apart
/// on the circle; X (90 degrees) serves the single-atom follow-up after
/// an interaction-free measurement.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpinSetting {
    Z,
    Gamma,
    Delta,
    X,
}

impl SpinSetting {
    pub fn angle(&self) -> f64 {
        match self {
            SpinSetting::Z => 0.0,
            SpinSetting::Gamma => 2.0 * std::f64::consts::PI / 3.0,
            SpinSetting::Delta => 4.0 * std::f64::consts::PI / 3.0,
            SpinSetting::X => std::f64::consts::FRAC_PI_2,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            SpinSetting::Z => "Z",
            SpinSetting::Gamma => "Gamma",
            SpinSetting::Delta => "Delta",
            SpinSetting::X => "X",
        }
    }

    /// The three settings drawn by the random measurement policy.
    pub const POLICY_CHOICES: [SpinSetting; 3] =
        [SpinSetting::Z, SpinSetting::Gamma, SpinSetting::Delta];
}

/// One- or two-atom spin state over the Z basis; single atoms use
/// `[+, -]`, pairs use `[++, +-, -+, --]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinState {
    amplitudes: Vec<Complex64>,
}

impl SpinState {
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self, InterferometerError> {
        if amplitudes.len() != 2 && amplitudes.len() != 4 {
            return Err(InterferometerError::InvalidState(format!(
                "spin state needs 2 or 4 amplitudes, got {}",
                amplitudes.len()
            )));
        }
        let norm_sqr: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum();
        if (norm_sqr - 1.0).abs() > 1e-12 {
            return Err(InterferometerError::NotNormalized { norm_sqr });
        }
        Ok(Self { amplitudes })
    }

    /// Single atom pinned along Z.
    pub fn single(sign: SpinSign) -> Self {
        let mut amplitudes = vec![Complex64::ZERO; 2];
        amplitudes[sign.index()] = Complex64::ONE;
        Self { amplitudes }
    }

    /// Two-atom state `(|Z+ Z+> + |Z- Z->) / sqrt 2`.
    pub fn epr_pair() -> Self {
        let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        Self {
            amplitudes: vec![h, Complex64::ZERO, Complex64::ZERO, h],
        }
    }

    pub fn atoms(&self) -> usize {
        if self.amplitudes.len() == 2 {
            1
        } else {
            2
        }
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// Squared overlap with another state of the same shape.
    pub fn fidelity(&self, other: &Self) -> f64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum::<Complex64>()
            .norm_sqr()
    }
}

/// Planar rotation by theta.
fn rotation(theta: f64) -> [[f64; 2]; 2] {
    let (sin, cos) = (0.5 * theta).sin_cos();
    [[cos, -sin], [sin, cos]]
}

/// Z-basis outcome probabilities after rotating each atom into its
/// measurement basis. One setting per atom; single-atom states return
/// `[P(+), P(-)]`, pairs return `[P(++), P(+-), P(-+), P(--)]`.
pub fn spin_measure(
    state: &SpinState,
    settings: &[SpinSetting],
) -> Result<Vec<f64>, InterferometerError> {
    if settings.len() != state.atoms() {
        return Err(InterferometerError::InvalidState(format!(
            "{} settings for {} atoms",
            settings.len(),
            state.atoms()
        )));
    }
    let norm_sqr: f64 = state.amplitudes.iter().map(|z| z.norm_sqr()).sum();
    if (norm_sqr - 1.0).abs() > 1e-12 {
        return Err(InterferometerError::NotNormalized { norm_sqr });
    }
    match state.atoms() {
        1 => {
            let r = rotation(settings[0].angle());
            // Transposed rotation as the basis change.
            let plus = state.amplitudes[0] * r[0][0] + state.amplitudes[1] * r[1][0];
            let minus = state.amplitudes[0] * r[0][1] + state.amplitudes[1] * r[1][1];
            Ok(vec![plus.norm_sqr(), minus.norm_sqr()])
        }
        _ => {
            let r1 = rotation(settings[0].angle());
            let r2 = rotation(settings[1].angle());
            let amp = |j: usize, k: usize| -> Complex64 {
                let mut acc = Complex64::ZERO;
                for jp in 0..2 {
                    for kp in 0..2 {
                        acc += state.amplitudes[2 * jp + kp] * r1[jp][j] * r2[kp][k];
                    }
                }
                acc
            };
            Ok(vec![
                amp(0, 0).norm_sqr(),
                amp(0, 1).norm_sqr(),
                amp(1, 0).norm_sqr(),
                amp(1, 1).norm_sqr(),
            ])
        }
    }
}

/// Probability that both atoms report the same sign.
pub fn agreement_probability(
    state: &SpinState,
    s1: SpinSetting,
    s2: SpinSetting,
) -> Result<f64, InterferometerError> {
    let probs = spin_measure(state, &[s1, s2])?;
    Ok(probs[0] + probs[3])
}
