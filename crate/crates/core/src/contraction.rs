//! Weak-relativistic coordinate transforms, the boost-translation phase,
//! and a numerical check that the canonical commutation relations emerge
//! from the relativistic algebra as `c` grows.
//!
//! The commutator check builds the one-dimensional positive-energy
//! representation on a momentum grid: spatial translations act by
//! multiplication with `p / hbar`, the energy acts by multiplication with
//! `E(p) = sqrt(m^2 c^4 + p^2 c^2)`, and the position operator is the
//! 4th-order central difference `i hbar d/dp`. The boost generator is the
//! symmetrized product `K = (x E + E x) / (2 hbar c^2)`. The residual of
//! `(hbar^2 / m) [T, K] + i hbar` then decays like `c^-2`, with the
//! leading correction set by the packet's momentum spread.

use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ContractionError {
    #[error("superluminal boost: |v| = {v} with c = {c}")]
    SuperluminalBoost { v: f64, c: f64 },
    #[error("operator-ordering ratio varies across the grid by {spread:.3e}")]
    NonUniformRatio { spread: f64 },
    #[error("grid too coarse: residual {residual:.3e} vs {refined:.3e} on the doubled spacing")]
    GridTooCoarse { residual: f64, refined: f64 },
    #[error("invalid wavepacket: {0}")]
    BadWavepacket(String),
    #[error("translation {a} is not an integer multiple of grid spacing {spacing}")]
    ShiftNotOnGrid { a: f64, spacing: f64 },
    #[error("wavefunction sampled on the wrong axis: expected {expected:?}, got {got:?}")]
    WrongAxis { expected: AxisKind, got: AxisKind },
}

/// Physical constants of the one-particle representation.
#[derive(Debug, Clone, Copy)]
pub struct PoincareRepConfig {
    c: f64,
    m: f64,
    hbar: f64,
}

impl PoincareRepConfig {
    pub fn new(c: f64, m: f64, hbar: f64) -> Result<Self, ContractionError> {
        if !(c > 0.0 && m > 0.0 && hbar > 0.0) {
            return Err(ContractionError::BadWavepacket(format!(
                "c, m, hbar must be strictly positive (got {c}, {m}, {hbar})"
            )));
        }
        Ok(Self { c, m, hbar })
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn m(&self) -> f64 {
        self.m
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    /// Relativistic energy at momentum `p`.
    pub fn energy(&self, p: f64) -> f64 {
        let mc2 = self.m * self.c * self.c;
        (mc2 * mc2 + p * p * self.c * self.c).sqrt()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AxisKind {
    Position,
    Momentum,
}

/// Complex amplitudes sampled on a uniform axis.
///
/// Wavepackets must fit their grid: at least 64 samples, every value
/// finite, and decay below 1e-8 of the peak at both ends.
#[derive(Debug, Clone)]
pub struct GridWavefunction {
    kind: AxisKind,
    start: f64,
    spacing: f64,
    values: Vec<Complex64>,
}

/// Required end-of-grid decay relative to the packet peak.
pub const EDGE_DECAY: f64 = 1e-8;

impl GridWavefunction {
    pub fn new(
        kind: AxisKind,
        start: f64,
        spacing: f64,
        values: Vec<Complex64>,
    ) -> Result<Self, ContractionError> {
        if values.len() < 64 {
            return Err(ContractionError::BadWavepacket(format!(
                "{} samples, need at least 64",
                values.len()
            )));
        }
        if !(spacing > 0.0) || !start.is_finite() {
            return Err(ContractionError::BadWavepacket(
                "axis start/spacing must be finite, spacing positive".to_string(),
            ));
        }
        if values.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(ContractionError::BadWavepacket(
                "non-finite amplitude".to_string(),
            ));
        }
        let peak = values.iter().map(|z| z.norm()).fold(0.0, f64::max);
        if peak == 0.0 {
            return Err(ContractionError::BadWavepacket(
                "identically zero wavepacket".to_string(),
            ));
        }
        let first = values.first().unwrap().norm();
        let last = values.last().unwrap().norm();
        if first > EDGE_DECAY * peak || last > EDGE_DECAY * peak {
            return Err(ContractionError::BadWavepacket(format!(
                "edge values {:.3e}/{:.3e} exceed {EDGE_DECAY:e} of peak {:.3e}",
                first, last, peak
            )));
        }
        Ok(Self {
            kind,
            start,
            spacing,
            values,
        })
    }

    /// Gaussian packet `exp(-(x - center)^2 / (2 width^2))` sampled on
    /// `n` points covering `[-half_width, half_width)`, L2-normalized.
    pub fn gaussian(
        kind: AxisKind,
        center: f64,
        width: f64,
        half_width: f64,
        n: usize,
    ) -> Result<Self, ContractionError> {
        let spacing = 2.0 * half_width / n as f64;
        let mut values: Vec<Complex64> = (0..n)
            .map(|j| {
                let x = -half_width + j as f64 * spacing;
                let arg = (x - center) / width;
                Complex64::new((-0.5 * arg * arg).exp(), 0.0)
            })
            .collect();
        let norm: f64 = values.iter().map(|z| z.norm_sqr()).sum::<f64>() * spacing;
        let scale = 1.0 / norm.sqrt();
        for v in &mut values {
            *v *= scale;
        }
        Self::new(kind, -half_width, spacing, values)
    }

    pub fn kind(&self) -> AxisKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn axis_value(&self, j: usize) -> f64 {
        self.start + j as f64 * self.spacing
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// Every-other-point subsample (doubled spacing, same range).
    fn coarsened(&self) -> Result<Self, ContractionError> {
        let values: Vec<Complex64> = self.values.iter().step_by(2).copied().collect();
        Self::new(self.kind, self.start, 2.0 * self.spacing, values)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpacetimeEvent {
    pub x: f64,
    pub t: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TransformKind {
    Galilean,
    WeakRelativistic,
    Lorentz,
}

/// Boost parameters for the three coordinate-transform families.
#[derive(Debug, Clone, Copy)]
pub struct TransformParams {
    v: f64,
    c: f64,
    kind: TransformKind,
}

impl TransformParams {
    pub fn new(v: f64, c: f64, kind: TransformKind) -> Result<Self, ContractionError> {
        if !(c > 0.0) || !v.is_finite() {
            return Err(ContractionError::BadWavepacket(
                "boost parameters must be finite with c > 0".to_string(),
            ));
        }
        if kind == TransformKind::Lorentz && v.abs() >= c {
            return Err(ContractionError::SuperluminalBoost { v, c });
        }
        Ok(Self { v, c, kind })
    }

    pub fn v(&self) -> f64 {
        self.v
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn kind(&self) -> TransformKind {
        self.kind
    }

    /// Lorentz factor; 1/sqrt(1 - v^2/c^2).
    pub fn gamma(&self) -> f64 {
        1.0 / (1.0 - (self.v / self.c).powi(2)).sqrt()
    }
}

/// Apply a boost to a spacetime event.
///
/// Galilean keeps time absolute; the weak-relativistic form adds the
/// `v x / c^2` simultaneity shift; Lorentz additionally scales both
/// coordinates by gamma.
pub fn apply_transform(e: SpacetimeEvent, p: TransformParams) -> SpacetimeEvent {
    let x = e.x - p.v * e.t;
    match p.kind {
        TransformKind::Galilean => SpacetimeEvent { x, t: e.t },
        TransformKind::WeakRelativistic => SpacetimeEvent {
            x,
            t: e.t - p.v * e.x / (p.c * p.c),
        },
        TransformKind::Lorentz => {
            let g = p.gamma();
            SpacetimeEvent {
                x: g * x,
                t: g * (e.t - p.v * e.x / (p.c * p.c)),
            }
        }
    }
}

/// Cyclic shift realizing the exact translation `psi(x) -> psi(x - a)`,
/// `a = steps * spacing`.
fn shift_cyclic(values: &[Complex64], steps: i64) -> Vec<Complex64> {
    let n = values.len() as i64;
    (0..n)
        .map(|j| values[(j - steps).rem_euclid(n) as usize])
        .collect()
}

/// Pointwise boost phase `exp(-i v m x / hbar)`.
fn boost_multiplier(psi: &GridWavefunction, v: f64, cfg: &PoincareRepConfig) -> Vec<Complex64> {
    (0..psi.len())
        .map(|j| {
            let x = psi.axis_value(j);
            Complex64::from_polar(1.0, -v * cfg.m * x / cfg.hbar)
        })
        .collect()
}

/// Ratio of the two operator orderings `(U_K U_T psi) / (U_T U_K psi)`.
///
/// The translation must be an exact number of grid steps so the shifted
/// samples cancel in the ratio and only the ordering phase survives. The
/// result equals `exp(-i a v m / hbar)` and is constant across the grid;
/// a spread beyond 1e-10 reports `NonUniformRatio`.
pub fn boost_translation_phase(
    psi: &GridWavefunction,
    a: f64,
    v: f64,
    cfg: &PoincareRepConfig,
) -> Result<Complex64, ContractionError> {
    if psi.kind() != AxisKind::Position {
        return Err(ContractionError::WrongAxis {
            expected: AxisKind::Position,
            got: psi.kind(),
        });
    }
    let steps_f = a / psi.spacing();
    let steps = steps_f.round();
    if (steps_f - steps).abs() > 1e-9 {
        return Err(ContractionError::ShiftNotOnGrid {
            a,
            spacing: psi.spacing(),
        });
    }
    let steps = steps as i64;

    let phases = boost_multiplier(psi, v, cfg);
    // U_K U_T psi: shift, then multiply.
    let shifted = shift_cyclic(psi.values(), steps);
    let kt: Vec<Complex64> = shifted.iter().zip(&phases).map(|(s, p)| s * p).collect();
    // U_T U_K psi: multiply, then shift.
    let boosted: Vec<Complex64> = psi
        .values()
        .iter()
        .zip(&phases)
        .map(|(s, p)| s * p)
        .collect();
    let tk = shift_cyclic(&boosted, steps);

    let peak = psi.values().iter().map(|z| z.norm()).fold(0.0, f64::max);
    let cutoff = 1e-6 * peak;
    let mut reference: Option<(usize, Complex64)> = None;
    // Anchor the ratio at the largest surviving sample.
    let mut best = 0.0;
    for (j, t) in tk.iter().enumerate() {
        if t.norm() > best {
            best = t.norm();
            reference = Some((j, kt[j] / t));
        }
    }
    let (_, ratio) =
        reference.ok_or_else(|| ContractionError::BadWavepacket("empty support".to_string()))?;
    let mut spread = 0.0f64;
    for (j, t) in tk.iter().enumerate() {
        if t.norm() > cutoff {
            spread = spread.max((kt[j] / t - ratio).norm());
        }
    }
    if spread > 1e-10 {
        return Err(ContractionError::NonUniformRatio { spread });
    }
    Ok(ratio)
}

/// 4th-order central first derivative on a cyclic grid.
fn central_derivative(values: &[Complex64], spacing: f64) -> Vec<Complex64> {
    let n = values.len() as i64;
    let at = |j: i64| values[j.rem_euclid(n) as usize];
    (0..n)
        .map(|j| {
            (-at(j + 2) + at(j + 1) * 8.0 - at(j - 1) * 8.0 + at(j - 2)) / (12.0 * spacing)
        })
        .collect()
}

fn l2_norm(values: &[Complex64]) -> f64 {
    values.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Residual of the contracted commutator on a momentum-space packet.
///
/// Returns `(residual, predicted_correction)` where the residual is
/// `|| (hbar^2/m)[T, K] psi + i hbar psi || / ||psi||` and the prediction
/// is the norm of the leading `p^2 / (2 m^2 c^2)` correction applied to
/// the same packet. Their ratio tends to 1 as `c` grows.
///
/// A convergence guard re-evaluates the residual on the doubled spacing
/// (every other sample); disagreement beyond 10% flags `GridTooCoarse`,
/// except when both values sit below the 1e-9 hbar contraction floor.
/// The guard needs at least 128 samples.
pub fn ccr_residual(
    cfg: &PoincareRepConfig,
    psi: &GridWavefunction,
) -> Result<(f64, f64), ContractionError> {
    if psi.kind() != AxisKind::Momentum {
        return Err(ContractionError::WrongAxis {
            expected: AxisKind::Momentum,
            got: psi.kind(),
        });
    }
    if psi.len() < 128 {
        return Err(ContractionError::BadWavepacket(format!(
            "{} samples; the convergence guard needs at least 128",
            psi.len()
        )));
    }
    let residual = commutator_residual(cfg, psi);
    let coarse = psi.coarsened()?;
    let refined = commutator_residual(cfg, &coarse);
    let floor = 1e-9 * cfg.hbar;
    let largest = residual.max(refined);
    if largest > floor && (residual - refined).abs() > 0.1 * largest {
        return Err(ContractionError::GridTooCoarse { residual, refined });
    }

    // Leading correction: norm of (p^2 / 2 m^2 c^2) applied to the packet.
    let mut num = 0.0;
    let mut den = 0.0;
    for (j, z) in psi.values().iter().enumerate() {
        let p = psi.axis_value(j);
        let w = z.norm_sqr();
        num += p.powi(4) * w;
        den += w;
    }
    let prediction = cfg.hbar * (num / den).sqrt() / (2.0 * cfg.m * cfg.m * cfg.c * cfg.c);
    Ok((residual, prediction))
}

/// `|| (hbar^2/m) [T, K] psi + i hbar psi || / || psi ||` on one grid.
fn commutator_residual(cfg: &PoincareRepConfig, psi: &GridWavefunction) -> f64 {
    let n = psi.len();
    let h = psi.spacing();
    let hbar = cfg.hbar;
    let c2 = cfg.c * cfg.c;

    let momentum: Vec<f64> = (0..n).map(|j| psi.axis_value(j)).collect();
    let energy: Vec<f64> = momentum.iter().map(|&p| cfg.energy(p)).collect();

    let apply_t = |v: &[Complex64]| -> Vec<Complex64> {
        v.iter()
            .zip(&momentum)
            .map(|(z, &p)| z * (p / hbar))
            .collect()
    };
    let apply_e = |v: &[Complex64]| -> Vec<Complex64> {
        v.iter().zip(&energy).map(|(z, &e)| z * e).collect()
    };
    // x = i hbar d/dp in the momentum representation.
    let apply_x = |v: &[Complex64]| -> Vec<Complex64> {
        central_derivative(v, h)
            .into_iter()
            .map(|z| z * Complex64::new(0.0, hbar))
            .collect()
    };
    // K = (x E + E x) / (2 hbar c^2), symmetrized.
    let apply_k = |v: &[Complex64]| -> Vec<Complex64> {
        let xe = apply_x(&apply_e(v));
        let ex = apply_e(&apply_x(v));
        xe.iter()
            .zip(&ex)
            .map(|(a, b)| (a + b) / (2.0 * hbar * c2))
            .collect()
    };

    let values = psi.values();
    let tk = apply_t(&apply_k(values));
    let kt = apply_k(&apply_t(values));
    let factor = hbar * hbar / cfg.m;
    let residual_vec: Vec<Complex64> = values
        .iter()
        .enumerate()
        .map(|(j, z)| (tk[j] - kt[j]) * factor + Complex64::new(0.0, hbar) * z)
        .collect();
    l2_norm(&residual_vec) / l2_norm(values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn natural_units() -> PoincareRepConfig {
        PoincareRepConfig::new(100.0, 1.0, 1.0).unwrap()
    }

    fn position_packet() -> GridWavefunction {
        GridWavefunction::gaussian(AxisKind::Position, 0.0, 1.0, 20.0, 1024).unwrap()
    }

    #[test]
    fn galilean_keeps_time_absolute() {
        let p = TransformParams::new(3.0, 10.0, TransformKind::Galilean).unwrap();
        let e = SpacetimeEvent { x: 2.0, t: 5.0 };
        let img = apply_transform(e, p);
        assert_eq!(img.t, 5.0);
        assert_abs_diff_eq!(img.x, 2.0 - 15.0, epsilon = 1e-15);
    }

    #[test]
    fn zero_boost_is_identity() {
        for kind in [
            TransformKind::Galilean,
            TransformKind::WeakRelativistic,
            TransformKind::Lorentz,
        ] {
            let p = TransformParams::new(0.0, 10.0, kind).unwrap();
            let e = SpacetimeEvent { x: 1.5, t: -2.5 };
            let img = apply_transform(e, p);
            assert_eq!(img, e);
        }
    }

    #[test]
    fn simultaneity_shift() {
        // Two events at equal t, separated by d: weak-relativistic image
        // times differ by v d / c^2.
        let (v, c, d) = (2.0, 7.0, 3.5);
        let p = TransformParams::new(v, c, TransformKind::WeakRelativistic).unwrap();
        let e1 = apply_transform(SpacetimeEvent { x: 0.0, t: 1.0 }, p);
        let e2 = apply_transform(SpacetimeEvent { x: d, t: 1.0 }, p);
        assert_abs_diff_eq!((e1.t - e2.t).abs(), v * d / (c * c), epsilon = 1e-15);
    }

    #[test]
    fn superluminal_lorentz_rejected() {
        assert!(matches!(
            TransformParams::new(10.0, 3.0, TransformKind::Lorentz),
            Err(ContractionError::SuperluminalBoost { .. })
        ));
        // Weak-relativistic transforms carry no gamma, so no bound applies.
        assert!(TransformParams::new(10.0, 3.0, TransformKind::WeakRelativistic).is_ok());
    }

    #[test]
    fn zero_velocity_phase_is_one() {
        let cfg = natural_units();
        let psi = position_packet();
        let ratio = boost_translation_phase(&psi, 0.625, 0.0, &cfg).unwrap();
        assert!((ratio - Complex64::ONE).norm() <= 1e-12);
    }

    #[test]
    fn pi_phase_gives_minus_one() {
        let cfg = natural_units();
        let psi = position_packet();
        // a v m = pi with a an exact number of grid steps.
        let a = 0.625; // 16 steps of 40/1024
        let v = std::f64::consts::PI / a;
        let ratio = boost_translation_phase(&psi, a, v, &cfg).unwrap();
        assert!((ratio + Complex64::ONE).norm() <= 1e-12);
    }

    #[test]
    fn closed_form_phase() {
        // a = 0.3, v = 2, m = 1.5: ratio = exp(-0.9 i) on a grid where
        // 0.3 is an exact multiple of the spacing (0.3 / 32).
        let cfg = PoincareRepConfig::new(100.0, 1.5, 1.0).unwrap();
        let spacing = 0.3 / 32.0;
        let n = 4096;
        let half = spacing * n as f64 / 2.0;
        let psi = GridWavefunction::gaussian(AxisKind::Position, 0.0, 1.0, half, n).unwrap();
        let ratio = boost_translation_phase(&psi, 0.3, 2.0, &cfg).unwrap();
        let expected = Complex64::from_polar(1.0, -0.9);
        assert!((ratio - expected).norm() <= 1e-12);
    }

    #[test]
    fn phase_has_unit_modulus() {
        let cfg = natural_units();
        let psi = position_packet();
        for (a, v) in [(0.625, 1.7), (-1.25, 0.3), (2.5, -4.2)] {
            let ratio = boost_translation_phase(&psi, a, v, &cfg).unwrap();
            assert_abs_diff_eq!(ratio.norm(), 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn swapped_order_conjugates_the_phase() {
        // Reversing the operator order inverts the ratio, which for a
        // unit-modulus phase is complex conjugation; reversing the sign
        // of the translation does the same thing.
        let cfg = natural_units();
        let psi = position_packet();
        let forward = boost_translation_phase(&psi, 0.625, 1.3, &cfg).unwrap();
        let reversed = boost_translation_phase(&psi, -0.625, 1.3, &cfg).unwrap();
        assert!((forward.conj() - reversed).norm() <= 1e-12);
    }

    #[test]
    fn misaligned_shift_rejected() {
        let cfg = natural_units();
        let psi = position_packet();
        assert!(matches!(
            boost_translation_phase(&psi, 0.3, 1.0, &cfg),
            Err(ContractionError::ShiftNotOnGrid { .. })
        ));
    }

    fn momentum_packet(n: usize) -> GridWavefunction {
        GridWavefunction::gaussian(AxisKind::Momentum, 0.0, 1.0, 8.0, n).unwrap()
    }

    #[test]
    fn contraction_limit_residual_vanishes() {
        // Extreme c: the commutator collapses onto the canonical one and
        // only the discretization floor remains.
        let cfg = PoincareRepConfig::new(1e6, 1.0, 1.0).unwrap();
        let psi = momentum_packet(8192);
        let (residual, _) = ccr_residual(&cfg, &psi).unwrap();
        assert!(residual < 1e-9, "residual {residual:.3e}");
    }

    #[test]
    fn residual_tracks_predicted_correction() {
        let cfg = PoincareRepConfig::new(100.0, 1.0, 1.0).unwrap();
        let psi = momentum_packet(4096);
        let (residual, prediction) = ccr_residual(&cfg, &psi).unwrap();
        assert!(
            (residual / prediction - 1.0).abs() <= 0.05,
            "ratio {}",
            residual / prediction
        );
    }

    #[test]
    fn residual_monotone_in_c() {
        let psi = momentum_packet(4096);
        let mut last = f64::INFINITY;
        for c in [10.0, 30.0, 100.0, 300.0, 1000.0] {
            let cfg = PoincareRepConfig::new(c, 1.0, 1.0).unwrap();
            let (residual, _) = ccr_residual(&cfg, &psi).unwrap();
            assert!(
                residual <= last * (1.0 + 1e-9),
                "residual increased at c = {c}"
            );
            last = residual;
        }
    }

    #[test]
    fn coarse_grid_detected() {
        // On 512 points the discretization floor rivals the c^-2 signal
        // at c = 1000, and the doubled-spacing check must catch it.
        let cfg = PoincareRepConfig::new(1000.0, 1.0, 1.0).unwrap();
        let psi = momentum_packet(512);
        assert!(matches!(
            ccr_residual(&cfg, &psi),
            Err(ContractionError::GridTooCoarse { .. })
        ));
    }

    #[test]
    fn wrong_axis_rejected() {
        let cfg = natural_units();
        let pos = position_packet();
        assert!(matches!(
            ccr_residual(&cfg, &pos),
            Err(ContractionError::WrongAxis { .. })
        ));
        let mom = momentum_packet(512);
        assert!(matches!(
            boost_translation_phase(&mom, 0.5, 1.0, &cfg),
            Err(ContractionError::WrongAxis { .. })
        ));
    }
}
