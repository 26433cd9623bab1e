//! Mach-Zehnder pipeline over the three-channel click basis
//! (D1 path, D2 path, absorbed).

use num_complex::Complex64;

use super::symmetry::{beam_splitter, IrrepElement};
use super::InterferometerError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Blocker {
    None,
    LowerArm,
    UpperArm,
    BothArms,
}

/// Declarative interferometer layout. Component 1 of the internal state
/// is the path ending at D1 (upper arm between the mirrors), component 2
/// the path ending at D2 (lower arm), component 3 the absorbed channel.
#[derive(Debug, Clone, Copy)]
pub struct MZIConfig {
    pub has_bs1: bool,
    pub has_bs2: bool,
    pub blocker: Blocker,
    k_w: f64,
}

impl MZIConfig {
    pub fn new(
        k_w: f64,
        has_bs1: bool,
        has_bs2: bool,
        blocker: Blocker,
    ) -> Result<Self, InterferometerError> {
        if !(k_w > 0.0) {
            return Err(InterferometerError::InvalidState(format!(
                "wavenumber must be positive, got {k_w}"
            )));
        }
        Ok(Self {
            has_bs1,
            has_bs2,
            blocker,
            k_w,
        })
    }

    /// Full interferometer (both beam splitters) at unit wavenumber.
    pub fn standard(blocker: Blocker) -> Self {
        Self {
            has_bs1: true,
            has_bs2: true,
            blocker,
            k_w: 1.0,
        }
    }

    pub fn k_w(&self) -> f64 {
        self.k_w
    }

    /// Beam-splitter parameter; `a0 k = pi/4` by construction.
    pub fn a0(&self) -> f64 {
        std::f64::consts::FRAC_PI_4 / self.k_w
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhotonOutcome {
    D1,
    D2,
    Absorbed,
}

impl PhotonOutcome {
    pub fn label(&self) -> &'static str {
        match self {
            PhotonOutcome::D1 => "D1",
            PhotonOutcome::D2 => "D2",
            PhotonOutcome::Absorbed => "Absorbed",
        }
    }
}

/// Labeled final amplitudes over {D1, D2, Absorbed} with their Born
/// probabilities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OutcomeDistribution {
    amplitudes: [Complex64; 3],
}

impl OutcomeDistribution {
    pub fn amplitudes(&self) -> [Complex64; 3] {
        self.amplitudes
    }

    pub fn probabilities(&self) -> [f64; 3] {
        [
            self.amplitudes[0].norm_sqr(),
            self.amplitudes[1].norm_sqr(),
            self.amplitudes[2].norm_sqr(),
        ]
    }

    pub fn probability(&self, outcome: PhotonOutcome) -> f64 {
        match outcome {
            PhotonOutcome::D1 => self.amplitudes[0].norm_sqr(),
            PhotonOutcome::D2 => self.amplitudes[1].norm_sqr(),
            PhotonOutcome::Absorbed => self.amplitudes[2].norm_sqr(),
        }
    }

    pub fn amplitude(&self, outcome: PhotonOutcome) -> Complex64 {
        match outcome {
            PhotonOutcome::D1 => self.amplitudes[0],
            PhotonOutcome::D2 => self.amplitudes[1],
            PhotonOutcome::Absorbed => self.amplitudes[2],
        }
    }
}

/// Propagate the source state `|1>` through the configured layout.
///
/// BS1 applies the beam-splitter unitary, the mirrors apply the
/// zero-parameter reflection (the split state is its eigenstate, so the
/// click distribution is untouched), a blocker moves the blocked arm's
/// amplitude into the absorbed channel, and BS2 applies the adjoint
/// splitter embedded as the upper-left block of the three-channel
/// operator.
pub fn run_mzi(config: &MZIConfig) -> OutcomeDistribution {
    evolve(config, false)
}

/// Same pipeline with one extra mirror reflection inserted between the
/// mirrors and the blocker; exposed to let tests exercise the eigenstate
/// property.
pub(crate) fn evolve(config: &MZIConfig, extra_mirror: bool) -> OutcomeDistribution {
    let mut arms = [Complex64::ONE, Complex64::ZERO];
    let mut absorbed = Complex64::ZERO;

    let q = beam_splitter(config.k_w);
    if config.has_bs1 {
        let out = q.apply(&arms).expect("2-vector");
        arms = [out[0], out[1]];
    }

    let mirror = IrrepElement::reflection(0.0, config.k_w);
    arms = mirror.apply(arms);
    if extra_mirror {
        arms = mirror.apply(arms);
    }

    match config.blocker {
        Blocker::None => {}
        Blocker::LowerArm => {
            absorbed = arms[1];
            arms[1] = Complex64::ZERO;
        }
        Blocker::UpperArm => {
            absorbed = arms[0];
            arms[0] = Complex64::ZERO;
        }
        Blocker::BothArms => {
            absorbed = Complex64::new((arms[0].norm_sqr() + arms[1].norm_sqr()).sqrt(), 0.0);
            arms = [Complex64::ZERO, Complex64::ZERO];
        }
    }

    if config.has_bs2 {
        let qd = q.dagger();
        let out = qd.apply(&arms).expect("2-vector");
        arms = [out[0], out[1]];
    }

    let dist = OutcomeDistribution {
        amplitudes: [arms[0], arms[1], absorbed],
    };
    debug_assert!((dist.probabilities().iter().sum::<f64>() - 1.0).abs() <= 1e-12);
    dist
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    const HALF_SQRT: f64 = std::f64::consts::FRAC_1_SQRT_2;

    #[test]
    fn empty_interferometer_clicks_d1() {
        let dist = run_mzi(&MZIConfig::standard(Blocker::None));
        let amps = dist.amplitudes();
        assert!((amps[0] - Complex64::ONE).norm() <= 1e-15);
        assert!(amps[1].norm() <= 1e-15);
        assert_abs_diff_eq!(dist.probability(PhotonOutcome::D1), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn lower_arm_blocked() {
        let dist = run_mzi(&MZIConfig::standard(Blocker::LowerArm));
        let amps = dist.amplitudes();
        assert!((amps[0] - Complex64::new(0.5, 0.0)).norm() <= 1e-15);
        assert!((amps[1] - Complex64::new(-0.5, 0.0)).norm() <= 1e-15);
        assert!((amps[2] - Complex64::new(HALF_SQRT, 0.0)).norm() <= 1e-15);
        let p = dist.probabilities();
        assert_abs_diff_eq!(p[0], 0.25, epsilon = 1e-15);
        assert_abs_diff_eq!(p[1], 0.25, epsilon = 1e-15);
        assert_abs_diff_eq!(p[2], 0.5, epsilon = 1e-15);
    }

    #[test]
    fn upper_arm_blocked() {
        let dist = run_mzi(&MZIConfig::standard(Blocker::UpperArm));
        let amps = dist.amplitudes();
        assert!((amps[0] - Complex64::new(0.5, 0.0)).norm() <= 1e-15);
        assert!((amps[1] - Complex64::new(0.5, 0.0)).norm() <= 1e-15);
        assert!((amps[2] - Complex64::new(HALF_SQRT, 0.0)).norm() <= 1e-15);
    }

    #[test]
    fn both_arms_blocked() {
        let dist = run_mzi(&MZIConfig::standard(Blocker::BothArms));
        assert_abs_diff_eq!(
            dist.probability(PhotonOutcome::Absorbed),
            1.0,
            epsilon = 1e-15
        );
    }

    #[test]
    fn single_splitter_gives_even_odds() {
        let config = MZIConfig::new(1.0, false, true, Blocker::None).unwrap();
        let dist = run_mzi(&config);
        let p = dist.probabilities();
        assert_abs_diff_eq!(p[0], 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(p[1], 0.5, epsilon = 1e-15);
    }

    #[test]
    fn probabilities_sum_to_one() {
        for blocker in [
            Blocker::None,
            Blocker::LowerArm,
            Blocker::UpperArm,
            Blocker::BothArms,
        ] {
            for (bs1, bs2) in [(true, true), (true, false), (false, true), (false, false)] {
                let config = MZIConfig::new(1.3, bs1, bs2, blocker).unwrap();
                let total: f64 = run_mzi(&config).probabilities().iter().sum();
                assert_abs_diff_eq!(total, 1.0, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn extra_mirror_changes_nothing() {
        // The split state is an eigenstate of the mirror reflection, so a
        // second reflection between the mirrors and BS2 leaves every
        // distribution unchanged.
        for blocker in [
            Blocker::None,
            Blocker::LowerArm,
            Blocker::UpperArm,
            Blocker::BothArms,
        ] {
            let config = MZIConfig::standard(blocker);
            let plain = evolve(&config, false);
            let doubled = evolve(&config, true);
            for (a, b) in plain
                .probabilities()
                .iter()
                .zip(doubled.probabilities().iter())
            {
                assert_abs_diff_eq!(a, b, epsilon = 1e-14);
            }
        }
    }

    #[test]
    fn beam_splitter_parameter_relation() {
        let config = MZIConfig::new(2.0, true, true, Blocker::None).unwrap();
        assert_abs_diff_eq!(
            config.a0() * config.k_w(),
            std::f64::consts::FRAC_PI_4,
            epsilon = 0.0
        );
    }
}
