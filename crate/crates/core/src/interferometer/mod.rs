//! Interferometer simulation through spacetime symmetry irreps.
//!
//! Click distributions come from 2x2 translation/reflection irreps: the
//! beam splitter is `(1/sqrt 2)(I - i S(a0))`, mirrors are reflections,
//! and blockers divert one arm into an absorbed channel. On top of the
//! single-photon pipeline sit the interaction-free measurement protocol,
//! the two-atom liar arrangement post-selected on D2 clicks, and the
//! instruction-set bound its statistics violate.

mod mzi;
mod spin;
mod symmetry;
mod trials;

use thiserror::Error;

pub use mzi::{run_mzi, Blocker, MZIConfig, OutcomeDistribution, PhotonOutcome};
pub use spin::{agreement_probability, spin_measure, SpinSetting, SpinSign, SpinState};
pub use symmetry::{beam_splitter, IrrepElement, SymmetryKind};
pub use trials::{
    hv_bound_bruteforce, qle_analytics, qle_phase_report, run_ifm, run_qle,
    run_unprepared_trials, PairTally, PhaseReport, QleAnalytics, QleSummary, SettingPolicy,
    TrialRecord,
};

#[derive(Debug, Error)]
pub enum InterferometerError {
    #[error("state is not normalized: |amplitudes|^2 sums to {norm_sqr}")]
    NotNormalized { norm_sqr: f64 },
    #[error("inconsistent trial record {trial}: {reason}")]
    InconsistentRecords { trial: u64, reason: String },
    #[error("invalid state: {0}")]
    InvalidState(String),
}
