//! Trial-level simulation: interaction-free measurement, the two-atom
//! liar arrangement with post-selection on D2, instruction-set bounds and
//! the three-phase consistency report.
//!
//! Atom 1 sits in the lower arm when its Z box holds it; atom 2 blocks
//! the upper arm in its Z- branch. The preparation phases are
//! `(|Z1+> + |Z1->) / sqrt 2` and `(|Z2+> - |Z2->) / sqrt 2`; with the
//! final-state amplitudes of the two single-blocker layouts this is the
//! choice that post-selects D2 clicks onto `(|++> + |-->)/sqrt 2` (up to
//! a global sign), keeping same-setting agreement at one.
//!
//! Every random draw comes from a counter-mode stream cipher keyed as
//! (seed, trial id), so trial streams are identical no matter how the
//! trials are scheduled across threads.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::mzi::{run_mzi, Blocker, MZIConfig, PhotonOutcome};
use super::spin::{agreement_probability, spin_measure, SpinSetting, SpinSign, SpinState};
use super::InterferometerError;

/// Independent per-trial random stream.
fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

fn sample_index(rng: &mut ChaCha8Rng, probs: &[f64]) -> usize {
    let draw: f64 = rng.random();
    let mut acc = 0.0;
    for (i, p) in probs.iter().enumerate() {
        acc += p;
        if draw < acc {
            return i;
        }
    }
    probs.len() - 1
}

/// One simulated trial. Spin outcomes exist exactly for D2 clicks of
/// prepared runs; box branches are recorded only where the trial's own
/// data determine them (the input branch for single-atom runs, measured
/// Z values for the pair).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrialRecord {
    pub trial: u64,
    pub boxes_prepared: bool,
    pub branch1: Option<SpinSign>,
    pub branch2: Option<SpinSign>,
    pub photon: PhotonOutcome,
    pub setting1: Option<SpinSetting>,
    pub setting2: Option<SpinSetting>,
    pub spin1: Option<SpinSign>,
    pub spin2: Option<SpinSign>,
}

impl TrialRecord {
    pub fn csv_header() -> &'static str {
        "trial,branch1,branch2,photon,setting1,setting2,spin1,spin2"
    }

    pub fn csv_row(&self) -> String {
        fn sign(v: &Option<SpinSign>) -> &'static str {
            v.map_or("", |s| s.label())
        }
        fn setting(v: &Option<SpinSetting>) -> &'static str {
            v.map_or("", |s| s.label())
        }
        format!(
            "{},{},{},{},{},{},{},{}",
            self.trial,
            sign(&self.branch1),
            sign(&self.branch2),
            self.photon.label(),
            setting(&self.setting1),
            setting(&self.setting2),
            sign(&self.spin1),
            sign(&self.spin2),
        )
    }

    /// Spin outcomes present iff the photon clicked D2 in a prepared run.
    pub fn validate(&self) -> Result<(), InterferometerError> {
        let has_spin = self.spin1.is_some() || self.spin2.is_some();
        let expects_spin = self.photon == PhotonOutcome::D2 && self.boxes_prepared;
        if has_spin != expects_spin {
            return Err(InterferometerError::InconsistentRecords {
                trial: self.trial,
                reason: "spin outcomes must exist exactly for D2 clicks of prepared runs"
                    .to_string(),
            });
        }
        let has_setting = self.setting1.is_some() || self.setting2.is_some();
        if has_setting && self.photon != PhotonOutcome::D2 {
            return Err(InterferometerError::InconsistentRecords {
                trial: self.trial,
                reason: "null results carry no spin settings".to_string(),
            });
        }
        if !self.boxes_prepared && (self.branch1.is_some() || self.branch2.is_some()) {
            return Err(InterferometerError::InconsistentRecords {
                trial: self.trial,
                reason: "unprepared runs have no box branches".to_string(),
            });
        }
        Ok(())
    }
}

/// Single-atom interaction-free trial.
///
/// The Z+ box blocks the lower arm; in the Z- branch the interferometer
/// is empty and every photon lands on D1. A D2 click pins the atom to
/// `|Z+>` and triggers the follow-up X measurement.
pub fn run_ifm(atom_branch: SpinSign, seed: u64, trial: u64) -> TrialRecord {
    let mut rng = trial_rng(seed, trial);
    let blocker = match atom_branch {
        SpinSign::Plus => Blocker::LowerArm,
        SpinSign::Minus => Blocker::None,
    };
    let dist = run_mzi(&MZIConfig::standard(blocker));
    let photon = match sample_index(&mut rng, &dist.probabilities()) {
        0 => PhotonOutcome::D1,
        1 => PhotonOutcome::D2,
        _ => PhotonOutcome::Absorbed,
    };
    let (setting1, spin1) = if photon == PhotonOutcome::D2 {
        let probs = spin_measure(&SpinState::single(SpinSign::Plus), &[SpinSetting::X])
            .expect("normalized post-measurement state");
        let outcome = if sample_index(&mut rng, &probs) == 0 {
            SpinSign::Plus
        } else {
            SpinSign::Minus
        };
        (Some(SpinSetting::X), Some(outcome))
    } else {
        (None, None)
    };
    TrialRecord {
        trial,
        boxes_prepared: true,
        branch1: Some(atom_branch),
        branch2: None,
        photon,
        setting1,
        setting2: None,
        spin1,
        spin2: None,
    }
}

/// How spin settings are picked per atom in phase 3.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SettingPolicy {
    /// Uniform over {Z, Gamma, Delta}, independently per atom.
    Random,
    /// Z on both atoms every trial.
    AllZ,
}

/// Closed-form amplitude bookkeeping of the two-atom arrangement.
#[derive(Debug, Clone)]
pub struct QleAnalytics {
    /// Click probabilities (D1, D2, absorbed).
    pub probabilities: [f64; 3],
    /// Two-atom state conditioned on a D2 click.
    pub post_selected: SpinState,
}

/// Branch amplitude table: preparation amplitude and blocker layout per
/// joint box branch, ordered `[++, +-, -+, --]`.
fn branch_table() -> [(f64, Blocker); 4] {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    [
        (h * h, Blocker::LowerArm),     // Z1+ blocks the lower arm
        (h * -h, Blocker::BothArms),    // Z1+ and Z2- both block
        (h * h, Blocker::None),         // neither box in a beam path
        (-h * h, Blocker::UpperArm),    // Z2- blocks the upper arm
    ]
}

/// Coherent sum over the four box branches.
pub fn qle_analytics() -> QleAnalytics {
    let mut probabilities = [0.0f64; 3];
    let mut d2_amps = [Complex64::ZERO; 4];
    for (idx, (weight, blocker)) in branch_table().into_iter().enumerate() {
        let dist = run_mzi(&MZIConfig::standard(blocker));
        let amps = dist.amplitudes();
        // Branches are orthogonal in the atom space, so click
        // probabilities add across branches.
        for ch in 0..3 {
            probabilities[ch] += (amps[ch] * weight).norm_sqr();
        }
        d2_amps[idx] = amps[1] * weight;
    }
    let p_d2: f64 = d2_amps.iter().map(|z| z.norm_sqr()).sum();
    let scale = Complex64::new(1.0 / p_d2.sqrt(), 0.0);
    let post_selected = SpinState::new(d2_amps.iter().map(|z| z * scale).collect())
        .expect("post-selected state is normalized by construction");
    QleAnalytics {
        probabilities,
        post_selected,
    }
}

impl QleAnalytics {
    pub fn p_d2(&self) -> f64 {
        self.probabilities[1]
    }

    /// Same-sign probability for a measurement-setting pair.
    pub fn agreement(&self, s1: SpinSetting, s2: SpinSetting) -> f64 {
        agreement_probability(&self.post_selected, s1, s2)
            .expect("post-selected state is normalized")
    }

    /// Mean agreement over uniformly random setting pairs.
    pub fn overall_agreement(&self) -> f64 {
        let mut acc = 0.0;
        for s1 in SpinSetting::POLICY_CHOICES {
            for s2 in SpinSetting::POLICY_CHOICES {
                acc += self.agreement(s1, s2);
            }
        }
        acc / 9.0
    }
}

/// Monte-Carlo tallies for one setting pair.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct PairTally {
    pub agree: u64,
    pub total: u64,
}

/// Aggregates of a batch of liar-experiment trials.
#[derive(Debug, Clone)]
pub struct QleSummary {
    pub n_trials: u64,
    pub counts: [u64; 3],
    pub p_d2_analytic: f64,
    /// Squared overlap of the post-selected state with the correlated pair.
    pub epr_fidelity: f64,
    /// Tallies indexed by (setting1, setting2) over {Z, Gamma, Delta}.
    pub agreement: [[PairTally; 3]; 3],
    pub analytic_agreement: [[f64; 3]; 3],
    pub overall_agreement_analytic: f64,
}

impl QleSummary {
    pub fn pooled(&self) -> PairTally {
        let mut pooled = PairTally::default();
        for row in &self.agreement {
            for t in row {
                pooled.agree += t.agree;
                pooled.total += t.total;
            }
        }
        pooled
    }
}

fn policy_index(s: SpinSetting) -> usize {
    match s {
        SpinSetting::Z => 0,
        SpinSetting::Gamma => 1,
        SpinSetting::Delta => 2,
        SpinSetting::X => unreachable!("X is not a policy setting"),
    }
}

fn simulate_qle_trial(
    analytics: &QleAnalytics,
    policy: SettingPolicy,
    seed: u64,
    trial: u64,
) -> TrialRecord {
    let mut rng = trial_rng(seed, trial);
    let photon = match sample_index(&mut rng, &analytics.probabilities) {
        0 => PhotonOutcome::D1,
        1 => PhotonOutcome::D2,
        _ => PhotonOutcome::Absorbed,
    };
    if photon != PhotonOutcome::D2 {
        return TrialRecord {
            trial,
            boxes_prepared: true,
            branch1: None,
            branch2: None,
            photon,
            setting1: None,
            setting2: None,
            spin1: None,
            spin2: None,
        };
    }
    let (s1, s2) = match policy {
        SettingPolicy::AllZ => (SpinSetting::Z, SpinSetting::Z),
        SettingPolicy::Random => {
            let pick = |rng: &mut ChaCha8Rng| {
                SpinSetting::POLICY_CHOICES[rng.random_range(0..3usize)]
            };
            (pick(&mut rng), pick(&mut rng))
        }
    };
    let probs = spin_measure(&analytics.post_selected, &[s1, s2])
        .expect("post-selected state is normalized");
    let joint = sample_index(&mut rng, &probs);
    let spin1 = if joint < 2 { SpinSign::Plus } else { SpinSign::Minus };
    let spin2 = if joint % 2 == 0 {
        SpinSign::Plus
    } else {
        SpinSign::Minus
    };
    // A Z measurement reveals which box held its atom; other settings
    // leave the branch without a fact of the matter.
    let branch1 = (s1 == SpinSetting::Z).then_some(spin1);
    let branch2 = (s2 == SpinSetting::Z).then_some(spin2);
    TrialRecord {
        trial,
        boxes_prepared: true,
        branch1,
        branch2,
        photon,
        setting1: Some(s1),
        setting2: Some(s2),
        spin1: Some(spin1),
        spin2: Some(spin2),
    }
}

/// Simulate `n_trials` liar-experiment trials.
///
/// Trials are independent streams of (seed, trial id), evaluated in
/// parallel and collected in trial order; reruns are byte-identical for
/// a fixed seed regardless of thread count.
pub fn run_qle(
    n_trials: u64,
    policy: SettingPolicy,
    seed: u64,
) -> (Vec<TrialRecord>, QleSummary) {
    let analytics = qle_analytics();
    let records: Vec<TrialRecord> = (0..n_trials)
        .into_par_iter()
        .map(|trial| simulate_qle_trial(&analytics, policy, seed, trial))
        .collect();

    let mut counts = [0u64; 3];
    let mut agreement = [[PairTally::default(); 3]; 3];
    for record in &records {
        match record.photon {
            PhotonOutcome::D1 => counts[0] += 1,
            PhotonOutcome::D2 => counts[1] += 1,
            PhotonOutcome::Absorbed => counts[2] += 1,
        }
        if let (Some(s1), Some(s2), Some(v1), Some(v2)) =
            (record.setting1, record.setting2, record.spin1, record.spin2)
        {
            let tally = &mut agreement[policy_index(s1)][policy_index(s2)];
            tally.total += 1;
            if v1 == v2 {
                tally.agree += 1;
            }
        }
    }
    let mut analytic_agreement = [[0.0; 3]; 3];
    for (i, s1) in SpinSetting::POLICY_CHOICES.into_iter().enumerate() {
        for (j, s2) in SpinSetting::POLICY_CHOICES.into_iter().enumerate() {
            analytic_agreement[i][j] = analytics.agreement(s1, s2);
        }
    }
    let summary = QleSummary {
        n_trials,
        counts,
        p_d2_analytic: analytics.p_d2(),
        epr_fidelity: analytics.post_selected.fidelity(&SpinState::epr_pair()),
        agreement,
        analytic_agreement,
        overall_agreement_analytic: analytics.overall_agreement(),
    };
    (records, summary)
}

/// Empty-interferometer control batch: no box preparation, every photon
/// on D1, no spin outcomes.
pub fn run_unprepared_trials(n_trials: u64, _seed: u64) -> Vec<TrialRecord> {
    (0..n_trials)
        .map(|trial| TrialRecord {
            trial,
            boxes_prepared: false,
            branch1: None,
            branch2: None,
            photon: PhotonOutcome::D1,
            setting1: None,
            setting2: None,
            spin1: None,
            spin2: None,
        })
        .collect()
}

/// Minimum overall agreement any deterministic instruction set reaches
/// under uniformly random settings, as an exact fraction.
///
/// Instruction sets assign one sign per setting, identical on both atoms
/// (forced by the same-setting agreement); eight exist and the flattest
/// split agrees on 5 of the 9 setting pairs.
pub fn hv_bound_bruteforce() -> (u32, u32) {
    let mut min_agree = u32::MAX;
    for mask in 0u32..8 {
        let sign = |setting: usize| (mask >> setting) & 1;
        let mut agree = 0u32;
        for s1 in 0..3 {
            for s2 in 0..3 {
                if sign(s1) == sign(s2) {
                    agree += 1;
                }
            }
        }
        min_agree = min_agree.min(agree);
    }
    (min_agree, 9)
}

/// Cross-tabulation of phase-2 clicks against phase-3 settings/outcomes.
#[derive(Debug, Clone)]
pub struct PhaseReport {
    pub prepared_trials: u64,
    pub d2_trials: u64,
    /// D2 trials with Z chosen on both atoms, and how many of those agreed.
    pub zz_trials: u64,
    pub zz_agreed: u64,
    /// Pooled same-sign tally over all spin-measured trials.
    pub pooled: PairTally,
    pub hv_bound: (u32, u32),
    pub unprepared_trials: u64,
    /// Unprepared records carried no spin outcomes and clicked D1 only.
    pub no_prep_no_outcomes: bool,
}

impl PhaseReport {
    pub fn pooled_agreement(&self) -> f64 {
        if self.pooled.total == 0 {
            f64::NAN
        } else {
            self.pooled.agree as f64 / self.pooled.total as f64
        }
    }

    /// Whether the pooled record sits below the instruction-set bound.
    /// Meaningful once the pooled tally is large.
    pub fn violates_bound(&self) -> bool {
        let (num, den) = self.hv_bound;
        self.pooled.total > 0 && self.pooled_agreement() < num as f64 / den as f64
    }

    /// Z values perfectly correlated wherever both were measured.
    pub fn z_consistent(&self) -> bool {
        self.zz_agreed == self.zz_trials
    }
}

/// Validate a record batch and cross-tabulate its three phases.
pub fn qle_phase_report(records: &[TrialRecord]) -> Result<PhaseReport, InterferometerError> {
    let mut report = PhaseReport {
        prepared_trials: 0,
        d2_trials: 0,
        zz_trials: 0,
        zz_agreed: 0,
        pooled: PairTally::default(),
        hv_bound: hv_bound_bruteforce(),
        unprepared_trials: 0,
        no_prep_no_outcomes: true,
    };
    for record in records {
        record.validate()?;
        if !record.boxes_prepared {
            report.unprepared_trials += 1;
            if record.spin1.is_some()
                || record.spin2.is_some()
                || record.photon != PhotonOutcome::D1
            {
                report.no_prep_no_outcomes = false;
            }
            continue;
        }
        report.prepared_trials += 1;
        if record.photon == PhotonOutcome::D2 {
            report.d2_trials += 1;
        }
        if let (Some(v1), Some(v2)) = (record.spin1, record.spin2) {
            report.pooled.total += 1;
            if v1 == v2 {
                report.pooled.agree += 1;
            }
            if record.setting1 == Some(SpinSetting::Z) && record.setting2 == Some(SpinSetting::Z)
            {
                report.zz_trials += 1;
                if v1 == v2 {
                    report.zz_agreed += 1;
                }
            }
        }
    }
    Ok(report)
}
