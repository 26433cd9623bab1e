//! Experiment implementations: each validates nothing new (the config is
//! already schema-checked) and fills a `RunReport`.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use rbw_core::contraction::{ccr_residual, AxisKind, GridWavefunction, PoincareRepConfig};
use rbw_core::discrete_action::{
    gaussian_amplitude, pair_kernel, quadrature_amplitude, reference_quadrature_spec,
    reference_system, schrodinger_twin_slit, twin_slit_amplitude, DiscreteAction,
    OscillatorParams, SourceSpec, TwinSlitLayout,
};
use rbw_core::group_density::{
    averages_from_state, build_dihedral, check_orthogonality, density_from_averages,
    random_density, Irrep,
};
use rbw_core::interferometer::{
    qle_analytics, run_ifm, run_mzi, run_qle, spin_measure, Blocker, MZIConfig, PhotonOutcome,
    SettingPolicy, SpinSetting, SpinSign, SpinState, TrialRecord,
};

use crate::config::ExperimentConfig;
use crate::error::CliError;
use crate::report::{Cell, RunReport, Table};

pub fn run_experiment(config: &ExperimentConfig) -> Result<RunReport, CliError> {
    let start = std::time::Instant::now();
    let mut report = RunReport::new(config);
    match config.experiment.as_str() {
        "contraction" => contraction(config, &mut report)?,
        "density" => density(config, &mut report)?,
        "gaussian" => gaussian(config, &mut report)?,
        "twin-slit" => twin_slit(config, &mut report)?,
        "mzi" => mzi(config, &mut report)?,
        "ifm" => ifm(config, &mut report),
        "qle" => qle(config, &mut report),
        other => {
            return Err(CliError::Config(format!(
                "experiment: unknown experiment \"{other}\""
            )))
        }
    }
    report.duration = start.elapsed();
    Ok(report)
}

fn runtime(context: &str, err: impl std::fmt::Display) -> CliError {
    CliError::Runtime(format!("{context}: {err}"))
}

fn contraction(config: &ExperimentConfig, report: &mut RunReport) -> Result<(), CliError> {
    let grid_points = config.param_i64("grid_points").max(128) as usize;
    let psi = GridWavefunction::gaussian(
        AxisKind::Momentum,
        0.0,
        config.param_f64("packet_width"),
        config.param_f64("half_width"),
        grid_points,
    )
    .map_err(|e| runtime("contraction", e))?;
    let mut table = Table::new("residuals", &["c", "residual", "predicted_correction"]);
    for c in config.param_float_list("c_values") {
        let cfg = PoincareRepConfig::new(c, config.param_f64("mass"), config.param_f64("hbar"))
            .map_err(|e| runtime("contraction", e))?;
        let (residual, prediction) =
            ccr_residual(&cfg, &psi).map_err(|e| runtime("contraction", e))?;
        table.push(vec![
            Cell::Number(c),
            Cell::Number(residual),
            Cell::Number(prediction),
        ]);
    }
    report.tables.push(table);
    Ok(())
}

fn density(config: &ExperimentConfig, report: &mut RunReport) -> Result<(), CliError> {
    let n_min = config.param_i64("n_min").max(3) as usize;
    let n_max = config.param_i64("n_max").max(n_min as i64) as usize;
    let states = config.param_i64("states").max(1) as usize;
    let k_w = config.param_f64("k_w");
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut table = Table::new(
        "groups",
        &["N", "orthogonality_deviation", "reconstruction_error"],
    );
    for n in n_min..=n_max {
        let (group, irrep) = build_dihedral(n, k_w).map_err(|e| runtime("density", e))?;
        let trivial = Irrep::trivial(group);
        let self_dev = check_orthogonality(&irrep, &irrep).map_err(|e| runtime("density", e))?;
        let cross_dev =
            check_orthogonality(&irrep, &trivial).map_err(|e| runtime("density", e))?;
        let mut worst = 0.0f64;
        for _ in 0..states {
            let rho = random_density(2, &mut rng);
            let table_avg =
                averages_from_state(&irrep, &rho).map_err(|e| runtime("density", e))?;
            let rebuilt =
                density_from_averages(&irrep, &table_avg).map_err(|e| runtime("density", e))?;
            let dev = rebuilt
                .matrix()
                .sub(rho.matrix())
                .map_err(|e| runtime("density", e))?
                .max_norm();
            worst = worst.max(dev);
        }
        table.push(vec![
            Cell::Int(n as i64),
            Cell::Number(self_dev.max(cross_dev)),
            Cell::Number(worst),
        ]);
    }
    report.tables.push(table);
    Ok(())
}

fn gaussian(config: &ExperimentConfig, report: &mut RunReport) -> Result<(), CliError> {
    let eps = config.param_f64("eps");
    let mut table = Table::new(
        "amplitudes",
        &["N", "eps", "Z_real", "Z_imag", "oracle_real", "oracle_imag"],
    );
    for n in 1..=3usize {
        let (a, j) = reference_system(n).expect("reference systems cover 1..=3");
        let action = DiscreteAction::new(a.clone(), j.clone(), 1.0, n, 1, 1.0)
            .map_err(|e| runtime("gaussian", e))?;
        let z = gaussian_amplitude(&action, eps).map_err(|e| runtime("gaussian", e))?;
        let oracle = quadrature_amplitude(&a, &j, eps, &reference_quadrature_spec(n, eps))
            .map_err(|e| runtime("gaussian", e))?;
        table.push(vec![
            Cell::Int(n as i64),
            Cell::Number(eps),
            Cell::Number(z.re),
            Cell::Number(z.im),
            Cell::Number(oracle.re),
            Cell::Number(oracle.im),
        ]);
    }
    report.tables.push(table);
    Ok(())
}

fn twin_slit(config: &ExperimentConfig, report: &mut RunReport) -> Result<(), CliError> {
    let points = config.param_i64("points").max(2) as usize;
    let hbar = config.param_f64("hbar");
    let momentum = config.param_f64("momentum");
    let params = OscillatorParams::new(config.param_f64("mass"), config.param_f64("kappa"), 0.5)
        .map_err(|e| runtime("twin-slit", e))?;
    let src = SourceSpec::new(1.0, config.param_f64("omega0"), 0.0)
        .map_err(|e| runtime("twin-slit", e))?;
    let mut layout = TwinSlitLayout::new(
        (1.0, 1.0),
        (0.5, 0.5),
        0.8,
        (3.0, config.param_f64("k23"), 3.0, config.param_f64("k43")),
        (40.0, 40.0, 1.0, 1.0),
    )
    .map_err(|e| runtime("twin-slit", e))?;
    let d23 = pair_kernel(layout.k23, src.omega0, &params).map_err(|e| runtime("twin-slit", e))?;
    let d43 = pair_kernel(layout.k43, src.omega0, &params).map_err(|e| runtime("twin-slit", e))?;
    let gap = (layout.slit_gamma.0 * d23 - layout.slit_gamma.1 * d43) / (2.0 * PI * hbar);
    if gap.abs() < 1e-9 {
        return Err(CliError::Runtime(
            "twin-slit: detector couplings produce no phase contrast".to_string(),
        ));
    }
    let offset = 32.0 * PI;
    let mut table = Table::new(
        "fringes",
        &["phase_difference", "intensity_discrete", "intensity_schrodinger"],
    );
    for step in 0..points {
        let dphi = -2.0 * PI + 4.0 * PI * step as f64 / (points - 1) as f64;
        layout.detector_impulse = dphi / gap;
        let psi = twin_slit_amplitude(&layout, &src, &params, hbar)
            .map_err(|e| runtime("twin-slit", e))?;
        let phi23 = layout.slit_gamma.0 * d23 * layout.detector_impulse / (2.0 * PI * hbar);
        let phi43 = layout.slit_gamma.1 * d43 * layout.detector_impulse / (2.0 * PI * hbar);
        layout.x23 = 2.0 * hbar * (phi23 + offset) / momentum;
        layout.x43 = 2.0 * hbar * (phi43 + offset) / momentum;
        let wave = schrodinger_twin_slit(&layout, momentum, params.m, hbar, 5.0)
            .map_err(|e| runtime("twin-slit", e))?;
        table.push(vec![
            Cell::Number(dphi),
            Cell::Number(psi.norm_sqr()),
            Cell::Number(wave.psi.norm_sqr()),
        ]);
    }
    report.tables.push(table);
    Ok(())
}

fn mzi(config: &ExperimentConfig, report: &mut RunReport) -> Result<(), CliError> {
    let blocker = match config.param_str("blocker") {
        "lower" => Blocker::LowerArm,
        "upper" => Blocker::UpperArm,
        "both" => Blocker::BothArms,
        _ => Blocker::None,
    };
    let layout = MZIConfig::new(
        config.param_f64("k_w"),
        config.param_bool("bs1"),
        config.param_bool("bs2"),
        blocker,
    )
    .map_err(|e| runtime("mzi", e))?;
    let dist = run_mzi(&layout);
    let mut table = Table::new(
        "clicks",
        &["outcome", "amplitude_re", "amplitude_im", "probability"],
    );
    for outcome in [
        PhotonOutcome::D1,
        PhotonOutcome::D2,
        PhotonOutcome::Absorbed,
    ] {
        let amp = dist.amplitude(outcome);
        table.push(vec![
            Cell::text(outcome.label()),
            Cell::Number(amp.re),
            Cell::Number(amp.im),
            Cell::Number(dist.probability(outcome)),
        ]);
    }
    report.tables.push(table);
    Ok(())
}

fn ifm(config: &ExperimentConfig, report: &mut RunReport) {
    let policy = config.param_str("branch").to_string();
    // Branch draws come from a stream decorrelated from the trial
    // streams consumed inside the simulation.
    let mut branch_rng = ChaCha8Rng::seed_from_u64(config.seed ^ 0x9e37_79b9_7f4a_7c15);
    let mut records: Vec<TrialRecord> = Vec::with_capacity(config.trials as usize);
    for trial in 0..config.trials {
        let branch = match policy.as_str() {
            "plus" => SpinSign::Plus,
            "minus" => SpinSign::Minus,
            _ => {
                if branch_rng.random::<bool>() {
                    SpinSign::Plus
                } else {
                    SpinSign::Minus
                }
            }
        };
        records.push(run_ifm(branch, config.seed, trial));
    }

    let mut table = Table::new(
        "outcomes",
        &["branch", "outcome", "count", "frequency", "analytic_probability"],
    );
    for branch in [SpinSign::Plus, SpinSign::Minus] {
        let in_branch: Vec<&TrialRecord> = records
            .iter()
            .filter(|r| r.branch1 == Some(branch))
            .collect();
        let total = in_branch.len().max(1) as f64;
        for (outcome, analytic) in [
            (PhotonOutcome::D1, if branch == SpinSign::Plus { 0.25 } else { 1.0 }),
            (PhotonOutcome::D2, if branch == SpinSign::Plus { 0.25 } else { 0.0 }),
            (
                PhotonOutcome::Absorbed,
                if branch == SpinSign::Plus { 0.5 } else { 0.0 },
            ),
        ] {
            let count = in_branch.iter().filter(|r| r.photon == outcome).count();
            table.push(vec![
                Cell::text(branch.label()),
                Cell::text(outcome.label()),
                Cell::Int(count as i64),
                Cell::Number(count as f64 / total),
                Cell::Number(analytic),
            ]);
        }
    }
    report.tables.push(table);

    let conditioned: Vec<&TrialRecord> = records
        .iter()
        .filter(|r| r.photon == PhotonOutcome::D2)
        .collect();
    let x_plus = conditioned
        .iter()
        .filter(|r| r.spin1 == Some(SpinSign::Plus))
        .count();
    let analytic_x = spin_measure(&SpinState::single(SpinSign::Plus), &[SpinSetting::X])
        .expect("pinned state is normalized")[0];
    let mut followup = Table::new(
        "x_followup",
        &["conditioned_trials", "x_plus_count", "x_plus_frequency", "analytic_probability"],
    );
    followup.push(vec![
        Cell::Int(conditioned.len() as i64),
        Cell::Int(x_plus as i64),
        Cell::Number(x_plus as f64 / conditioned.len().max(1) as f64),
        Cell::Number(analytic_x),
    ]);
    report.tables.push(followup);

    let mut rows = vec![TrialRecord::csv_header().to_string()];
    rows.extend(records.iter().map(TrialRecord::csv_row));
    report.record_stream = Some(("ifm_records.csv".to_string(), rows));
}

fn qle(config: &ExperimentConfig, report: &mut RunReport) {
    let policy = match config.param_str("setting_policy") {
        "all-z" => SettingPolicy::AllZ,
        _ => SettingPolicy::Random,
    };
    let (records, summary) = run_qle(config.trials, policy, config.seed);
    let analytics = qle_analytics();

    let mut clicks = Table::new(
        "clicks",
        &["outcome", "count", "frequency", "analytic_probability"],
    );
    for (idx, outcome) in [
        PhotonOutcome::D1,
        PhotonOutcome::D2,
        PhotonOutcome::Absorbed,
    ]
    .iter()
    .enumerate()
    {
        clicks.push(vec![
            Cell::text(outcome.label()),
            Cell::Int(summary.counts[idx] as i64),
            Cell::Number(summary.counts[idx] as f64 / config.trials as f64),
            Cell::Number(analytics.probabilities[idx]),
        ]);
    }
    report.tables.push(clicks);

    let mut agreement = Table::new(
        "agreement",
        &["setting1", "setting2", "agree", "total", "frequency", "analytic"],
    );
    for (i, s1) in SpinSetting::POLICY_CHOICES.into_iter().enumerate() {
        for (j, s2) in SpinSetting::POLICY_CHOICES.into_iter().enumerate() {
            let tally = summary.agreement[i][j];
            let freq = if tally.total == 0 {
                f64::NAN
            } else {
                tally.agree as f64 / tally.total as f64
            };
            agreement.push(vec![
                Cell::text(s1.label()),
                Cell::text(s2.label()),
                Cell::Int(tally.agree as i64),
                Cell::Int(tally.total as i64),
                Cell::Number(freq),
                Cell::Number(summary.analytic_agreement[i][j]),
            ]);
        }
    }
    report.tables.push(agreement);

    let pooled = summary.pooled();
    let mut overview = Table::new("summary", &["quantity", "value"]);
    overview.push(vec![
        Cell::text("p_d2_analytic"),
        Cell::Number(summary.p_d2_analytic),
    ]);
    overview.push(vec![
        Cell::text("epr_fidelity"),
        Cell::Number(summary.epr_fidelity),
    ]);
    overview.push(vec![
        Cell::text("overall_agreement_analytic"),
        Cell::Number(summary.overall_agreement_analytic),
    ]);
    overview.push(vec![
        Cell::text("pooled_agreement"),
        Cell::Number(if pooled.total == 0 {
            f64::NAN
        } else {
            pooled.agree as f64 / pooled.total as f64
        }),
    ]);
    let (num, den) = rbw_core::interferometer::hv_bound_bruteforce();
    overview.push(vec![
        Cell::text("instruction_set_bound"),
        Cell::Number(num as f64 / den as f64),
    ]);
    report.tables.push(overview);

    let mut rows = vec![TrialRecord::csv_header().to_string()];
    rows.extend(records.iter().map(TrialRecord::csv_row));
    report.record_stream = Some(("qle_records.csv".to_string(), rows));
}
