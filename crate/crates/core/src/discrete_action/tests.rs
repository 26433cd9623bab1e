use super::*;
use approx::assert_abs_diff_eq;
use num_complex::Complex64;
use std::f64::consts::PI;

fn params() -> OscillatorParams {
    OscillatorParams::new(1.0, 2.0, 0.5).unwrap()
}

// --- action assembly -----------------------------------------------------

#[test]
fn decoupled_action_is_block_diagonal() {
    let p = OscillatorParams::new(1.0, 2.0, 0.0).unwrap();
    let action = build_oscillator_action(&p, 0.1, 6).unwrap();
    let a = action.matrix();
    for i in 0..6 {
        for j in 6..12 {
            assert_eq!(a.get(i, j), Complex64::ZERO);
            assert_eq!(a.get(j, i), Complex64::ZERO);
        }
    }
}

#[test]
fn stencil_structure() {
    let p = params();
    let dt = 0.1;
    let n = 8;
    let action = build_oscillator_action(&p, dt, n).unwrap();
    let a = action.matrix();
    assert!(a.real_symmetry_deviation() <= 1e-14 * a.max_norm());
    for i in 0..2 * n {
        for j in 0..2 * n {
            let v = a.get(i, j).re;
            let same_block = (i < n) == (j < n);
            let offset = i.abs_diff(j);
            if same_block {
                // Temporal stencil never reaches past two slices.
                if offset > 2 {
                    assert_eq!(v, 0.0, "unexpected entry at ({i}, {j})");
                }
                if offset == 0 {
                    assert_abs_diff_eq!(v, p.m / dt + p.kappa * dt, epsilon = 1e-12);
                }
            } else {
                // Interaction only at matching time indices.
                if offset == n {
                    assert_abs_diff_eq!(v, p.k12 * dt, epsilon = 1e-12);
                } else {
                    assert_eq!(v, 0.0, "unexpected interaction at ({i}, {j})");
                }
            }
        }
    }
}

/// Continuum limit of the quadratic form. For trajectories sampled over
/// full periods, `-0.5 Q.A.Q` tends to the continuum action
/// `integral (m/2 qdot^2 - kappa/2 q^2 - k12 q1 q2) dt`; the raw error
/// carries a boundary term linear in dt, and one Richardson step exposes
/// the quadratic remainder.
#[test]
fn quadratic_form_converges_to_continuum_action() {
    let p = params();
    let period = 2.0 * PI;
    // q1 = sin t, q2 = sin 2t over one period:
    // integral qdot1^2 = pi, q1^2 = pi, qdot2^2 = 4 pi, q2^2 = pi, q1 q2 = 0.
    let target = 0.5 * p.m * PI - 0.5 * p.kappa * PI + 0.5 * p.m * 4.0 * PI
        - 0.5 * p.kappa * PI
        - 0.0;

    let error_at = |n: usize| -> f64 {
        let dt = period / n as f64;
        let action = build_oscillator_action(&p, dt, n).unwrap();
        let mut q = Vec::with_capacity(2 * n);
        for i in 0..n {
            q.push((i as f64 * dt).sin());
        }
        for i in 0..n {
            q.push((2.0 * i as f64 * dt).sin());
        }
        -action.quadratic_form(&q).unwrap() - target
    };

    let e1 = error_at(256);
    let e2 = error_at(512);
    let e3 = error_at(1024);
    let r1 = 2.0 * e2 - e1;
    let r2 = 2.0 * e3 - e2;
    // Richardson-extrapolated error is O(dt^2): consecutive values shrink
    // by ~4 and the finer one is small against the target.
    let order = (r1 / r2).abs();
    assert!(
        (3.0..=5.0).contains(&order),
        "extrapolated convergence order ratio {order} (r1 = {r1:.3e}, r2 = {r2:.3e})"
    );
    assert!(
        r2.abs() <= 1e-3 * target.abs(),
        "extrapolated error {r2:.3e} too large"
    );
}

// --- gaussian amplitude ---------------------------------------------------

fn point_action(a: f64, j: f64) -> DiscreteAction {
    // Degenerate one-entry action; dt/n_time are bookkeeping only.
    DiscreteAction::new(
        ComplexMatrix::from_real(1, 1, &[a]).unwrap(),
        vec![j],
        1.0,
        1,
        1,
        1.0,
    )
    .unwrap()
}

#[test]
fn single_fresnel_integral() {
    // A = [2], J = 0: Z -> sqrt(pi i) = sqrt(pi) e^{i pi/4}.
    let action = point_action(2.0, 0.0);
    let z = gaussian_amplitude(&action, 1e-10).unwrap();
    let expected = Complex64::from_polar(PI.sqrt(), PI / 4.0);
    assert!((z - expected).norm() <= 1e-9);
}

#[test]
fn shifted_fresnel_integral() {
    // A = [2], J = 1: the source shifts the phase by exp(-i/4).
    let action = point_action(2.0, 1.0);
    let z = gaussian_amplitude(&action, 1e-10).unwrap();
    let expected = Complex64::from_polar(PI.sqrt(), PI / 4.0 - 0.25);
    assert!((z - expected).norm() <= 1e-9);
}

#[test]
fn one_dim_matches_quadrature() {
    let (a, j) = reference_system(1).unwrap();
    let action = DiscreteAction::new(a.clone(), j.clone(), 1.0, 1, 1, 1.0).unwrap();
    let eps = 0.05;
    let z = gaussian_amplitude(&action, eps).unwrap();
    let oracle = quadrature_amplitude(&a, &j, eps, &reference_quadrature_spec(1, eps)).unwrap();
    let rel = (z - oracle).norm() / oracle.norm();
    assert!(rel <= 1e-6, "relative deviation {rel:.3e}");
}

#[test]
fn two_dim_matches_quadrature() {
    let (a, j) = reference_system(2).unwrap();
    let action = DiscreteAction::new(a.clone(), j.clone(), 1.0, 2, 1, 1.0).unwrap();
    let eps = 0.05;
    let z = gaussian_amplitude(&action, eps).unwrap();
    let oracle = quadrature_amplitude(&a, &j, eps, &reference_quadrature_spec(2, eps)).unwrap();
    let rel = (z - oracle).norm() / oracle.norm();
    assert!(rel <= 1e-4, "relative deviation {rel:.3e}");
}

#[test]
fn three_dim_matches_quadrature() {
    let (a, j) = reference_system(3).unwrap();
    let action = DiscreteAction::new(a.clone(), j.clone(), 1.0, 3, 1, 1.0).unwrap();
    let eps = 0.05;
    let z = gaussian_amplitude(&action, eps).unwrap();
    let oracle = quadrature_amplitude(&a, &j, eps, &reference_quadrature_spec(3, eps)).unwrap();
    let rel = (z - oracle).norm() / oracle.norm();
    assert!(rel <= 1e-4, "relative deviation {rel:.3e}");
}

#[test]
fn epsilon_convergence_is_geometric() {
    // Geometric decay of |Z(eps) - Z(eps/2)| sets in once eps drops below
    // the smallest action eigenvalue (~1.2e-2 for this configuration).
    let action = build_oscillator_action(&params(), 0.5, 8).unwrap();
    let mut eps = 2e-3;
    let mut last_gap = f64::INFINITY;
    for _ in 0..6 {
        let z1 = gaussian_amplitude(&action, eps).unwrap();
        let z2 = gaussian_amplitude(&action, eps / 2.0).unwrap();
        let gap = (z1 - z2).norm();
        assert!(
            gap <= 0.75 * last_gap,
            "gap {gap:.3e} after {last_gap:.3e} at eps = {eps:.3e}"
        );
        last_gap = gap;
        eps /= 2.0;
    }
}

#[test]
fn fresnel_phase_counts_signature() {
    // J = 0: arg Z = (pi/4)(n+ - n-).
    let action = DiscreteAction::new(
        ComplexMatrix::from_real(3, 3, &[2.0, 0.0, 0.0, 0.0, -3.0, 0.0, 0.0, 0.0, 5.0]).unwrap(),
        vec![0.0; 3],
        1.0,
        3,
        1,
        1.0,
    )
    .unwrap();
    let z = gaussian_amplitude(&action, 1e-9).unwrap();
    assert_abs_diff_eq!(z.arg(), PI / 4.0, epsilon = 1e-8);
}

// --- frequency propagator -------------------------------------------------

#[test]
fn decoupled_kernel() {
    let p = OscillatorParams::new(1.0, 2.0, 0.0).unwrap();
    let omega = 3.0;
    let block = frequency_propagator(&p, omega).unwrap();
    assert_eq!(block.bw, 0.0);
    let u = omega * omega * p.m - p.kappa;
    assert_abs_diff_eq!(block.aw, -1.0 / u, epsilon = 1e-15);
}

#[test]
fn resonance_detected() {
    let p = params();
    // omega^2 m - kappa = k12 puts the kernel on its pole.
    let omega = ((p.kappa + p.k12) / p.m).sqrt();
    assert!(matches!(
        frequency_propagator(&p, omega),
        Err(ActionError::Resonance { .. })
    ));
}

#[test]
fn propagator_matches_lu_inversion() {
    // Independent route: invert the 2x2 frequency-domain symbol
    // [[u, -k12], [-k12, u]] by row-pivoted elimination and compare with
    // the closed-form kernels (the inverse is -[[A, B], [B, A]]).
    let p = params();
    for omega in [0.3, 0.9, 1.7, 2.4, 5.0] {
        let u = omega * omega * p.m - p.kappa;
        let symbol =
            ComplexMatrix::from_real(2, 2, &[u, -p.k12, -p.k12, u]).unwrap();
        let inv = solve_linear(&symbol, &ComplexMatrix::identity(2)).unwrap();
        let block = frequency_propagator(&p, omega).unwrap();
        assert_abs_diff_eq!(inv.get(0, 0).re, -block.aw, epsilon = 1e-12);
        assert_abs_diff_eq!(inv.get(0, 1).re, -block.bw, epsilon = 1e-12);
        assert_abs_diff_eq!(inv.get(1, 0).re, -block.bw, epsilon = 1e-12);
    }
}

/// Time-domain check: inverse-transform the kernels on a periodic grid
/// (evaluated at the symbol of the discrete second difference, which is
/// what a time grid can represent), apply the coupled stencil, and
/// recover the discrete delta in row 1 and zero in row 2.
#[test]
fn propagator_delta_recovery() {
    let p = params();
    let n = 2048usize;
    let dt = 0.05;

    let mut d11 = vec![Complex64::ZERO; n];
    let mut d12 = vec![Complex64::ZERO; n];
    let mut min_denom = f64::INFINITY;
    for f in 0..n {
        let f_signed = if f <= n / 2 {
            f as f64
        } else {
            f as f64 - n as f64
        };
        let omega_dt = 2.0 * PI * f_signed / n as f64;
        let s = (2.0 - 2.0 * omega_dt.cos()) / (dt * dt);
        let u = p.m * s - p.kappa;
        let denom = p.k12 * p.k12 - u * u;
        min_denom = min_denom.min(denom.abs());
        let af = u / denom;
        let bf = p.k12 / denom;
        let scale = 1.0 / (n as f64 * dt);
        for (j, (a_acc, b_acc)) in d11.iter_mut().zip(d12.iter_mut()).enumerate() {
            let phase = omega_dt * j as f64;
            let mode = Complex64::from_polar(scale, phase);
            *a_acc -= af * mode;
            *b_acc -= bf * mode;
        }
    }
    assert!(
        min_denom > 1e-6,
        "grid frequency fell onto a kernel pole ({min_denom:.3e})"
    );

    let wrap = |idx: i64| -> usize { idx.rem_euclid(n as i64) as usize };
    let mut l1 = 0.0;
    for j in 0..n as i64 {
        let sd = |d: &[Complex64]| {
            (d[wrap(j + 1)] - 2.0 * d[wrap(j)] + d[wrap(j - 1)]) / (dt * dt)
        };
        let row1 = -p.m * sd(&d11) - p.kappa * d11[wrap(j)] - p.k12 * d12[wrap(j)];
        let row2 = -p.m * sd(&d12) - p.kappa * d12[wrap(j)] - p.k12 * d11[wrap(j)];
        let delta = if j == 0 { 1.0 / dt } else { 0.0 };
        l1 += (row1 - Complex64::new(delta, 0.0)).norm() * dt;
        l1 += row2.norm() * dt;
    }
    assert!(l1 <= 1e-3, "L1 deviation from the delta column: {l1:.3e}");
}

// --- pair and twin-slit amplitudes -----------------------------------------

#[test]
fn zero_impulse_gives_unit_amplitude() {
    let src = SourceSpec::new(1.3, 1.1, 0.0).unwrap();
    let tgt = SourceSpec::new(0.7, 1.1, 0.0).unwrap();
    let amp = pair_amplitude(&src, &tgt, &params(), 1.0).unwrap();
    assert!((amp - Complex64::ONE).norm() <= 1e-15);
}

#[test]
fn pair_amplitude_is_pure_phase() {
    let p = params();
    for j in [-2.0, 0.5, 3.7] {
        let src = SourceSpec::new(1.3, 1.1, 0.0).unwrap();
        let tgt = SourceSpec::new(0.7, 1.1, j).unwrap();
        let amp = pair_amplitude(&src, &tgt, &p, 1.0).unwrap();
        assert_abs_diff_eq!(amp.norm(), 1.0, epsilon = 1e-14);
    }
}

#[test]
fn phase_doubles_with_gamma() {
    let p = params();
    for gamma in [0.4, 1.0, 2.5] {
        let tgt = SourceSpec::new(0.7, 1.1, 0.3).unwrap();
        let single = pair_amplitude(&SourceSpec::new(gamma, 1.1, 0.0).unwrap(), &tgt, &p, 1.0)
            .unwrap();
        let double =
            pair_amplitude(&SourceSpec::new(2.0 * gamma, 1.1, 0.0).unwrap(), &tgt, &p, 1.0)
                .unwrap();
        assert!((single * single - double).norm() <= 1e-12);
    }
}

fn symmetric_layout() -> TwinSlitLayout {
    TwinSlitLayout::new(
        (1.0, 1.0),
        (0.5, 0.5),
        0.8,
        (3.0, 3.0, 3.0, 3.0),
        (1.0, 1.0, 1.0, 1.0),
    )
    .unwrap()
}

fn emitter() -> SourceSpec {
    // omega0^2 m - kappa = 1 keeps all kernels comfortably off resonance.
    SourceSpec::new(1.0, (3.0f64).sqrt(), 0.0).unwrap()
}

#[test]
fn symmetric_layout_central_maximum() {
    let psi = twin_slit_amplitude(&symmetric_layout(), &emitter(), &params(), 1.0).unwrap();
    assert_abs_diff_eq!(psi.norm_sqr(), 4.0, epsilon = 1e-12);
}

#[test]
fn pi_phase_difference_darkens() {
    // Different detector-leg couplings; solve for the impulse that puts
    // the two chains exactly pi apart.
    let p = params();
    let src = emitter();
    let mut layout = symmetric_layout();
    layout.k43 = 4.0;
    let d23 = pair_kernel(layout.k23, src.omega0, &p).unwrap();
    let d43 = pair_kernel(layout.k43, src.omega0, &p).unwrap();
    let gap = (layout.slit_gamma.0 * d23 - layout.slit_gamma.1 * d43) / (2.0 * PI);
    layout.detector_impulse = PI / gap;
    let psi = twin_slit_amplitude(&layout, &src, &p, 1.0).unwrap();
    assert_abs_diff_eq!(psi.norm_sqr(), 0.0, epsilon = 1e-12);
}

#[test]
fn two_phasor_intensity_law() {
    let p = params();
    let src = emitter();
    let mut layout = symmetric_layout();
    layout.k43 = 4.0;
    let d23 = pair_kernel(layout.k23, src.omega0, &p).unwrap();
    let d43 = pair_kernel(layout.k43, src.omega0, &p).unwrap();
    let gap = (layout.slit_gamma.0 * d23 - layout.slit_gamma.1 * d43) / (2.0 * PI);
    for step in 0..100 {
        let dphi = -2.0 * PI + 4.0 * PI * step as f64 / 99.0;
        layout.detector_impulse = dphi / gap;
        let psi = twin_slit_amplitude(&layout, &src, &p, 1.0).unwrap();
        let expected = 2.0 + 2.0 * dphi.cos();
        assert_abs_diff_eq!(psi.norm_sqr(), expected, epsilon = 1e-12);
    }
}

// --- wave-mechanics comparison ---------------------------------------------

#[test]
fn equal_paths_constructive() {
    let layout = TwinSlitLayout::new(
        (1.0, 1.0),
        (0.5, 0.5),
        0.8,
        (3.0, 3.0, 3.0, 3.0),
        (40.0, 40.0, 55.0, 55.0),
    )
    .unwrap();
    let out = schrodinger_twin_slit(&layout, 2.0, 1.0, 1.0, 5.0).unwrap();
    assert_abs_diff_eq!(out.psi.norm_sqr(), 4.0, epsilon = 1e-12);
    assert!(!out.regime_violation);
}

#[test]
fn first_dark_fringe() {
    // p (x23 - x43) / 2 hbar = pi.
    let p = 2.0;
    let x43 = 50.0;
    let x23 = x43 + 2.0 * PI / p;
    let layout = TwinSlitLayout::new(
        (1.0, 1.0),
        (0.5, 0.5),
        0.8,
        (3.0, 3.0, 3.0, 3.0),
        (40.0, 40.0, x23, x43),
    )
    .unwrap();
    let out = schrodinger_twin_slit(&layout, p, 1.0, 1.0, 5.0).unwrap();
    assert_abs_diff_eq!(out.psi.norm_sqr(), 0.0, epsilon = 1e-12);
}

#[test]
fn fringe_spacing_is_4_pi_hbar_over_p() {
    let p = 2.0;
    let hbar = 1.0;
    let x43 = 50.0;
    let spacing = 4.0 * PI * hbar / p;
    for k in 0..5 {
        let x23 = x43 + k as f64 * spacing;
        let layout = TwinSlitLayout::new(
            (1.0, 1.0),
            (0.5, 0.5),
            0.8,
            (3.0, 3.0, 3.0, 3.0),
            (40.0, 40.0, x23, x43),
        )
        .unwrap();
        let out = schrodinger_twin_slit(&layout, p, 1.0, hbar, 5.0).unwrap();
        assert_abs_diff_eq!(out.psi.norm_sqr(), 4.0, epsilon = 1e-10);
    }
}

#[test]
fn short_paths_flag_the_regime() {
    let layout = TwinSlitLayout::new(
        (1.0, 1.0),
        (0.5, 0.5),
        0.8,
        (3.0, 3.0, 3.0, 3.0),
        (1.0, 1.0, 2.0, 2.0),
    )
    .unwrap();
    let out = schrodinger_twin_slit(&layout, 2.0, 1.0, 1.0, 5.0).unwrap();
    assert!(out.regime_violation);
}

// --- relational metric ------------------------------------------------------

#[test]
fn zero_coupling_has_no_distance() {
    assert!(matches!(
        relational_distance(1.0, 0.0, &params(), 1.3),
        Err(ActionError::NoInteraction)
    ));
}

#[test]
fn metric_diverges_at_resonance() {
    let p = params();
    // coupling equal to omega0^2 m - kappa hits the pole.
    let omega0 = 2.0f64;
    let coupling = omega0 * omega0 * p.m - p.kappa;
    assert!(matches!(
        relational_distance(1.0, coupling, &p, omega0),
        Err(ActionError::Resonance { .. })
    ));
}

#[test]
fn distance_is_linear_in_gamma() {
    let p = params();
    for gamma in [0.25, 1.0, 4.4] {
        let single = relational_distance(gamma, 3.0, &p, 1.3).unwrap();
        let double = relational_distance(2.0 * gamma, 3.0, &p, 1.3).unwrap();
        assert_abs_diff_eq!(double.x_im, 2.0 * single.x_im, epsilon = 1e-12);
    }
}

