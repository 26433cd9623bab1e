//! Property tests for the cross-cutting invariants: solver/determinant
//! identities, eigendecomposition bounds, transform algebra, phase
//! unitarity and distribution normalization.

use num_complex::Complex64;
use proptest::prelude::*;

use rbw_core::contraction::{
    apply_transform, boost_translation_phase, AxisKind, GridWavefunction, PoincareRepConfig,
    SpacetimeEvent, TransformKind, TransformParams,
};
use rbw_core::discrete_action::{pair_amplitude, relational_distance, OscillatorParams, SourceSpec};
use rbw_core::interferometer::{run_mzi, Blocker, MZIConfig};
use rbw_core::numerics::{det, solve_linear, sym_eigen, ComplexMatrix};

/// Diagonally dominant random complex matrix: always comfortably
/// invertible, so the solver identities hold at full precision.
fn well_conditioned(dim: usize) -> impl Strategy<Value = ComplexMatrix> {
    prop::collection::vec(
        (-1.0f64..1.0, -1.0f64..1.0).prop_map(|(re, im)| Complex64::new(re, im)),
        dim * dim,
    )
    .prop_map(move |mut data| {
        for i in 0..dim {
            let boost = Complex64::new(dim as f64 + 1.0, 0.0);
            data[i * dim + i] += boost;
        }
        ComplexMatrix::new(dim, dim, data).unwrap()
    })
}

fn real_symmetric(dim: usize) -> impl Strategy<Value = ComplexMatrix> {
    prop::collection::vec(-1.0f64..1.0, dim * dim).prop_map(move |data| {
        let mut m = ComplexMatrix::zeros(dim, dim);
        for i in 0..dim {
            for j in 0..dim {
                let v = 0.5 * (data[i * dim + j] + data[j * dim + i]);
                m.set(i, j, Complex64::new(v, 0.0));
            }
        }
        m
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn solver_inverts(a in (2usize..=8).prop_flat_map(well_conditioned)) {
        let n = a.rows();
        let x = solve_linear(&a, &ComplexMatrix::identity(n)).unwrap();
        let residual = a.mul(&x).unwrap()
            .sub(&ComplexMatrix::identity(n)).unwrap()
            .max_norm();
        prop_assert!(residual <= 1e-10, "residual {residual:.3e}");
    }

    #[test]
    fn determinant_is_multiplicative(
        a in (2usize..=6).prop_flat_map(well_conditioned),
        seed in any::<u64>(),
    ) {
        // Second factor from an independent draw of the same shape.
        let n = a.rows();
        let mut data = Vec::with_capacity(n * n);
        let mut state = seed | 1;
        for _ in 0..n * n {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let re = ((state >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0;
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let im = ((state >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0;
            data.push(Complex64::new(re, im));
        }
        for i in 0..n {
            data[i * n + i] += Complex64::new(n as f64 + 1.0, 0.0);
        }
        let b = ComplexMatrix::new(n, n, data).unwrap();
        let lhs = det(&a.mul(&b).unwrap()).unwrap();
        let rhs = det(&a).unwrap() * det(&b).unwrap();
        prop_assert!((lhs - rhs).norm() <= 1e-10 * rhs.norm().max(1.0));
    }

    #[test]
    fn eigendecomposition_reconstructs(a in (2usize..=32).prop_flat_map(real_symmetric)) {
        let n = a.rows();
        let (vals, v) = sym_eigen(&a).unwrap();
        // A = V diag V^T
        let mut lambda = ComplexMatrix::zeros(n, n);
        for (i, &x) in vals.iter().enumerate() {
            lambda.set(i, i, Complex64::new(x, 0.0));
        }
        let rebuilt = v.mul(&lambda).unwrap().mul(&v.transpose()).unwrap();
        let scale = a.max_norm().max(1e-3);
        prop_assert!(rebuilt.sub(&a).unwrap().max_norm() <= 1e-10 * scale);
        let vtv = v.transpose().mul(&v).unwrap();
        prop_assert!(vtv.sub(&ComplexMatrix::identity(n)).unwrap().max_norm() <= 1e-10);
        // Eigenvalues sorted ascending.
        prop_assert!(vals.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn galilean_time_is_absolute(
        x in -1e6f64..1e6, t in -1e6f64..1e6, v in -1e3f64..1e3,
    ) {
        let p = TransformParams::new(v, 42.0, TransformKind::Galilean).unwrap();
        let image = apply_transform(SpacetimeEvent { x, t }, p);
        prop_assert_eq!(image.t, t);
    }

    #[test]
    fn weak_relativistic_is_lorentz_without_gamma(
        x in -1e3f64..1e3, t in -1e3f64..1e3, v in -0.9f64..0.9,
    ) {
        let c = 1.0;
        let weak = apply_transform(
            SpacetimeEvent { x, t },
            TransformParams::new(v, c, TransformKind::WeakRelativistic).unwrap(),
        );
        let lorentz = apply_transform(
            SpacetimeEvent { x, t },
            TransformParams::new(v, c, TransformKind::Lorentz).unwrap(),
        );
        let gamma = 1.0 / (1.0 - v * v).sqrt();
        prop_assert!((weak.x - lorentz.x / gamma).abs() <= 1e-9 * x.abs().max(1.0));
        prop_assert!((weak.t - lorentz.t / gamma).abs() <= 1e-9 * t.abs().max(1.0));
    }

    #[test]
    fn ordering_phase_has_unit_modulus(
        steps in -128i64..128, v in -5.0f64..5.0, m in 0.1f64..4.0,
    ) {
        let psi = GridWavefunction::gaussian(AxisKind::Position, 0.0, 1.0, 16.0, 512).unwrap();
        let cfg = PoincareRepConfig::new(100.0, m, 1.0).unwrap();
        let a = steps as f64 * psi.spacing();
        let ratio = boost_translation_phase(&psi, a, v, &cfg).unwrap();
        prop_assert!((ratio.norm() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn pair_amplitude_phase_is_linear(
        gamma in 0.1f64..4.0, j in -3.0f64..3.0,
    ) {
        let params = OscillatorParams::new(1.0, 2.0, 0.5).unwrap();
        let tgt = SourceSpec::new(0.5, 1.1, j).unwrap();
        let one = pair_amplitude(&SourceSpec::new(gamma, 1.1, 0.0).unwrap(), &tgt, &params, 1.0).unwrap();
        let two = pair_amplitude(&SourceSpec::new(2.0 * gamma, 1.1, 0.0).unwrap(), &tgt, &params, 1.0).unwrap();
        prop_assert!((one.norm() - 1.0).abs() <= 1e-13);
        prop_assert!((one * one - two).norm() <= 1e-12);
    }

    #[test]
    fn click_distributions_normalize(
        bs1 in any::<bool>(), bs2 in any::<bool>(), which in 0u8..4, k_w in 0.1f64..5.0,
    ) {
        let blocker = match which {
            0 => Blocker::None,
            1 => Blocker::LowerArm,
            2 => Blocker::UpperArm,
            _ => Blocker::BothArms,
        };
        let config = MZIConfig::new(k_w, bs1, bs2, blocker).unwrap();
        let total: f64 = run_mzi(&config).probabilities().iter().sum();
        prop_assert!((total - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn relational_distance_scales_linearly(
        gamma in 0.01f64..10.0, k in 0.5f64..5.0, lambda in 0.1f64..10.0,
    ) {
        let params = OscillatorParams::new(1.0, 2.0, 0.5).unwrap();
        // Keep clear of the kernel pole at k = |omega0^2 m - kappa|.
        let omega0 = 10.0;
        let single = relational_distance(gamma, k, &params, omega0).unwrap();
        let scaled = relational_distance(lambda * gamma, k, &params, omega0).unwrap();
        let expected = lambda * single.x_im;
        prop_assert!((scaled.x_im - expected).abs() <= 1e-12 * expected.abs().max(1e-6));
    }
}
