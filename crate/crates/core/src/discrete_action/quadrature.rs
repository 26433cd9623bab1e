//! Brute-force damped oscillatory quadrature over a truncated cube.
//!
//! Reference integrator for the closed-form Gaussian amplitude: evaluates
//! `integral exp(i/2 q.A.q + i J.q - eps/2 |q|^2) dq` directly with
//! composite Gauss-Legendre panels per axis, no factorization of A
//! anywhere. Dimensions 1 to 3 are supported; that is all the oracle is
//! for. Worker parallelism only splits the outermost axis and partial
//! sums are reduced in panel order, so results are bitwise independent of
//! the thread count.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::numerics::ComplexMatrix;

use super::ActionError;

/// Truncation and resolution of the oracle grid.
#[derive(Debug, Clone, Copy)]
pub struct QuadratureSpec {
    /// Cube half-width; the damped integrand must be negligible beyond it.
    pub half_width: f64,
    /// Composite panels per axis.
    pub panels: usize,
    /// Gauss-Legendre points per panel.
    pub points: usize,
}

impl QuadratureSpec {
    pub fn new(half_width: f64, panels: usize, points: usize) -> Self {
        Self {
            half_width,
            panels,
            points,
        }
    }
}

/// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration.
fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    if n == 1 {
        return (vec![0.0], vec![2.0]);
    }
    let legendre = |x: f64| -> (f64, f64) {
        let mut p0 = 1.0f64;
        let mut p1 = x;
        for k in 2..=n {
            let pk = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
            p0 = p1;
            p1 = pk;
        }
        let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
        (p1, dp)
    };
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..64 {
            let (p, dp) = legendre(x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let (_, dp) = legendre(x);
        nodes[i] = x;
        weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    (nodes, weights)
}

/// Full per-axis grid: all panel-mapped nodes with their weights.
fn axis_grid(spec: &QuadratureSpec) -> (Vec<f64>, Vec<f64>) {
    let (nodes, weights) = gauss_legendre(spec.points);
    let panel_width = 2.0 * spec.half_width / spec.panels as f64;
    let mut xs = Vec::with_capacity(spec.panels * spec.points);
    let mut ws = Vec::with_capacity(spec.panels * spec.points);
    for p in 0..spec.panels {
        let left = -spec.half_width + p as f64 * panel_width;
        let mid = left + 0.5 * panel_width;
        for (node, weight) in nodes.iter().zip(&weights) {
            xs.push(mid + 0.5 * panel_width * node);
            ws.push(0.5 * panel_width * weight);
        }
    }
    (xs, ws)
}

/// Damped transition-amplitude integral, dimensions 1 to 3.
pub fn quadrature_amplitude(
    a: &ComplexMatrix,
    j: &[f64],
    eps: f64,
    spec: &QuadratureSpec,
) -> Result<Complex64, ActionError> {
    let n = a.rows();
    if !a.is_square() || j.len() != n {
        return Err(ActionError::Dimension(format!(
            "{}x{} matrix with {} sources",
            a.rows(),
            a.cols(),
            j.len()
        )));
    }
    if !(eps > 0.0) {
        return Err(ActionError::InvalidParams(format!(
            "regulator must be positive, got {eps}"
        )));
    }
    if n == 0 || n > 3 {
        return Err(ActionError::Dimension(format!(
            "oracle supports dimensions 1..=3, got {n}"
        )));
    }
    let (xs, ws) = axis_grid(spec);
    let len = xs.len();
    // Per-axis diagonal phase 0.5 A_dd x^2 + J_d x, and damped weight.
    let phase_axis = |d: usize| -> Vec<f64> {
        xs.iter()
            .map(|&x| 0.5 * a.get(d, d).re * x * x + j[d] * x)
            .collect()
    };
    let damped_axis = |_d: usize| -> Vec<f64> {
        xs.iter()
            .zip(&ws)
            .map(|(&x, &w)| w * (-0.5 * eps * x * x).exp())
            .collect()
    };

    match n {
        1 => {
            let ph = phase_axis(0);
            let wd = damped_axis(0);
            let mut acc = Complex64::ZERO;
            for i in 0..len {
                acc += Complex64::from_polar(wd[i], ph[i]);
            }
            Ok(acc)
        }
        2 => {
            let ph0 = phase_axis(0);
            let ph1 = phase_axis(1);
            let wd0 = damped_axis(0);
            let wd1 = damped_axis(1);
            let a01 = a.get(0, 1).re + a.get(1, 0).re; // appears twice in q.A.q / 2
            let partials: Vec<Complex64> = (0..len)
                .into_par_iter()
                .map(|i| {
                    let xi = xs[i];
                    let mut acc = Complex64::ZERO;
                    for k in 0..len {
                        let phase = ph0[i] + ph1[k] + 0.5 * a01 * xi * xs[k];
                        acc += Complex64::from_polar(wd1[k], phase);
                    }
                    acc * wd0[i]
                })
                .collect();
            Ok(partials.iter().sum())
        }
        3 => {
            let ph0 = phase_axis(0);
            let ph1 = phase_axis(1);
            let ph2 = phase_axis(2);
            let wd0 = damped_axis(0);
            let wd1 = damped_axis(1);
            let wd2 = damped_axis(2);
            let a01 = 0.5 * (a.get(0, 1).re + a.get(1, 0).re);
            let a02 = 0.5 * (a.get(0, 2).re + a.get(2, 0).re);
            let a12 = 0.5 * (a.get(1, 2).re + a.get(2, 1).re);
            let partials: Vec<Complex64> = (0..len)
                .into_par_iter()
                .map(|i| {
                    let xi = xs[i];
                    let mut acc_i = Complex64::ZERO;
                    for k in 0..len {
                        let xk = xs[k];
                        let base = ph0[i] + ph1[k] + a01 * xi * xk;
                        let coup = a02 * xi + a12 * xk;
                        let mut acc_k = Complex64::ZERO;
                        for l in 0..len {
                            acc_k += Complex64::from_polar(wd2[l], base + ph2[l] + coup * xs[l]);
                        }
                        acc_i += acc_k * wd1[k];
                    }
                    acc_i * wd0[i]
                })
                .collect();
            Ok(partials.iter().sum())
        }
        _ => unreachable!(),
    }
}
