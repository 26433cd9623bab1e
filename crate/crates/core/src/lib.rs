//! Symmetry-first quantum toolkit.
//!
//! Four computational pillars, each in its own module:
//!
//! * [`contraction`] — how the canonical commutation relations and the
//!   boost-translation phase survive the large-`c` limit of the
//!   relativistic algebra, checked numerically on momentum-space grids.
//! * [`group_density`] — finite-group irreps, the orthogonality relations,
//!   and density-matrix reconstruction from irrep averages.
//! * [`discrete_action`] — Gaussian transition amplitudes of a discrete
//!   two-oscillator action, frequency-domain propagators, twin-slit
//!   amplitudes and the relational distance they induce.
//! * [`interferometer`] — Mach-Zehnder layouts described through 2D
//!   translation/reflection irreps, interaction-free measurement, the
//!   quantum liar arrangement and its Bell statistics.
//!
//! [`numerics`] supplies the dense complex linear algebra the rest of the
//! crate is built on.

pub mod contraction;
pub mod discrete_action;
pub mod group_density;
pub mod interferometer;
pub mod numerics;

pub use numerics::{ComplexMatrix, NumericsError, StateVector};
