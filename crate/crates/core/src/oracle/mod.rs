//! Numerical solvers of the exact single-excitation dynamics.
//!
//! Three independent routes to the same amplitudes, used to validate every
//! closed form in the crate:
//!
//! * [`solve_volterra`]: product integration of the coupled Volterra
//!   integro-differential equations with the exponential memory kernel.
//! * [`solve_dilated`]: the same kernel realised as one damped pseudomode,
//!   integrated as a local ODE.
//! * [`solve_discrete_modes`]: a truncated, discretised Lorentzian continuum
//!   integrated as a finite Schrödinger equation.
//!
//! All solvers return amplitudes in the interaction picture of the
//! integro-differential equations, multiplied by the Ising phase
//! `e^{2iJ tau}` when `J != 0`, so they are directly comparable with the
//! closed forms.

mod dilated;
mod kernel;
mod modes;
mod series;
mod volterra;

pub use dilated::solve_dilated;
pub use kernel::{KernelSpec, ModeGrid};
pub use modes::{run_discrete_modes, solve_discrete_modes, ModeRun, NORM_DRIFT_TOL};
pub use series::{max_stable_dt, Sample, TimeGrid, TimeSeries};
pub use volterra::{solve_volterra, solve_volterra_extrapolated, solve_volterra_with, HistorySum};

/// Relative excess of `|C1|^2 + |C2|^2` over 1 treated as under-resolution.
pub const RESOLUTION_TOL: f64 = 1e-3;
