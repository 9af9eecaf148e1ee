//! Entanglement dynamics of two classically driven qubits in a common lossy
//! cavity.
//!
//! The single-excitation amplitudes `C1(tau)`, `C2(tau)` are available in
//! closed form ([`similar`], [`dissimilar`]) and from three independent
//! numerical solvers ([`oracle`]). [`entanglement`] turns amplitudes into
//! entanglement measures, and [`sweep`] drives parameter scans and the
//! figure presets used by the `sim` binary.

pub mod cubic;
pub mod dissimilar;
pub mod entanglement;
pub mod error;
pub mod model;
pub mod oracle;
pub mod similar;
pub mod sweep;

pub use dissimilar::{amplitudes_dissimilar, DissimilarPropagator};
pub use entanglement::{concurrence, entanglement_dynamic, entanglement_stationary, optimize_stationary};
pub use error::{Error, Result};
pub use model::{
    beta_coefficients, density_matrix, AmplitudePair, Betas, InitialState, SystemParams, TwoQubitDensity,
};
pub use oracle::{solve_dilated, solve_discrete_modes, solve_volterra, TimeGrid, TimeSeries};
pub use similar::{
    amplitudes_j, amplitudes_similar, settling_time, stationary_amplitudes, survival_amplitude, SimilarPropagator,
};
