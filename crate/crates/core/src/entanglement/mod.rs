//! Entanglement quantifiers for the two-qubit state and general pure qudits.

mod concurrence;
mod gellmann;
mod stationary;

pub use concurrence::{concurrence, concurrence_x_state};
pub use gellmann::{generators, measure, measure_pure, purity_measure, GeneratorSet};
pub use stationary::{entanglement_stationary, optimize_stationary, StationaryOptimum};

use crate::model::AmplitudePair;

/// `E / M = 4 |C1|^2 |C2|^2` for the state `C1|EG> + C2|GE> + C3|GG>`
/// with the environment traced out.
pub fn entanglement_dynamic(amp: &AmplitudePair) -> f64 {
    4.0 * amp.c1.norm_sqr() * amp.c2.norm_sqr()
}
