//! Fixed workloads shared by the criterion benches.

pub use cavent_core::{InitialState, SystemParams};

/// Strong-coupling, driven, dissimilar qubits.
pub fn strong_dissimilar() -> SystemParams {
    SystemParams { coupling: 10.0, omega: 2.0, delta1: 0.0, delta2: 3.0, delta_l: 0.5, ..Default::default() }
}

/// Strong-coupling identical qubits, the collapse-revival regime.
pub fn strong_similar() -> SystemParams {
    SystemParams { coupling: 10.0, omega: 1.0, ..Default::default() }
}

pub fn entangled() -> InitialState {
    InitialState { theta: std::f64::consts::FRAC_PI_2, phi: 0.0 }
}
