#![allow(dead_code)]

use cavent_core::{AmplitudePair, InitialState, SystemParams, TimeSeries};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_init(rng: &mut ChaCha8Rng) -> InitialState {
    InitialState::new(rng.gen_range(0.0..=std::f64::consts::PI), rng.gen_range(0.0..std::f64::consts::TAU)).unwrap()
}

/// Identical detunings with `Omega, Delta, Delta_L` in `[0, 10]`.
pub fn random_similar(rng: &mut ChaCha8Rng, coupling: f64) -> SystemParams {
    let delta = rng.gen_range(0.0..10.0);
    SystemParams {
        coupling,
        omega: rng.gen_range(0.0..10.0),
        delta1: delta,
        delta2: delta,
        delta_l: rng.gen_range(0.0..10.0),
        j: 0.0,
        r1: rng.gen_range(0.1..0.9),
    }
}

/// Independent detunings in `[-10, 10]`, `Omega, Delta_L` in `[0, 10]`.
pub fn random_dissimilar(rng: &mut ChaCha8Rng, coupling: f64) -> SystemParams {
    SystemParams {
        coupling,
        omega: rng.gen_range(0.0..10.0),
        delta1: rng.gen_range(-10.0..10.0),
        delta2: rng.gen_range(-10.0..10.0),
        delta_l: rng.gen_range(0.0..10.0),
        j: 0.0,
        r1: rng.gen_range(0.1..0.9),
    }
}

/// Largest gap in `|C1|`, `|C2|` between a series and a closed form.
pub fn modulus_gap(series: &TimeSeries, exact: impl Fn(f64) -> AmplitudePair) -> f64 {
    series
        .iter()
        .map(|s| {
            let e = exact(s.tau);
            (s.amps.c1.norm() - e.c1.norm()).abs().max((s.amps.c2.norm() - e.c2.norm()).abs())
        })
        .fold(0.0, f64::max)
}

/// Largest complex difference between a series and a closed form.
pub fn complex_gap(series: &TimeSeries, exact: impl Fn(f64) -> AmplitudePair) -> f64 {
    series
        .iter()
        .map(|s| {
            let e = exact(s.tau);
            (s.amps.c1 - e.c1).norm().max((s.amps.c2 - e.c2).norm())
        })
        .fold(0.0, f64::max)
}
