use crate::entanglement::entanglement_dynamic;
use crate::error::{Error, Result};
use crate::model::{AmplitudePair, SystemParams};

/// Step-size bound that resolves every rate in the problem.
pub fn max_stable_dt(p: &SystemParams) -> f64 {
    let detune = 1.0 + p.delta1.abs().max(p.delta2.abs()) + p.delta_l.abs() + 4.0 * p.j.abs();
    0.01 * 1f64.min(1.0 / p.coupling).min(1.0 / (1.0 + p.omega)).min(1.0 / detune)
}

/// Uniform integration grid with a recording stride.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid {
    pub dt: f64,
    pub steps: usize,
    /// Record every `stride`-th step (the first and last are always aligned).
    pub stride: usize,
}

impl TimeGrid {
    /// Grid ending exactly at `tau_max` with step at most `dt`, recording
    /// every step.
    pub fn new(tau_max: f64, dt: f64) -> Result<Self> {
        check_positive(tau_max, dt)?;
        let steps = ((tau_max / dt) - 1e-9).ceil().max(1.0) as usize;
        Ok(TimeGrid { dt: tau_max / steps as f64, steps, stride: 1 })
    }

    /// Grid recording `intervals + 1` equally spaced samples on `[0, tau_max]`
    /// with integration step at most `max_dt`.
    pub fn sampled(tau_max: f64, intervals: usize, max_dt: f64) -> Result<Self> {
        check_positive(tau_max, max_dt)?;
        if intervals == 0 {
            return Err(Error::InvalidParams("need at least one output interval".into()));
        }
        let spacing = tau_max / intervals as f64;
        let stride = ((spacing / max_dt) - 1e-9).ceil().max(1.0) as usize;
        let steps = intervals * stride;
        Ok(TimeGrid { dt: tau_max / steps as f64, steps, stride })
    }

    /// Same recording points, half the step.
    pub fn refined(&self) -> Self {
        TimeGrid { dt: self.dt / 2.0, steps: self.steps * 2, stride: self.stride * 2 }
    }

    pub fn tau_max(&self) -> f64 {
        self.dt * self.steps as f64
    }

    pub fn records(&self, step: usize) -> bool {
        step % self.stride == 0
    }

    pub fn tau(&self, step: usize) -> f64 {
        step as f64 * self.dt
    }
}

fn check_positive(tau_max: f64, dt: f64) -> Result<()> {
    if !(tau_max > 0.0 && tau_max.is_finite()) {
        return Err(Error::InvalidParams(format!("tau_max must be positive, got {tau_max}")));
    }
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::InvalidParams(format!("dt must be positive, got {dt}")));
    }
    Ok(())
}

/// One recorded instant of a trajectory.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    pub tau: f64,
    pub amps: AmplitudePair,
    /// `E / M = 4 |C1|^2 |C2|^2`.
    pub entanglement: f64,
}

impl Sample {
    pub fn new(tau: f64, amps: AmplitudePair) -> Self {
        Sample { tau, amps, entanglement: entanglement_dynamic(&amps) }
    }
}

/// Ordered samples produced by any solver.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct TimeSeries {
    pub samples: Vec<Sample>,
}

impl TimeSeries {
    pub fn with_capacity(n: usize) -> Self {
        TimeSeries { samples: Vec::with_capacity(n) }
    }

    pub fn push(&mut self, tau: f64, amps: AmplitudePair) {
        self.samples.push(Sample::new(tau, amps));
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn last(&self) -> Option<&Sample> {
        self.samples.last()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Sample> {
        self.samples.iter()
    }

    /// Largest `| |C_j|_self - |C_j|_other |` over both qubits and all
    /// shared samples. Panics if the series are not on the same grid.
    pub fn max_modulus_gap(&self, other: &TimeSeries) -> f64 {
        assert_eq!(self.len(), other.len(), "series lengths differ");
        self.iter()
            .zip(other.iter())
            .map(|(a, b)| {
                assert!((a.tau - b.tau).abs() <= 1e-9 * a.tau.max(1.0), "grids differ");
                let d1 = (a.amps.c1.norm() - b.amps.c1.norm()).abs();
                let d2 = (a.amps.c2.norm() - b.amps.c2.norm()).abs();
                d1.max(d2)
            })
            .fold(0.0, f64::max)
    }
}

impl<'a> IntoIterator for &'a TimeSeries {
    type Item = &'a Sample;
    type IntoIter = std::slice::Iter<'a, Sample>;

    fn into_iter(self) -> Self::IntoIter {
        self.samples.iter()
    }
}
