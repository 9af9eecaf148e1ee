use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::model::{InitialState, SystemParams};

/// Which engine produces the amplitudes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Solver {
    #[default]
    Analytic,
    Volterra,
    Dilated,
    Modes,
}

/// Which closed form (or physical setting) a sweep targets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scenario {
    /// Identical detunings, no Ising coupling.
    Similar,
    /// Identical detunings with Ising coupling `J`.
    SimilarJ,
    /// Arbitrary detunings.
    Dissimilar,
    /// Long-time limit for identical detunings.
    Stationary,
}

impl Scenario {
    /// The scenario whose closed form covers `p`.
    pub fn infer(p: &SystemParams) -> Self {
        match (p.is_similar(), p.j == 0.0) {
            (true, true) => Scenario::Similar,
            (true, false) => Scenario::SimilarJ,
            (false, _) => Scenario::Dissimilar,
        }
    }
}

/// A parameter that an axis can sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Param {
    Coupling,
    Omega,
    Delta1,
    Delta2,
    /// Both detunings at once.
    Delta,
    DeltaL,
    J,
    R1,
    Theta,
    Phi,
}

impl Param {
    pub const ALL: [Param; 10] = [
        Param::Coupling,
        Param::Omega,
        Param::Delta1,
        Param::Delta2,
        Param::Delta,
        Param::DeltaL,
        Param::J,
        Param::R1,
        Param::Theta,
        Param::Phi,
    ];

    /// Column and command-line name.
    pub fn name(self) -> &'static str {
        match self {
            Param::Coupling => "R",
            Param::Omega => "omega",
            Param::Delta1 => "delta1",
            Param::Delta2 => "delta2",
            Param::Delta => "delta",
            Param::DeltaL => "deltaL",
            Param::J => "J",
            Param::R1 => "r1",
            Param::Theta => "theta",
            Param::Phi => "phi",
        }
    }

    pub fn apply(self, value: f64, p: &mut SystemParams, init: &mut InitialState) {
        match self {
            Param::Coupling => p.coupling = value,
            Param::Omega => p.omega = value,
            Param::Delta1 => p.delta1 = value,
            Param::Delta2 => p.delta2 = value,
            Param::Delta => {
                p.delta1 = value;
                p.delta2 = value;
            }
            Param::DeltaL => p.delta_l = value,
            Param::J => p.j = value,
            Param::R1 => p.r1 = value,
            Param::Theta => init.theta = value,
            Param::Phi => init.phi = value,
        }
    }

    fn overlaps(self, other: Param) -> bool {
        use Param::*;
        self == other || matches!((self, other), (Delta, Delta1 | Delta2) | (Delta1 | Delta2, Delta))
    }
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Param {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Param::ALL
            .into_iter()
            .find(|p| p.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidSweep(format!("unknown sweep parameter `{s}`")))
    }
}

/// Values taken by one swept parameter.
#[derive(Debug, Clone, PartialEq)]
pub struct Axis {
    pub param: Param,
    pub values: Vec<f64>,
}

impl Axis {
    /// `count` evenly spaced values from `min` to `max` inclusive.
    pub fn range(param: Param, min: f64, max: f64, count: usize) -> Result<Self> {
        if count < 2 {
            return Err(Error::InvalidSweep(format!("axis {param} needs at least 2 points, got {count}")));
        }
        let step = (max - min) / (count - 1) as f64;
        let values = (0..count).map(|k| if k + 1 == count { max } else { min + k as f64 * step }).collect();
        Axis::list(param, values)
    }

    pub fn list(param: Param, values: Vec<f64>) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::InvalidSweep(format!("axis {param} needs at least 2 points")));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidSweep(format!("axis {param} has non-finite values")));
        }
        let mut sorted = values.clone();
        sorted.sort_by(f64::total_cmp);
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidSweep(format!("axis {param} repeats a value")));
        }
        Ok(Axis { param, values })
    }

    /// Parses `name=min:max:count` or `name=v1,v2,...`.
    pub fn parse(text: &str) -> Result<Self> {
        let (name, body) = text
            .split_once('=')
            .ok_or_else(|| Error::InvalidSweep(format!("axis `{text}` is not of the form name=min:max:count")))?;
        let param: Param = name.trim().parse()?;
        let num = |s: &str| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| Error::InvalidSweep(format!("bad number `{s}` in axis {param}")))
        };
        let parts: Vec<&str> = body.split(':').collect();
        match parts.as_slice() {
            [min, max, count] => {
                let count = count
                    .trim()
                    .parse()
                    .map_err(|_| Error::InvalidSweep(format!("bad count `{count}` in axis {param}")))?;
                Axis::range(param, num(min)?, num(max)?, count)
            }
            [list] => Axis::list(param, list.split(',').map(num).collect::<Result<_>>()?),
            _ => Err(Error::InvalidSweep(format!("axis `{text}` is not of the form name=min:max:count"))),
        }
    }
}

/// Where along the trajectory rows are emitted.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Times {
    /// `points` evenly spaced instants on `[0, tmax]`.
    Series { tmax: f64, points: usize },
    /// A single instant.
    At(f64),
    /// The long-time limit, written as `tau = inf`.
    Stationary,
}

impl Times {
    /// Figure horizons: `[0, 4]` with 801 points for `R >= 1`, otherwise
    /// `[0, 400]` with 2001 points.
    pub fn default_for(coupling: f64) -> Self {
        if coupling >= 1.0 {
            Times::Series { tmax: 4.0, points: 801 }
        } else {
            Times::Series { tmax: 400.0, points: 2001 }
        }
    }

    /// The emitted instants, or `None` for the stationary limit.
    pub fn instants(&self) -> Option<Vec<f64>> {
        match *self {
            Times::Series { tmax, points } => Some(
                (0..points)
                    .map(|k| if k + 1 == points { tmax } else { tmax * k as f64 / (points - 1) as f64 })
                    .collect(),
            ),
            Times::At(t) => Some(vec![t]),
            Times::Stationary => None,
        }
    }
}

/// Resolution of the discrete-mode solver.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeSettings {
    pub n_modes: usize,
    pub cutoff: f64,
}

impl Default for ModeSettings {
    fn default() -> Self {
        ModeSettings { n_modes: 2001, cutoff: 100.0 }
    }
}

/// A full parameter sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub solver: Solver,
    pub scenario: Scenario,
    pub params: SystemParams,
    pub init: InitialState,
    /// Zero, one or two axes; the first varies slowest in the output.
    pub axes: Vec<Axis>,
    pub times: Times,
    /// Integration step for numeric solvers; defaults to the stability bound.
    pub dt: Option<f64>,
    pub modes: ModeSettings,
    /// Re-run every 20th parameter point with the Volterra solver.
    pub verify: bool,
}

impl SweepSpec {
    pub fn new(scenario: Scenario, params: SystemParams, init: InitialState) -> Self {
        let times = match scenario {
            Scenario::Stationary => Times::Stationary,
            _ => Times::default_for(params.coupling),
        };
        SweepSpec {
            solver: Solver::Analytic,
            scenario,
            params,
            init,
            axes: Vec::new(),
            times,
            dt: None,
            modes: ModeSettings::default(),
            verify: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.axes.len() > 2 {
            return Err(Error::InvalidSweep(format!("at most 2 axes, got {}", self.axes.len())));
        }
        if let [a, b] = self.axes.as_slice() {
            if a.param.overlaps(b.param) {
                return Err(Error::InvalidSweep(format!("axes {} and {} set the same parameter", a.param, b.param)));
            }
        }
        match (self.scenario, self.times) {
            (Scenario::Stationary, Times::Stationary) => {}
            (Scenario::Stationary, _) => {
                return Err(Error::InvalidSweep("stationary scenario takes no time grid".into()))
            }
            (_, Times::Stationary) => {
                return Err(Error::InvalidSweep("only the stationary scenario has tau = inf".into()))
            }
            (_, Times::Series { tmax, points }) => {
                if !(tmax > 0.0 && tmax.is_finite()) || points < 2 {
                    return Err(Error::InvalidSweep(format!("bad time grid: tmax = {tmax}, points = {points}")));
                }
            }
            (_, Times::At(t)) => {
                if !(t > 0.0 && t.is_finite()) {
                    return Err(Error::InvalidSweep(format!("bad evaluation time {t}")));
                }
            }
        }
        if self.scenario == Scenario::Stationary && self.solver == Solver::Modes {
            return Err(Error::InvalidSweep("the discrete-mode solver has no stationary limit".into()));
        }
        if let Some(dt) = self.dt {
            if !(dt > 0.0 && dt.is_finite()) {
                return Err(Error::InvalidSweep(format!("dt must be positive, got {dt}")));
            }
        }
        // every grid point must be a valid parameter set for the scenario
        for (p, init) in self.points().map(|(_, p, i)| (p, i)) {
            p.validate()?;
            init.validate()?;
            match self.scenario {
                Scenario::Similar | Scenario::Stationary => {
                    p.require_similar()?;
                    if p.j != 0.0 {
                        return Err(Error::InvalidSweep(format!(
                            "J = {} needs the similar-J scenario",
                            p.j
                        )));
                    }
                }
                Scenario::SimilarJ => p.require_similar()?,
                Scenario::Dissimilar => {}
            }
        }
        Ok(())
    }

    /// Number of parameter points (product of axis lengths).
    pub fn point_count(&self) -> usize {
        self.axes.iter().map(|a| a.values.len()).product()
    }

    /// Parameter points in output order: axis values, parameters, initial state.
    pub fn points(&self) -> impl Iterator<Item = (Vec<f64>, SystemParams, InitialState)> + '_ {
        (0..self.point_count()).map(move |k| self.point(k))
    }

    pub fn point(&self, index: usize) -> (Vec<f64>, SystemParams, InitialState) {
        let mut p = self.params;
        let mut init = self.init;
        let mut values = Vec::with_capacity(self.axes.len());
        let mut rest = index;
        let mut stride: usize = self.point_count();
        for axis in &self.axes {
            stride /= axis.values.len();
            let v = axis.values[rest / stride];
            rest %= stride;
            axis.param.apply(v, &mut p, &mut init);
            values.push(v);
        }
        (values, p, init)
    }
}

impl fmt::Display for Solver {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Solver::Analytic => "analytic",
            Solver::Volterra => "volterra",
            Solver::Dilated => "dilated",
            Solver::Modes => "modes",
        })
    }
}

impl FromStr for Solver {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "analytic" => Ok(Solver::Analytic),
            "volterra" => Ok(Solver::Volterra),
            "dilated" => Ok(Solver::Dilated),
            "modes" => Ok(Solver::Modes),
            _ => Err(Error::InvalidSweep(format!("unknown solver `{s}`"))),
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scenario::Similar => "similar",
            Scenario::SimilarJ => "similar-J",
            Scenario::Dissimilar => "dissimilar",
            Scenario::Stationary => "stationary",
        })
    }
}

impl FromStr for Scenario {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "similar" => Ok(Scenario::Similar),
            "similar-J" | "similar-j" => Ok(Scenario::SimilarJ),
            "dissimilar" => Ok(Scenario::Dissimilar),
            "stationary" => Ok(Scenario::Stationary),
            _ => Err(Error::InvalidSweep(format!("unknown scenario `{s}`"))),
        }
    }
}
