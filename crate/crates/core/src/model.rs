//! Parameter model and the dressed-basis state shared by every solver.
//!
//! All rates are measured in units of the cavity loss rate, so the loss rate
//! itself is 1 and time is the scaled time `tau = lambda * t`. The collective
//! coupling convention is `alpha_T = 1`, which makes the per-qubit coupling
//! weights equal to `r1` and `r2 = sqrt(1 - r1^2)`.

use std::f64::consts::{PI, TAU};

use nalgebra::{Matrix4, SymmetricEigen};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Slack allowed on `|C1|^2 + |C2|^2 <= 1`.
pub const NORM_TOL: f64 = 1e-9;
/// Most negative eigenvalue accepted as positive semidefinite.
pub const PSD_TOL: f64 = 1e-10;
/// Hermiticity and trace tolerance for density matrices.
pub const DENSITY_TOL: f64 = 1e-12;

/// Physical parameters, all in units of the cavity loss rate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams {
    /// Dimensionless collective coupling `R`.
    pub coupling: f64,
    /// Classical Rabi frequency.
    pub omega: f64,
    /// Qubit-laser detuning of qubit 1.
    pub delta1: f64,
    /// Qubit-laser detuning of qubit 2.
    pub delta2: f64,
    /// Laser-cavity detuning.
    pub delta_l: f64,
    /// Ising coupling between the qubits.
    pub j: f64,
    /// Relative environment coupling of qubit 1, in (0, 1).
    pub r1: f64,
}

impl Default for SystemParams {
    /// Resonance baseline: weak coupling, symmetric qubits, no drive.
    fn default() -> Self {
        SystemParams {
            coupling: 0.1,
            omega: 0.0,
            delta1: 0.0,
            delta2: 0.0,
            delta_l: 0.0,
            j: 0.0,
            r1: std::f64::consts::FRAC_1_SQRT_2,
        }
    }
}

impl SystemParams {
    pub fn validate(&self) -> Result<()> {
        let finite = [
            self.coupling,
            self.omega,
            self.delta1,
            self.delta2,
            self.delta_l,
            self.j,
            self.r1,
        ]
        .iter()
        .all(|v| v.is_finite());
        if !finite {
            return Err(Error::InvalidParams("parameters must be finite".into()));
        }
        if self.coupling <= 0.0 {
            return Err(Error::InvalidParams(format!("R must be positive, got {}", self.coupling)));
        }
        if self.omega < 0.0 {
            return Err(Error::InvalidParams(format!(
                "Rabi frequency must be non-negative, got {}",
                self.omega
            )));
        }
        if !(self.r1 > 0.0 && self.r1 < 1.0) {
            return Err(Error::InvalidParams(format!("r1 must lie in (0, 1), got {}", self.r1)));
        }
        Ok(())
    }

    pub fn r2(&self) -> f64 {
        (1.0 - self.r1 * self.r1).sqrt()
    }

    /// Coupling weight `alpha_j` of qubit `j` (1 or 2).
    pub fn weight(&self, j: usize) -> f64 {
        match j {
            1 => self.r1,
            2 => self.r2(),
            _ => panic!("qubit index must be 1 or 2, got {j}"),
        }
    }

    pub fn dressed(&self, j: usize) -> DressedQubit {
        match j {
            1 => dress(self.delta1, self.omega),
            2 => dress(self.delta2, self.omega),
            _ => panic!("qubit index must be 1 or 2, got {j}"),
        }
    }

    /// Identical transition frequencies, the regime with a sub-radiant state.
    pub fn is_similar(&self) -> bool {
        self.delta1 == self.delta2
    }

    pub fn require_similar(&self) -> Result<()> {
        if self.is_similar() {
            Ok(())
        } else {
            Err(Error::NotSimilar { delta1: self.delta1, delta2: self.delta2 })
        }
    }
}

/// A single qubit diagonalised in the presence of the drive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DressedQubit {
    /// Dressed splitting `chi = sqrt(delta^2 + 4 omega^2)`.
    pub chi: f64,
    /// Mixing angle in `[0, pi]`.
    pub eta: f64,
}

impl DressedQubit {
    /// `cos^2(eta / 2)`, the fraction of the bare coupling surviving in the
    /// dressed raising operator.
    pub fn cos2_half(&self) -> f64 {
        let c = (0.5 * self.eta).cos();
        c * c
    }
}

/// Dressed splitting and mixing angle of a qubit with detuning `delta`
/// driven at Rabi frequency `omega >= 0`.
///
/// `delta = omega = 0` returns the bare basis (`chi = 0`, `eta = 0`).
pub fn dress(delta: f64, omega: f64) -> DressedQubit {
    let chi = (delta * delta + 4.0 * omega * omega).sqrt();
    let eta = if delta == 0.0 && omega == 0.0 { 0.0 } else { (2.0 * omega).atan2(delta) };
    DressedQubit { chi, eta }
}

/// Initial superposition `cos(theta/2)|EG> + sin(theta/2) e^{i phi}|GE>`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InitialState {
    pub theta: f64,
    pub phi: f64,
}

impl InitialState {
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        let state = InitialState { theta, phi };
        state.validate()?;
        Ok(state)
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=PI).contains(&self.theta) {
            return Err(Error::InvalidParams(format!("theta must lie in [0, pi], got {}", self.theta)));
        }
        if !(0.0..TAU).contains(&self.phi) {
            return Err(Error::InvalidParams(format!("phi must lie in [0, 2pi), got {}", self.phi)));
        }
        Ok(())
    }

    pub fn amplitudes(&self) -> AmplitudePair {
        initial_amplitudes(self)
    }
}

/// Amplitudes of `|EG>` and `|GE>` (vacuum environment) at one instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmplitudePair {
    pub c1: C64,
    pub c2: C64,
}

impl AmplitudePair {
    pub fn new(c1: C64, c2: C64) -> Self {
        AmplitudePair { c1, c2 }
    }

    /// Excited-sector population `|C1|^2 + |C2|^2`.
    pub fn norm_sqr(&self) -> f64 {
        self.c1.norm_sqr() + self.c2.norm_sqr()
    }

    pub fn scale(&self, factor: C64) -> Self {
        AmplitudePair { c1: self.c1 * factor, c2: self.c2 * factor }
    }
}

pub fn initial_amplitudes(init: &InitialState) -> AmplitudePair {
    let half = 0.5 * init.theta;
    AmplitudePair {
        c1: C64::new(half.cos(), 0.0),
        c2: C64::from_polar(half.sin(), init.phi),
    }
}

/// Projections onto the super-radiant and sub-radiant states.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Betas {
    pub plus: C64,
    pub minus: C64,
}

/// `beta_+ = <psi_+|psi(0)>` with `psi_+ = r1|EG> + r2|GE>` and
/// `beta_- = <psi_-|psi(0)>` with `psi_- = r2|EG> - r1|GE>`.
pub fn beta_coefficients(r1: f64, amp0: &AmplitudePair) -> Betas {
    let r2 = (1.0 - r1 * r1).sqrt();
    Betas {
        plus: amp0.c1 * r1 + amp0.c2 * r2,
        minus: amp0.c1 * r2 - amp0.c2 * r1,
    }
}

/// Reduced two-qubit state in the dressed product basis `(EE, EG, GE, GG)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoQubitDensity {
    matrix: Matrix4<C64>,
}

impl TwoQubitDensity {
    /// Validates Hermiticity, unit trace and positive semidefiniteness.
    pub fn from_matrix(matrix: Matrix4<C64>) -> Result<Self> {
        let herm_err = (matrix - matrix.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
        if herm_err > DENSITY_TOL {
            return Err(Error::InvalidDensity(format!("not Hermitian (deviation {herm_err:e})")));
        }
        let trace = matrix.trace();
        if (trace - C64::new(1.0, 0.0)).norm() > DENSITY_TOL {
            return Err(Error::InvalidDensity(format!("trace is {trace}")));
        }
        let min_eig = min_eigenvalue(&matrix);
        if min_eig < -PSD_TOL {
            return Err(Error::InvalidDensity(format!("negative eigenvalue {min_eig:e}")));
        }
        Ok(TwoQubitDensity { matrix })
    }

    pub fn matrix(&self) -> &Matrix4<C64> {
        &self.matrix
    }

    pub fn min_eigenvalue(&self) -> f64 {
        min_eigenvalue(&self.matrix)
    }
}

fn min_eigenvalue(m: &Matrix4<C64>) -> f64 {
    let herm = (m + m.adjoint()).scale(0.5);
    SymmetricEigen::new(herm).eigenvalues.iter().copied().fold(f64::INFINITY, f64::min)
}

/// Reduced density matrix of the qubits after tracing out the environment.
///
/// Fails when `|C1|^2 + |C2|^2` exceeds 1 by more than [`NORM_TOL`], which
/// only happens when an upstream solver has blown up.
pub fn density_matrix(amp: &AmplitudePair) -> Result<TwoQubitDensity> {
    let norm = amp.norm_sqr();
    if !norm.is_finite() || norm > 1.0 + NORM_TOL {
        return Err(Error::NormExceeded { norm });
    }
    let zero = C64::new(0.0, 0.0);
    let mut m = Matrix4::from_element(zero);
    m[(1, 1)] = C64::new(amp.c1.norm_sqr(), 0.0);
    m[(1, 2)] = amp.c1 * amp.c2.conj();
    m[(2, 1)] = amp.c1.conj() * amp.c2;
    m[(2, 2)] = C64::new(amp.c2.norm_sqr(), 0.0);
    // Clamped so that rounding on a unit-norm pair cannot leave -1e-17.
    m[(3, 3)] = C64::new((1.0 - norm).max(0.0), 0.0);
    Ok(TwoQubitDensity { matrix: m })
}
