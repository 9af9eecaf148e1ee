use num_complex::Complex64 as C64;

use super::kernel::{KernelSpec, ModeGrid};
use super::series::{TimeGrid, TimeSeries};
use crate::error::{Error, Result};
use crate::model::{AmplitudePair, InitialState, SystemParams};

/// Abort threshold on `| |C1|^2 + |C2|^2 + sum_k |C_k|^2 - 1 |`.
pub const NORM_DRIFT_TOL: f64 = 1e-4;

/// Largest `dt * rate` taken by one RK4 substep.
const MAX_PHASE_STEP: f64 = 0.1;

/// Integrates the qubits against `n_modes` discrete cavity modes sampling the
/// Lorentzian on `[-cutoff, cutoff]`.
///
/// Works in the frame `Q_j = C_j e^{-i nu_j t}`, `P_k = C_k e^{-i delta_k t}`
/// where the generator is a constant Hermitian matrix, so the truncated
/// system conserves the total norm up to the RK4 error. The grid step is
/// subdivided so that no rate exceeds `0.1 / substep`.
pub fn solve_discrete_modes(
    p: &SystemParams,
    init: &InitialState,
    n_modes: usize,
    cutoff: f64,
    grid: &TimeGrid,
) -> Result<TimeSeries> {
    run_discrete_modes(p, init, n_modes, cutoff, grid).map(|run| run.series)
}

/// Output of [`run_discrete_modes`].
#[derive(Debug, Clone)]
pub struct ModeRun {
    pub series: TimeSeries,
    /// Largest `| total norm - 1 |` seen at any grid step.
    pub max_drift: f64,
}

/// [`solve_discrete_modes`] that also reports the norm drift of the full
/// qubits-plus-field state.
pub fn run_discrete_modes(
    p: &SystemParams,
    init: &InitialState,
    n_modes: usize,
    cutoff: f64,
    grid: &TimeGrid,
) -> Result<ModeRun> {
    p.validate()?;
    init.validate()?;
    if n_modes < 101 || n_modes % 2 == 0 {
        return Err(Error::InvalidParams(format!("n_modes must be odd and at least 101, got {n_modes}")));
    }
    if !(cutoff >= 50.0) {
        return Err(Error::InvalidParams(format!("cutoff must be at least 50, got {cutoff}")));
    }

    let kern = KernelSpec::new(p);
    let modes = ModeGrid::lorentzian(kern.amplitude_sq, n_modes, cutoff);
    let nu = kern.nu;
    let w = kern.weights;
    let det = &modes.detunings;
    let g = &modes.couplings;

    let fastest = nu[0].abs().max(nu[1].abs()).max(cutoff) + kern.amplitude_sq.sqrt();
    let sub = ((grid.dt * fastest / MAX_PHASE_STEP).ceil() as usize).max(1);
    let h = grid.dt / sub as f64;

    // y = (Q1, Q2, P_1..P_N)
    let amp0 = init.amplitudes();
    let mut y = vec![C64::new(0.0, 0.0); n_modes + 2];
    y[0] = amp0.c1;
    y[1] = amp0.c2;
    let mut k = vec![vec![C64::new(0.0, 0.0); n_modes + 2]; 4];
    let mut tmp = vec![C64::new(0.0, 0.0); n_modes + 2];

    let rhs = |y: &[C64], dy: &mut [C64]| {
        let i = C64::i();
        let mut field = C64::new(0.0, 0.0);
        for (gk, pk) in g.iter().zip(&y[2..]) {
            field += gk * pk;
        }
        let source = w[0] * y[0] + w[1] * y[1];
        dy[0] = -i * (nu[0] * y[0] + w[0] * field);
        dy[1] = -i * (nu[1] * y[1] + w[1] * field);
        for ((d, (dk, gk)), pk) in dy[2..].iter_mut().zip(det.iter().zip(g)).zip(&y[2..]) {
            *d = -i * (dk * pk + gk * source);
        }
    };

    let mut out = TimeSeries::with_capacity(grid.steps / grid.stride + 1);
    out.push(0.0, AmplitudePair::new(y[0], y[1]));
    let mut max_drift = 0f64;

    for n in 0..grid.steps {
        for _ in 0..sub {
            rhs(&y, &mut k[0]);
            for s in 1..4 {
                let a = if s == 3 { h } else { 0.5 * h };
                for (t, (yi, ki)) in tmp.iter_mut().zip(y.iter().zip(&k[s - 1])) {
                    *t = yi + a * ki;
                }
                rhs(&tmp, &mut k[s]);
            }
            for (m, yi) in y.iter_mut().enumerate() {
                *yi += (h / 6.0) * (k[0][m] + 2.0 * k[1][m] + 2.0 * k[2][m] + k[3][m]);
            }
        }

        let t = grid.tau(n + 1);
        let total: f64 = y.iter().map(|c| c.norm_sqr()).sum();
        let drift = (total - 1.0).abs();
        if !(drift <= NORM_DRIFT_TOL) {
            return Err(Error::NormDrift { tau: t, drift });
        }
        max_drift = max_drift.max(drift);
        if grid.records(n + 1) {
            let c1 = y[0] * C64::from_polar(1.0, nu[0] * t);
            let c2 = y[1] * C64::from_polar(1.0, nu[1] * t);
            out.push(t, AmplitudePair::new(c1, c2).scale(kern.output_phase(t)));
        }
    }
    Ok(ModeRun { series: out, max_drift })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_small_grids() {
        let p = SystemParams::default();
        let init = InitialState::new(0.0, 0.0).unwrap();
        let grid = TimeGrid::new(1.0, 0.01).unwrap();
        assert!(solve_discrete_modes(&p, &init, 100, 100.0, &grid).is_err());
        assert!(solve_discrete_modes(&p, &init, 99, 100.0, &grid).is_err());
        assert!(solve_discrete_modes(&p, &init, 101, 10.0, &grid).is_err());
    }

    #[test]
    fn short_run_conserves_norm() {
        let p = SystemParams { coupling: 1.0, ..Default::default() };
        let init = InitialState::new(0.3, 0.0).unwrap();
        let grid = TimeGrid::new(1.0, 0.01).unwrap();
        let run = run_discrete_modes(&p, &init, 201, 50.0, &grid).unwrap();
        assert!(run.max_drift < 1e-8, "{}", run.max_drift);
    }
}
