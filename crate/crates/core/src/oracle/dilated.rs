use num_complex::Complex64 as C64;

use super::kernel::KernelSpec;
use super::series::{max_stable_dt, TimeGrid, TimeSeries};
use super::RESOLUTION_TOL;
use crate::error::{Error, Result};
use crate::model::{AmplitudePair, InitialState, SystemParams};

type State = [C64; 3];

/// Pseudomode dilation of the Lorentzian kernel, integrated with classical RK4.
///
/// State `(C1, C2, b)` obeys
/// `dC_j/dt = -i W w_j e^{i chi_j t} b` and
/// `db/dt = (-1 + i delta_L) b - i W sum_j w_j e^{-i chi_j t} C_j`, `b(0) = 0`.
/// Eliminating `b` gives back the Volterra system exactly.
pub fn solve_dilated(p: &SystemParams, init: &InitialState, grid: &TimeGrid) -> Result<TimeSeries> {
    p.validate()?;
    init.validate()?;
    let max = max_stable_dt(p);
    if grid.dt > max * (1.0 + 1e-12) {
        return Err(Error::StepTooLarge { dt: grid.dt, max });
    }

    let kern = KernelSpec::new(p);
    let w = kern.amplitude_sq.sqrt();
    let gain = [w * kern.weights[0], w * kern.weights[1]];
    let damp = C64::new(-kern.decay, kern.delta_l);
    let i = C64::i();

    let rhs = |t: f64, y: &State| -> State {
        let e1 = C64::from_polar(1.0, kern.chi[0] * t);
        let e2 = C64::from_polar(1.0, kern.chi[1] * t);
        [
            -i * gain[0] * e1 * y[2],
            -i * gain[1] * e2 * y[2],
            damp * y[2] - i * (gain[0] * e1.conj() * y[0] + gain[1] * e2.conj() * y[1]),
        ]
    };

    let amp0 = init.amplitudes();
    let mut y: State = [amp0.c1, amp0.c2, C64::new(0.0, 0.0)];
    let h = grid.dt;
    let mut out = TimeSeries::with_capacity(grid.steps / grid.stride + 1);
    out.push(0.0, AmplitudePair::new(y[0], y[1]));

    for n in 0..grid.steps {
        let t = grid.tau(n);
        let k1 = rhs(t, &y);
        let k2 = rhs(t + 0.5 * h, &axpy(&y, 0.5 * h, &k1));
        let k3 = rhs(t + 0.5 * h, &axpy(&y, 0.5 * h, &k2));
        let k4 = rhs(t + h, &axpy(&y, h, &k3));
        for m in 0..3 {
            y[m] += (h / 6.0) * (k1[m] + 2.0 * k2[m] + 2.0 * k3[m] + k4[m]);
        }

        let t_next = grid.tau(n + 1);
        let norm = y[0].norm_sqr() + y[1].norm_sqr();
        if !(norm <= 1.0 + RESOLUTION_TOL) {
            return Err(Error::UnderResolved { tau: t_next, norm });
        }
        if grid.records(n + 1) {
            out.push(t_next, AmplitudePair::new(y[0], y[1]).scale(kern.output_phase(t_next)));
        }
    }
    Ok(out)
}

fn axpy(y: &State, a: f64, k: &State) -> State {
    [y[0] + a * k[0], y[1] + a * k[1], y[2] + a * k[2]]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cavity_population_stays_bounded() {
        let p = SystemParams { coupling: 10.0, ..Default::default() };
        let init = InitialState::new(0.0, 0.0).unwrap();
        let grid = TimeGrid::new(4.0, 1e-3).unwrap();
        let s = solve_dilated(&p, &init, &grid).unwrap();
        assert_eq!(s.len(), grid.steps + 1);
        assert!(s.iter().all(|x| x.amps.norm_sqr() <= 1.0 + 1e-9));
    }
}
