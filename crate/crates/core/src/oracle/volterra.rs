use num_complex::Complex64 as C64;

use super::kernel::KernelSpec;
use super::series::{max_stable_dt, TimeGrid, TimeSeries};
use super::RESOLUTION_TOL;
use crate::error::{Error, Result};
use crate::model::{AmplitudePair, InitialState, SystemParams};

/// How the memory integral over the history is evaluated.
///
/// Both give the same quadrature up to rounding. `Recursive` exploits the
/// exponential kernel, `I_{n+1} = e^{-mu h} I_n + alpha g_{n+1} + beta g_n`,
/// and costs O(N). `Direct` sums the full weighted history at every step in
/// O(N^2) and is kept as a check on the recursion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum HistorySum {
    #[default]
    Recursive,
    Direct,
}

/// Product-trapezoid solution of the coupled Volterra system
/// `dC_j/dt = -W^2 int_0^t e^{-mu_j (t-s)} sum_i k_ji ph_ji(s) C_i(s) ds`,
/// with `mu_j = 1 - i nu_j` and cross phases `ph_12 = e^{-i xi21 s}`,
/// `ph_21 = e^{+i xi21 s}`.
pub fn solve_volterra(p: &SystemParams, init: &InitialState, grid: &TimeGrid) -> Result<TimeSeries> {
    solve_volterra_with(p, init, grid, HistorySum::Recursive)
}

/// Richardson extrapolation of [`solve_volterra`] from steps `dt` and
/// `dt / 2`, fourth order in `dt` for smooth solutions.
pub fn solve_volterra_extrapolated(p: &SystemParams, init: &InitialState, grid: &TimeGrid) -> Result<TimeSeries> {
    let coarse = solve_volterra(p, init, grid)?;
    let fine = solve_volterra(p, init, &grid.refined())?;
    let mut out = TimeSeries::with_capacity(coarse.len());
    for (c, f) in coarse.iter().zip(fine.iter()) {
        let c1 = (4.0 * f.amps.c1 - c.amps.c1) / 3.0;
        let c2 = (4.0 * f.amps.c2 - c.amps.c2) / 3.0;
        out.push(c.tau, AmplitudePair::new(c1, c2));
    }
    Ok(out)
}

pub fn solve_volterra_with(
    p: &SystemParams,
    init: &InitialState,
    grid: &TimeGrid,
    history: HistorySum,
) -> Result<TimeSeries> {
    p.validate()?;
    init.validate()?;
    let max = max_stable_dt(p);
    if grid.dt > max * (1.0 + 1e-12) {
        return Err(Error::StepTooLarge { dt: grid.dt, max });
    }

    let kern = KernelSpec::new(p);
    let h = grid.dt;
    let w2 = kern.amplitude_sq;
    let mu = [C64::new(kern.decay, -kern.nu[0]), C64::new(kern.decay, -kern.nu[1])];
    let decay = [(-mu[0] * h).exp(), (-mu[1] * h).exp()];
    let (alpha, beta): (Vec<C64>, Vec<C64>) = mu.iter().map(|&m| trapezoid_weights(m, h)).unzip();

    let coupled = |t: f64, c: [C64; 2]| -> [C64; 2] {
        let ph = C64::from_polar(1.0, kern.xi21 * t);
        [
            kern.k(0, 0) * c[0] + kern.k(0, 1) * ph.conj() * c[1],
            kern.k(1, 0) * ph * c[0] + kern.k(1, 1) * c[1],
        ]
    };

    let amp0 = init.amplitudes();
    let mut c = [amp0.c1, amp0.c2];
    let mut g = coupled(0.0, c);
    let mut integral = [C64::new(0.0, 0.0); 2];
    let mut g_hist: Vec<[C64; 2]> = match history {
        HistorySum::Direct => {
            let mut v = Vec::with_capacity(grid.steps + 1);
            v.push(g);
            v
        }
        HistorySum::Recursive => Vec::new(),
    };
    // powers E^d for the direct sum
    let mut pow: Vec<[C64; 2]> = Vec::new();
    if history == HistorySum::Direct {
        pow.reserve(grid.steps + 1);
        let mut e = [C64::new(1.0, 0.0); 2];
        for _ in 0..=grid.steps {
            pow.push(e);
            e = [e[0] * decay[0], e[1] * decay[1]];
        }
    }

    let mut out = TimeSeries::with_capacity(grid.steps / grid.stride + 1);
    out.push(0.0, AmplitudePair::new(c[0], c[1]).scale(kern.output_phase(0.0)));
    let half = 0.5 * w2 * h;

    for n in 0..grid.steps {
        let t_next = grid.tau(n + 1);
        // history part of I_{n+1}: everything except alpha * g_{n+1}
        let hist = match history {
            HistorySum::Recursive => [
                decay[0] * integral[0] + beta[0] * g[0],
                decay[1] * integral[1] + beta[1] * g[1],
            ],
            HistorySum::Direct => {
                let mut s = [C64::new(0.0, 0.0); 2];
                // g_k for k = 0..=n carries lag d = n + 1 - k
                for (k, gk) in g_hist.iter().enumerate() {
                    let d = n + 1 - k;
                    for j in 0..2 {
                        let mut wgt = beta[j] * pow[d - 1][j];
                        if k > 0 {
                            wgt += alpha[j] * pow[d][j];
                        }
                        s[j] += wgt * gk[j];
                    }
                }
                s
            }
        };

        // C_{n+1} + half * alpha .* K(t_{n+1}) C_{n+1} = rhs
        let rhs = [
            c[0] - half * (integral[0] + hist[0]),
            c[1] - half * (integral[1] + hist[1]),
        ];
        let ph = C64::from_polar(1.0, kern.xi21 * t_next);
        let a11 = 1.0 + half * alpha[0] * kern.k(0, 0);
        let a12 = half * alpha[0] * kern.k(0, 1) * ph.conj();
        let a21 = half * alpha[1] * kern.k(1, 0) * ph;
        let a22 = 1.0 + half * alpha[1] * kern.k(1, 1);
        let det = a11 * a22 - a12 * a21;
        c = [(rhs[0] * a22 - a12 * rhs[1]) / det, (a11 * rhs[1] - a21 * rhs[0]) / det];

        g = coupled(t_next, c);
        integral = [hist[0] + alpha[0] * g[0], hist[1] + alpha[1] * g[1]];
        if history == HistorySum::Direct {
            g_hist.push(g);
        }

        let norm = c[0].norm_sqr() + c[1].norm_sqr();
        if !(norm <= 1.0 + RESOLUTION_TOL) {
            return Err(Error::UnderResolved { tau: t_next, norm });
        }
        if grid.records(n + 1) {
            out.push(t_next, AmplitudePair::new(c[0], c[1]).scale(kern.output_phase(t_next)));
        }
    }
    Ok(out)
}

/// Weights of `int_0^h e^{-mu y} g(t - y) dy ~ alpha g(t) + beta g(t - h)`
/// for `g` linear on the interval.
fn trapezoid_weights(mu: C64, h: f64) -> (C64, C64) {
    let z = mu * h;
    let (total, beta) = if z.norm() < 0.5 {
        // total = h sum (-z)^n / (n+1)!,  beta = h sum (-z)^n / (n! (n+2))
        let mut total = C64::new(0.0, 0.0);
        let mut beta = C64::new(0.0, 0.0);
        let mut term = C64::new(1.0, 0.0); // (-z)^n / n!
        for n in 0..30 {
            total += term / (n + 1) as f64;
            beta += term / (n + 2) as f64;
            term *= -z / (n + 1) as f64;
        }
        (total * h, beta * h)
    } else {
        let ez = (-z).exp();
        let total = (1.0 - ez) / mu;
        let beta = (1.0 - ez * (1.0 + z)) / (mu * mu) / h;
        (total, beta)
    };
    (total - beta, beta)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_agree_across_branches() {
        let h = 0.7;
        for mu in [C64::new(1.0, 0.70), C64::new(1.0, 0.72), C64::new(1.0, -0.4)] {
            let (a, b) = trapezoid_weights(mu, h);
            // brute-force midpoint quadrature
            let n = 200_000;
            let (mut qa, mut qb) = (C64::new(0.0, 0.0), C64::new(0.0, 0.0));
            for k in 0..n {
                let y = (k as f64 + 0.5) * h / n as f64;
                let e = (-mu * y).exp() * (h / n as f64);
                qa += e * (1.0 - y / h);
                qb += e * (y / h);
            }
            assert!((a - qa).norm() < 1e-10, "{mu}: {a} vs {qa}");
            assert!((b - qb).norm() < 1e-10, "{mu}: {b} vs {qb}");
        }
    }

    #[test]
    fn weights_of_vanishing_rate() {
        let (a, b) = trapezoid_weights(C64::new(0.0, 0.0), 0.2);
        assert!((a - 0.1).norm() < 1e-16 && (b - 0.1).norm() < 1e-16);
    }

    #[test]
    fn recursive_and_direct_history_agree() {
        let p = SystemParams { coupling: 3.0, omega: 0.5, delta1: 0.0, delta2: 1.0, delta_l: 0.4, r1: 0.6, j: 0.0 };
        let init = InitialState::new(1.0, 2.0).unwrap();
        let grid = TimeGrid::new(1.0, 0.002).unwrap();
        let a = solve_volterra_with(&p, &init, &grid, HistorySum::Recursive).unwrap();
        let b = solve_volterra_with(&p, &init, &grid, HistorySum::Direct).unwrap();
        for (x, y) in a.iter().zip(b.iter()) {
            assert!((x.amps.c1 - y.amps.c1).norm() < 1e-12);
            assert!((x.amps.c2 - y.amps.c2).norm() < 1e-12);
        }
    }

    #[test]
    fn rejects_coarse_steps() {
        let p = SystemParams { coupling: 10.0, ..Default::default() };
        let init = InitialState::new(0.0, 0.0).unwrap();
        let grid = TimeGrid::new(1.0, 0.01).unwrap();
        assert!(matches!(solve_volterra(&p, &init, &grid), Err(Error::StepTooLarge { .. })));
    }
}
