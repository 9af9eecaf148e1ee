use rayon::prelude::*;

use super::spec::{Scenario, Solver, SweepSpec, Times};
use super::table::Table;
use crate::dissimilar::DissimilarPropagator;
use crate::entanglement::{concurrence, entanglement_dynamic};
use crate::error::{Error, Result};
use crate::model::{density_matrix, AmplitudePair, InitialState, SystemParams};
use crate::oracle::{max_stable_dt, solve_dilated, solve_discrete_modes, solve_volterra, TimeGrid, TimeSeries};
use crate::similar::{settling_time, stationary_amplitudes, SimilarPropagator};

/// `|G|` below which a numeric run counts as stationary.
pub const STATIONARY_TOL: f64 = 1e-8;
/// Every `VERIFY_STRIDE`-th parameter point is re-run under `--verify`.
pub const VERIFY_STRIDE: usize = 20;
pub const VERIFY_TOL: f64 = 1e-3;
pub const VERIFY_TOL_MODES: f64 = 5e-3;

/// Names of the per-row output columns after the axis columns.
pub const VALUE_COLUMNS: [&str; 7] = ["tau", "re_c1", "im_c1", "re_c2", "im_c2", "e_over_m", "concurrence"];

/// Evaluates every parameter point of `spec` on `threads` workers (all
/// available cores when `None`). Rows come out in axis-major, then time,
/// order regardless of scheduling.
pub fn run_sweep(spec: &SweepSpec, threads: Option<usize>) -> Result<Table> {
    spec.validate()?;
    let work = || -> Result<Vec<Vec<Vec<f64>>>> {
        (0..spec.point_count()).into_par_iter().map(|k| point_rows(spec, k)).collect()
    };
    let blocks = match threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::InvalidSweep(format!("cannot start {n} worker threads: {e}")))?
            .install(work)?,
        None => work()?,
    };

    let mut columns: Vec<String> = spec.axes.iter().map(|a| a.param.name().to_string()).collect();
    columns.extend(VALUE_COLUMNS.iter().map(|s| s.to_string()));
    Ok(Table { comments: describe(spec), columns, rows: blocks.into_iter().flatten().collect() })
}

fn point_rows(spec: &SweepSpec, index: usize) -> Result<Vec<Vec<f64>>> {
    let (values, p, init) = spec.point(index);
    let traj = trajectory(spec.solver, spec.scenario, &spec.times, spec.dt, spec, &p, &init)?;

    if spec.verify && index % VERIFY_STRIDE == 0 {
        let oracle = trajectory(Solver::Volterra, spec.scenario, &spec.times, None, spec, &p, &init)?;
        let tol = if spec.solver == Solver::Modes { VERIFY_TOL_MODES } else { VERIFY_TOL };
        for ((tau, a), (_, b)) in traj.iter().zip(&oracle) {
            let diff = (entanglement_dynamic(a) - entanglement_dynamic(b)).abs();
            if !(diff <= tol) {
                let point = spec
                    .axes
                    .iter()
                    .zip(&values)
                    .map(|(ax, v)| format!("{}={v}", ax.param))
                    .chain(std::iter::once(format!("tau={tau}")))
                    .collect::<Vec<_>>()
                    .join(", ");
                return Err(Error::VerifyFailed { point, diff, tol });
            }
        }
    }

    traj.into_iter()
        .map(|(tau, amp)| {
            let conc = concurrence(&density_matrix(&amp)?)?;
            let mut row = values.clone();
            row.extend([tau, amp.c1.re, amp.c1.im, amp.c2.re, amp.c2.im, entanglement_dynamic(&amp), conc]);
            Ok(row)
        })
        .collect()
}

/// Amplitudes at the requested instants for one parameter point.
fn trajectory(
    solver: Solver,
    scenario: Scenario,
    times: &Times,
    dt: Option<f64>,
    spec: &SweepSpec,
    p: &SystemParams,
    init: &InitialState,
) -> Result<Vec<(f64, AmplitudePair)>> {
    if solver == Solver::Analytic {
        return analytic(scenario, times, p, init);
    }
    let dt = dt.unwrap_or_else(|| max_stable_dt(p));
    let numeric = |grid: &TimeGrid| -> Result<TimeSeries> {
        match solver {
            Solver::Volterra => solve_volterra(p, init, grid),
            Solver::Dilated => solve_dilated(p, init, grid),
            Solver::Modes => solve_discrete_modes(p, init, spec.modes.n_modes, spec.modes.cutoff, grid),
            Solver::Analytic => unreachable!(),
        }
    };
    let collect = |s: TimeSeries| s.iter().map(|x| (x.tau, x.amps)).collect::<Vec<_>>();
    match *times {
        Times::Series { tmax, points } => Ok(collect(numeric(&TimeGrid::sampled(tmax, points - 1, dt)?)?)),
        Times::At(t) => Ok(collect(numeric(&TimeGrid::sampled(t, 1, dt)?)?).split_off(1)),
        Times::Stationary => {
            let end = settling_time(p, STATIONARY_TOL)?;
            let s = numeric(&TimeGrid::sampled(end, 1, dt)?)?;
            let last = s.last().expect("grid has an endpoint");
            Ok(vec![(f64::INFINITY, last.amps)])
        }
    }
}

fn analytic(scenario: Scenario, times: &Times, p: &SystemParams, init: &InitialState) -> Result<Vec<(f64, AmplitudePair)>> {
    let eval: Box<dyn Fn(f64) -> AmplitudePair> = match scenario {
        Scenario::Stationary => return Ok(vec![(f64::INFINITY, stationary_amplitudes(p, init)?)]),
        Scenario::Similar => {
            let prop = SimilarPropagator::new(p, init)?;
            Box::new(move |t| prop.at(t))
        }
        Scenario::SimilarJ => {
            let prop = SimilarPropagator::with_ising(p, init)?;
            Box::new(move |t| prop.at(t))
        }
        Scenario::Dissimilar => {
            let prop = DissimilarPropagator::with_initial(p, init);
            Box::new(move |t| prop.at(t))
        }
    };
    let instants = times.instants().expect("non-stationary scenario has instants");
    Ok(instants.into_iter().map(|t| (t, eval(t))).collect())
}

/// Header comment lines: version and every input of the run.
fn describe(spec: &SweepSpec) -> Vec<String> {
    let p = &spec.params;
    let mut out = vec![
        format!("cavent {}", env!("CARGO_PKG_VERSION")),
        format!("scenario={} solver={}", spec.scenario, spec.solver),
        format!(
            "R={} omega={} delta1={} delta2={} deltaL={} J={} r1={} theta={} phi={}",
            p.coupling, p.omega, p.delta1, p.delta2, p.delta_l, p.j, p.r1, spec.init.theta, spec.init.phi
        ),
    ];
    for a in &spec.axes {
        let vals: Vec<String> = a.values.iter().map(|v| v.to_string()).collect();
        out.push(format!("axis {}={}", a.param, vals.join(",")));
    }
    out.push(match spec.times {
        Times::Series { tmax, points } => format!("tmax={tmax} tpoints={points}"),
        Times::At(t) => format!("tau={t}"),
        Times::Stationary => "tau=inf".to_string(),
    });
    if spec.solver != Solver::Analytic {
        let dt = spec.dt.map_or("auto".to_string(), |d| d.to_string());
        out.push(format!("dt={dt}"));
    }
    if spec.solver == Solver::Modes {
        out.push(format!("n_modes={} cutoff={}", spec.modes.n_modes, spec.modes.cutoff));
    }
    if spec.verify {
        out.push(format!("verify every {VERIFY_STRIDE}th point against volterra"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sweep::spec::{Axis, Param};
    use std::f64::consts::{FRAC_PI_2, PI};

    #[test]
    fn stationary_surface_peak() {
        let mut s = SweepSpec::new(Scenario::Stationary, SystemParams::default(), InitialState::new(0.0, PI).unwrap());
        s.axes = vec![
            Axis::range(Param::R1, 0.01, 0.99, 99).unwrap(),
            Axis::range(Param::Theta, 0.0, PI, 101).unwrap(),
        ];
        let t = run_sweep(&s, Some(2)).unwrap();
        assert_eq!(t.rows.len(), 99 * 101);
        let e = t.column("e_over_m").unwrap();
        let (k, max) = e.iter().enumerate().fold((0, 0.0), |acc, (k, &v)| if v > acc.1 { (k, v) } else { acc });
        assert!((max - 1.0).abs() < 1e-3, "{max}");
        assert!((t.rows[k][0] - 0.71).abs() < 0.011 && (t.rows[k][1] - FRAC_PI_2).abs() < 0.032);
        assert!(t.rows.iter().all(|r| r[2].is_infinite()));
    }

    #[test]
    fn thread_count_does_not_change_output() {
        let mut s = SweepSpec::new(Scenario::Similar, SystemParams { coupling: 10.0, ..Default::default() }, InitialState::new(0.0, 0.0).unwrap());
        s.axes = vec![Axis::list(Param::Omega, vec![0.0, 1.0, 5.0, 10.0]).unwrap()];
        let a = run_sweep(&s, Some(1)).unwrap();
        let b = run_sweep(&s, Some(4)).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.rows.len(), 4 * 801);
    }

    #[test]
    fn verify_passes_for_analytic_and_flags_bad_modes() {
        let mut s = SweepSpec::new(Scenario::Similar, SystemParams { coupling: 1.0, ..Default::default() }, InitialState::new(0.7, 0.0).unwrap());
        s.times = Times::Series { tmax: 2.0, points: 21 };
        s.verify = true;
        assert!(run_sweep(&s, Some(1)).is_ok());

        // a coarse mode grid recurs long before tau = 200
        s.solver = Solver::Modes;
        s.modes.n_modes = 101;
        s.times = Times::At(200.0);
        s.dt = Some(0.05);
        let r = run_sweep(&s, Some(1));
        assert!(matches!(r, Err(Error::VerifyFailed { .. })), "{r:?}");
    }

    #[test]
    fn numeric_stationary_agrees_with_closed_form() {
        let p = SystemParams { coupling: 5.0, omega: 0.5, ..Default::default() };
        let init = InitialState::new(1.2, 0.4).unwrap();
        let mut s = SweepSpec::new(Scenario::Stationary, p, init);
        s.solver = Solver::Dilated;
        let t = run_sweep(&s, None).unwrap();
        let want = entanglement_dynamic(&stationary_amplitudes(&p, &init).unwrap());
        assert!((t.column("e_over_m").unwrap()[0] - want).abs() < 1e-6);
    }
}
