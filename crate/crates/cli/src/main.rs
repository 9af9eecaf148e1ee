//! `sim`: figure presets, parameter sweeps and single trajectories as CSV.

mod config;

use std::f64::consts::{FRAC_PI_2, PI};
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use cavent_core::similar::survival_amplitude_j;
use cavent_core::sweep::{expand, preset, run_figure, run_sweep, Axis, Figure, Scenario, Solver, SweepSpec, Table, Times};
use cavent_core::{InitialState, SystemParams};
use clap::{Args, Parser, Subcommand};

use config::Config;

#[derive(Parser)]
#[command(name = "sim", version, about = "Two driven qubits in a common lossy cavity: amplitudes and entanglement as CSV")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Survival amplitude G(tau) of the cavity-coupled collective mode.
    Gfun(Options),
    /// A single trajectory: amplitudes, E/M and concurrence against tau.
    Evolve(Options),
    /// Long-time amplitudes, optionally swept over up to two axes.
    Stationary(Options),
    /// Sweep up to two parameters (`--axis name=min:max:count`).
    Sweep(Options),
    /// Run figure presets and write `<id>.csv` into the `--out` directory.
    Fig {
        /// Preset id (fig2a .. fig10b), a group such as `fig4`, or `all`.
        id: String,
        #[command(flatten)]
        opts: Options,
    },
}

#[derive(Args, Default)]
struct Options {
    /// Flat `key = value` file; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Coupling ratio R = W / lambda.
    #[arg(long = "R", allow_negative_numbers = true)]
    coupling: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    omega: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    delta1: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    delta2: Option<f64>,
    /// Cavity detuning from the driving field.
    #[arg(long = "deltaL", allow_negative_numbers = true)]
    delta_l: Option<f64>,
    /// Ising coupling between the qubits.
    #[arg(long = "J", allow_negative_numbers = true)]
    j: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    r1: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    theta: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    phi: Option<f64>,
    /// analytic, volterra, dilated or modes.
    #[arg(long)]
    solver: Option<String>,
    /// similar, similar-J, dissimilar or stationary. Inferred when omitted.
    #[arg(long)]
    scenario: Option<String>,
    /// Swept parameter, `name=min:max:count` or `name=v1,v2,...`. Repeatable.
    #[arg(long = "axis")]
    axes: Vec<String>,
    /// End of the time series; defaults to 4 for R >= 1, 400 otherwise.
    #[arg(long, allow_negative_numbers = true)]
    tmax: Option<f64>,
    /// Samples on [0, tmax]; defaults to 801 for R >= 1, 2001 otherwise.
    #[arg(long)]
    tpoints: Option<usize>,
    /// Emit a single instant instead of a series.
    #[arg(long, allow_negative_numbers = true, conflicts_with_all = ["tmax", "tpoints"])]
    tau: Option<f64>,
    /// Step of the numeric solvers; resolution bound when omitted.
    #[arg(long, allow_negative_numbers = true)]
    dt: Option<f64>,
    /// Number of modes for the modes solver.
    #[arg(long)]
    modes: Option<usize>,
    /// Frequency cutoff for the modes solver.
    #[arg(long)]
    cutoff: Option<f64>,
    /// Output file (directory for `fig`). Standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Re-run every 20th point with the Volterra oracle and fail on mismatch.
    #[arg(long)]
    verify: bool,
    /// Worker threads; SIM_THREADS takes precedence.
    #[arg(long)]
    threads: Option<usize>,
}

enum Failure {
    Usage(String),
    Core(cavent_core::Error),
}

impl From<cavent_core::Error> for Failure {
    fn from(e: cavent_core::Error) -> Self {
        Failure::Core(e)
    }
}

impl From<String> for Failure {
    fn from(e: String) -> Self {
        Failure::Usage(e)
    }
}

type Outcome<T = ()> = std::result::Result<T, Failure>;

/// Options merged with the config file.
struct Resolved {
    params: SystemParams,
    init: InitialState,
    solver: Option<Solver>,
    scenario: Option<Scenario>,
    axes: Vec<Axis>,
    tmax: Option<f64>,
    tpoints: Option<usize>,
    tau: Option<f64>,
    dt: Option<f64>,
    modes: Option<usize>,
    cutoff: Option<f64>,
    out: Option<PathBuf>,
    verify: bool,
    threads: Option<usize>,
}

impl Resolved {
    fn new(o: Options) -> Outcome<Self> {
        let cfg = match &o.config {
            Some(path) => Config::load(path)?,
            None => Config::default(),
        };
        let base = SystemParams::default();
        let params = SystemParams {
            coupling: cfg.pick(o.coupling, "R")?.unwrap_or(base.coupling),
            omega: cfg.pick(o.omega, "omega")?.unwrap_or(base.omega),
            delta1: cfg.pick(o.delta1, "delta1")?.unwrap_or(base.delta1),
            delta2: cfg.pick(o.delta2, "delta2")?.unwrap_or(base.delta2),
            delta_l: cfg.pick(o.delta_l, "deltaL")?.unwrap_or(base.delta_l),
            j: cfg.pick(o.j, "J")?.unwrap_or(base.j),
            r1: cfg.pick(o.r1, "r1")?.unwrap_or(base.r1),
        };
        let init = InitialState {
            theta: cfg.pick(o.theta, "theta")?.unwrap_or(FRAC_PI_2),
            phi: cfg.pick(o.phi, "phi")?.unwrap_or(PI),
        };
        let solver = cfg.pick::<String>(o.solver, "solver")?.map(|s| s.parse()).transpose()?;
        let scenario = cfg.pick::<String>(o.scenario, "scenario")?.map(|s| s.parse()).transpose()?;
        let axes = o.axes.iter().map(|a| Axis::parse(a)).collect::<cavent_core::Result<_>>()?;

        let threads = match std::env::var("SIM_THREADS") {
            Ok(v) => Some(v.trim().parse::<usize>().map_err(|e| format!("SIM_THREADS=`{v}`: {e}"))?),
            Err(_) => cfg.pick(o.threads, "threads")?,
        };
        if threads == Some(0) {
            return Err(Failure::Usage("thread count must be at least 1".into()));
        }

        Ok(Resolved {
            params,
            init,
            solver,
            scenario,
            axes,
            tmax: cfg.pick(o.tmax, "tmax")?,
            tpoints: cfg.pick(o.tpoints, "tpoints")?,
            tau: cfg.pick(o.tau, "tau")?,
            dt: cfg.pick(o.dt, "dt")?,
            modes: cfg.pick(o.modes, "modes")?,
            cutoff: cfg.pick(o.cutoff, "cutoff")?,
            out: o.out,
            verify: o.verify,
            threads,
        })
    }

    fn times(&self) -> Outcome<Times> {
        if let Some(t) = self.tau {
            return Ok(Times::At(t));
        }
        let Times::Series { tmax, points } = Times::default_for(self.params.coupling) else { unreachable!() };
        let tmax = self.tmax.unwrap_or(tmax);
        let points = self.tpoints.unwrap_or(points);
        if !(tmax > 0.0) || points < 2 {
            return Err(Failure::Usage(format!("time series needs tmax > 0 and at least 2 points (tmax={tmax}, tpoints={points})")));
        }
        Ok(Times::Series { tmax, points })
    }

    fn spec(&self, scenario: Scenario, times: Times) -> SweepSpec {
        let mut spec = SweepSpec::new(scenario, self.params, self.init);
        spec.solver = self.solver.unwrap_or_default();
        spec.axes = self.axes.clone();
        spec.times = times;
        spec.dt = self.dt;
        if let Some(n) = self.modes {
            spec.modes.n_modes = n;
        }
        if let Some(k) = self.cutoff {
            spec.modes.cutoff = k;
        }
        spec.verify = self.verify;
        spec
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let msg = e.to_string();
            let line = msg.lines().find(|l| !l.trim().is_empty()).unwrap_or("invalid arguments");
            eprintln!("sim: {}", line.trim_start_matches("error: "));
            return ExitCode::from(1);
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("sim: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Core(e)) => {
            eprintln!("sim: {e}");
            ExitCode::from(if e.is_numerical() { 2 } else { 1 })
        }
    }
}

fn run(command: Command) -> Outcome {
    match command {
        Command::Gfun(o) => gfun(Resolved::new(o)?),
        Command::Evolve(o) => {
            let r = Resolved::new(o)?;
            if !r.axes.is_empty() {
                return Err(Failure::Usage("evolve takes no --axis; use `sim sweep`".into()));
            }
            let scenario = r.scenario.unwrap_or_else(|| Scenario::infer(&r.params));
            let table = run_sweep(&r.spec(scenario, r.times()?), r.threads)?;
            emit(&table, r.out.as_deref())
        }
        Command::Stationary(o) => {
            let r = Resolved::new(o)?;
            if r.tau.is_some() || r.tmax.is_some() || r.tpoints.is_some() {
                return Err(Failure::Usage("stationary takes no time options".into()));
            }
            if r.scenario.is_some_and(|s| s != Scenario::Stationary) {
                return Err(Failure::Usage("stationary only runs the stationary scenario".into()));
            }
            let table = run_sweep(&r.spec(Scenario::Stationary, Times::Stationary), r.threads)?;
            emit(&table, r.out.as_deref())
        }
        Command::Sweep(o) => {
            let r = Resolved::new(o)?;
            if r.axes.is_empty() {
                return Err(Failure::Usage("sweep needs at least one --axis".into()));
            }
            let scenario = r.scenario.unwrap_or_else(|| Scenario::infer(&r.params));
            let times = if scenario == Scenario::Stationary { Times::Stationary } else { r.times()? };
            let table = run_sweep(&r.spec(scenario, times), r.threads)?;
            emit(&table, r.out.as_deref())
        }
        Command::Fig { id, opts } => fig(&id, Resolved::new(opts)?),
    }
}

fn gfun(r: Resolved) -> Outcome {
    if r.solver.is_some_and(|s| s != Solver::Analytic) || !r.axes.is_empty() {
        return Err(Failure::Usage("gfun is closed-form only and takes no --solver or --axis".into()));
    }
    let p = &r.params;
    let taus = r.times()?.instants().unwrap_or_default();
    let mut rows = Vec::with_capacity(taus.len());
    for tau in taus {
        let g = survival_amplitude_j(tau, p)?;
        rows.push(vec![tau, g.re, g.im, g.norm()]);
    }
    let table = Table {
        comments: vec![
            format!("cavent {}", env!("CARGO_PKG_VERSION")),
            format!(
                "R={} omega={} delta1={} delta2={} deltaL={} J={} r1={}",
                p.coupling, p.omega, p.delta1, p.delta2, p.delta_l, p.j, p.r1
            ),
        ],
        columns: ["tau", "re_g", "im_g", "abs_g"].map(String::from).to_vec(),
        rows,
    };
    emit(&table, r.out.as_deref())
}

fn fig(id: &str, r: Resolved) -> Outcome {
    let dir = r.out.clone().unwrap_or_else(|| PathBuf::from("."));
    std::fs::create_dir_all(&dir).map_err(cavent_core::Error::from)?;
    for id in expand(id)? {
        let mut fp = preset(id)?;
        if let Figure::Sweep(spec) = &mut fp.figure {
            if let Some(s) = r.solver {
                spec.solver = s;
            }
            spec.dt = r.dt.or(spec.dt);
            spec.verify |= r.verify;
            if let Some(n) = r.modes {
                spec.modes.n_modes = n;
            }
            if let Some(k) = r.cutoff {
                spec.modes.cutoff = k;
            }
        }
        let table = run_figure(&fp, r.threads)?;
        let path = dir.join(format!("{id}.csv"));
        emit(&table, Some(&path))?;
        println!("{}", path.display());
    }
    Ok(())
}

fn emit(table: &Table, out: Option<&Path>) -> Outcome {
    match out {
        Some(path) => {
            let file = File::create(path).map_err(|e| format!("cannot create {}: {e}", path.display()))?;
            table.write_csv(BufWriter::new(file))?;
        }
        None => {
            let stdout = io::stdout();
            let mut lock = BufWriter::new(stdout.lock());
            table.write_csv(&mut lock)?;
            lock.flush().map_err(cavent_core::Error::from)?;
        }
    }
    Ok(())
}
