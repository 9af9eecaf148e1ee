use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI};

use super::run::run_sweep;
use super::spec::{Axis, Param, Scenario, SweepSpec, Times};
use super::table::Table;
use crate::entanglement::optimize_stationary;
use crate::error::{Error, Result};
use crate::model::{InitialState, SystemParams};

/// Every individual figure identifier, in presentation order.
pub const FIGURE_IDS: [&str; 17] = [
    "fig2a", "fig2b", "fig3", "fig4a", "fig4b", "fig5a", "fig5b", "fig6a", "fig6b", "fig7a", "fig7b", "fig8a",
    "fig8b", "fig9a", "fig9b", "fig10a", "fig10b",
];

#[derive(Debug, Clone, PartialEq)]
pub enum Figure {
    Sweep(SweepSpec),
    /// Maximum over theta of the stationary entanglement, for `phi = 0` and
    /// `phi = pi`, at each `r1`.
    StationaryOptimum { r1: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct FigurePreset {
    pub id: &'static str,
    pub description: &'static str,
    pub figure: Figure,
}

/// Individual identifiers named by `id`: itself, or every panel for a
/// group such as `fig4`, or every figure for `all`.
pub fn expand(id: &str) -> Result<Vec<&'static str>> {
    if id == "all" {
        return Ok(FIGURE_IDS.to_vec());
    }
    if let Some(&exact) = FIGURE_IDS.iter().find(|&&f| f == id) {
        return Ok(vec![exact]);
    }
    let panels: Vec<&'static str> = FIGURE_IDS
        .iter()
        .copied()
        .filter(|f| f.strip_prefix(id).is_some_and(|rest| rest.len() == 1 && rest.as_bytes()[0].is_ascii_lowercase()))
        .collect();
    if panels.is_empty() {
        Err(Error::UnknownPreset(id.to_string()))
    } else {
        Ok(panels)
    }
}

fn entangled() -> InitialState {
    InitialState { theta: FRAC_PI_2, phi: 0.0 }
}

fn separable() -> InitialState {
    InitialState { theta: 0.0, phi: 0.0 }
}

fn weak() -> SystemParams {
    SystemParams { coupling: 0.1, r1: FRAC_1_SQRT_2, ..Default::default() }
}

fn strong() -> SystemParams {
    SystemParams { coupling: 10.0, r1: FRAC_1_SQRT_2, ..Default::default() }
}

fn axis(param: Param, min: f64, max: f64, count: usize) -> Axis {
    Axis::range(param, min, max, count).expect("preset axis")
}

fn list(param: Param, values: &[f64]) -> Axis {
    Axis::list(param, values.to_vec()).expect("preset axis")
}

fn sweep(scenario: Scenario, params: SystemParams, init: InitialState, axes: Vec<Axis>, times: Option<Times>) -> Figure {
    let mut s = SweepSpec::new(scenario, params, init);
    s.axes = axes;
    if let Some(t) = times {
        s.times = t;
    }
    Figure::Sweep(s)
}

pub fn preset(id: &str) -> Result<FigurePreset> {
    let omegas = [0.0, 1.0, 5.0, 10.0];
    let (id, description, figure) = match id {
        "fig2a" | "fig2b" => {
            let phi = if id == "fig2a" { PI } else { 0.0 };
            let fig = sweep(
                Scenario::Stationary,
                weak(),
                InitialState { theta: 0.0, phi },
                vec![axis(Param::R1, 0.01, 0.99, 99), axis(Param::Theta, 0.0, PI, 101)],
                None,
            );
            let d = if phi == 0.0 {
                "stationary entanglement and concurrence over (r1, theta), phi = 0"
            } else {
                "stationary entanglement and concurrence over (r1, theta), phi = pi"
            };
            (if phi == 0.0 { "fig2b" } else { "fig2a" }, d, fig)
        }
        "fig3" => (
            "fig3",
            "maximum over theta of the stationary entanglement versus r1, phi = 0 and pi",
            Figure::StationaryOptimum { r1: axis(Param::R1, 0.01, 0.99, 197).values },
        ),
        "fig4a" => ("fig4a", "entangled start, weak coupling, Omega in {0,1,5,10}", sweep(Scenario::Similar, weak(), entangled(), vec![list(Param::Omega, &omegas)], None)),
        "fig4b" => ("fig4b", "entangled start, strong coupling, Omega in {0,1,5,10}", sweep(Scenario::Similar, strong(), entangled(), vec![list(Param::Omega, &omegas)], None)),
        "fig5a" => ("fig5a", "separable start, weak coupling, Omega in {0,1,5,10}", sweep(Scenario::Similar, weak(), separable(), vec![list(Param::Omega, &omegas)], None)),
        "fig5b" => ("fig5b", "separable start, strong coupling, Omega in {0,1,5,10}", sweep(Scenario::Similar, strong(), separable(), vec![list(Param::Omega, &omegas)], None)),
        "fig6a" | "fig6b" | "fig7a" | "fig7b" => {
            let (params, tau, delta_l, d) = match id {
                "fig6a" => (weak(), 400.0, 0.0, "entanglement at tau = 400 over (Omega, Delta), weak coupling"),
                "fig6b" => (strong(), 4.0, 0.0, "entanglement at tau = 4 over (Omega, Delta), strong coupling"),
                "fig7a" => (weak(), 400.0, 1.5, "as fig6a with Delta_L = 1.5"),
                _ => (weak(), 400.0, 3.0, "as fig6a with Delta_L = 3"),
            };
            let p = SystemParams { delta_l, ..params };
            let fig = sweep(
                Scenario::Similar,
                p,
                entangled(),
                vec![axis(Param::Omega, 0.0, 10.0, 51), axis(Param::Delta, 0.0, 10.0, 51)],
                Some(Times::At(tau)),
            );
            (FIGURE_IDS.iter().copied().find(|f| *f == id).expect("listed"), d, fig)
        }
        "fig8a" => (
            "fig8a",
            "entangled start with Ising coupling, weak coupling, Omega = 1, J in {0,1,5}",
            sweep(Scenario::SimilarJ, SystemParams { omega: 1.0, ..weak() }, entangled(), vec![list(Param::J, &[0.0, 1.0, 5.0])], None),
        ),
        "fig8b" => (
            "fig8b",
            "entangled start with Ising coupling, strong coupling, Omega = 1, J in {0,1,5}",
            sweep(Scenario::SimilarJ, SystemParams { omega: 1.0, ..strong() }, entangled(), vec![list(Param::J, &[0.0, 1.0, 5.0])], None),
        ),
        "fig9a" | "fig9b" | "fig10a" | "fig10b" => {
            let (params, tau, d1, d2, span, d) = match id {
                "fig9a" => (weak(), 400.0, 0.0, 1.0, 10.0, "dissimilar qubits at tau = 400 over (Omega, Delta_L), Delta = (0, 1)"),
                "fig9b" => (weak(), 400.0, -1.0, 1.0, 10.0, "dissimilar qubits at tau = 400 over (Omega, Delta_L), Delta = (-1, 1)"),
                "fig10a" => (strong(), 4.0, 0.0, 10.0, 20.0, "dissimilar qubits at tau = 4 over (Omega, Delta_L), Delta = (0, 10)"),
                _ => (strong(), 4.0, -10.0, 10.0, 20.0, "dissimilar qubits at tau = 4 over (Omega, Delta_L), Delta = (-10, 10)"),
            };
            let p = SystemParams { delta1: d1, delta2: d2, ..params };
            let fig = sweep(
                Scenario::Dissimilar,
                p,
                entangled(),
                vec![axis(Param::Omega, 0.0, span, 51), axis(Param::DeltaL, -span, span, 81)],
                Some(Times::At(tau)),
            );
            (FIGURE_IDS.iter().copied().find(|f| *f == id).expect("listed"), d, fig)
        }
        _ => return Err(Error::UnknownPreset(id.to_string())),
    };
    Ok(FigurePreset { id, description, figure })
}

/// Runs one preset to a table.
pub fn run_figure(preset: &FigurePreset, threads: Option<usize>) -> Result<Table> {
    let mut table = match &preset.figure {
        Figure::Sweep(spec) => run_sweep(spec, threads)?,
        Figure::StationaryOptimum { r1 } => optimum_table(r1),
    };
    table.comments.insert(1, format!("preset {}: {}", preset.id, preset.description));
    Ok(table)
}

/// Columns `r1, theta_star_phi0, e_max_phi0, theta_star_phipi, e_max_phipi`.
pub fn optimum_table(r1: &[f64]) -> Table {
    let rows = r1
        .iter()
        .map(|&r| {
            let zero = optimize_stationary(r, 0.0);
            let pi = optimize_stationary(r, PI);
            vec![r, zero.theta, zero.entanglement, pi.theta, pi.entanglement]
        })
        .collect();
    Table {
        comments: vec![format!("cavent {}", env!("CARGO_PKG_VERSION")), "scenario=stationary solver=analytic".into()],
        columns: ["r1", "theta_star_phi0", "e_max_phi0", "theta_star_phipi", "e_max_phipi"]
            .iter()
            .map(|s| s.to_string())
            .collect(),
        rows,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_id_resolves_and_validates() {
        for id in FIGURE_IDS {
            let p = preset(id).unwrap();
            assert_eq!(p.id, id);
            if let Figure::Sweep(s) = &p.figure {
                s.validate().unwrap();
            }
        }
        assert!(matches!(preset("fig11"), Err(Error::UnknownPreset(_))));
    }

    #[test]
    fn groups_expand() {
        assert_eq!(expand("fig4").unwrap(), vec!["fig4a", "fig4b"]);
        assert_eq!(expand("fig1").unwrap_err().to_string(), "unknown figure preset `fig1`");
        assert_eq!(expand("fig10").unwrap(), vec!["fig10a", "fig10b"]);
        assert_eq!(expand("fig3").unwrap(), vec!["fig3"]);
        assert_eq!(expand("all").unwrap().len(), 17);
    }

    #[test]
    fn fig5b_matches_caption_parameters() {
        let Figure::Sweep(s) = preset("fig5b").unwrap().figure else { panic!() };
        assert_eq!(s.params.coupling, 10.0);
        assert_eq!(s.params.r1, FRAC_1_SQRT_2);
        assert_eq!((s.params.delta1, s.params.delta_l, s.init.theta), (0.0, 0.0, 0.0));
        assert_eq!(s.axes[0].values, vec![0.0, 1.0, 5.0, 10.0]);
    }

    #[test]
    fn fig3_peaks() {
        let t = run_figure(&preset("fig3").unwrap(), None).unwrap();
        let pi = t.column("e_max_phipi").unwrap();
        let zero = t.column("e_max_phi0").unwrap();
        assert!((pi.iter().cloned().fold(0.0, f64::max) - 1.0).abs() < 1e-3);
        assert!((zero.iter().cloned().fold(0.0, f64::max) - 27.0 / 64.0).abs() < 1e-9);
    }
}
