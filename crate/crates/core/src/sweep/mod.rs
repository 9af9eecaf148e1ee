//! Parameter sweeps, figure presets and CSV output.

mod presets;
mod run;
mod spec;
mod table;

pub use presets::{expand, optimum_table, preset, run_figure, Figure, FigurePreset, FIGURE_IDS};
pub use run::{run_sweep, STATIONARY_TOL, VALUE_COLUMNS, VERIFY_STRIDE, VERIFY_TOL, VERIFY_TOL_MODES};
pub use spec::{Axis, ModeSettings, Param, Scenario, Solver, SweepSpec, Times};
pub use table::Table;
