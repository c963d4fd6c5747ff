//! Experiment harness: configuration, single runs, repeated experiments,
//! parameter sweeps and their CSV/SVG output.

mod config;
mod experiment;
mod plot;
mod report;
mod run;

pub use config::{
    Axis, AxisValue, ConfigFile, ExperimentConfig, InitKind, RunConfig, Strategy, TransitionConfig,
};
pub use experiment::{
    grid, run_experiment, run_experiment_with, sweep, sweep_with, ExperimentReport, GridPoint,
};
pub use plot::render as render_plots;
pub use report::{
    emit_report, read_summary, ReportOptions, RunRow, SummaryRow, RUNS_FILE, RUNS_HEADER,
    SUMMARY_FILE, SUMMARY_HEADER, TRACE_DIR,
};
pub use run::{initial_swarm, is_success, run_single, run_single_with, RunResult};
