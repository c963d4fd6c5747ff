//! CSV output: per-run rows, per-grid-point summaries and optional traces.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::config::{RunConfig, Strategy};
use super::experiment::ExperimentReport;
use super::plot;
use super::run::RunResult;
use crate::dynamics::Method;
use crate::{Error, Result};

pub const RUNS_FILE: &str = "runs.csv";
pub const SUMMARY_FILE: &str = "summary.csv";
pub const TRACE_DIR: &str = "traces";

pub const RUNS_HEADER: [&str; 21] = [
    "experiment_id",
    "run_id",
    "seed",
    "method",
    "strategy",
    "consensus",
    "objective",
    "d",
    "N",
    "sigma_F",
    "nu_F",
    "nu_L",
    "epsilon",
    "alpha",
    "rho1_target",
    "p_bar",
    "iterations",
    "stalled",
    "success",
    "final_accuracy",
    "wall_time_ms",
];

pub const SUMMARY_HEADER: [&str; 23] = [
    "experiment_id",
    "grid",
    "method",
    "strategy",
    "consensus",
    "objective",
    "d",
    "N",
    "sigma_F",
    "nu_F",
    "nu_L",
    "epsilon",
    "alpha",
    "rho1_target",
    "p_bar",
    "M",
    "successes",
    "success_rate",
    "iter_mean",
    "iter_min",
    "iter_max",
    "accuracy_mean",
    "error",
];

const TRACE_HEADER: [&str; 9] = [
    "iteration",
    "t",
    "rho0",
    "rho1",
    "v0",
    "v1",
    "V",
    "mean_gap_sq",
    "accuracy",
];

/// Output switches.
#[derive(Debug, Clone, Copy, Default)]
pub struct ReportOptions {
    /// Fill the `wall_time_ms` column. Off by default so that `runs.csv` is a
    /// pure function of configuration and seeds.
    pub wall_time: bool,
    /// Render SVG plots next to the CSV files.
    pub plots: bool,
}

/// One line of `runs.csv`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRow {
    pub experiment_id: usize,
    pub run_id: usize,
    pub seed: u64,
    pub method: String,
    pub strategy: String,
    pub consensus: String,
    pub objective: String,
    pub d: usize,
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "sigma_F")]
    pub sigma_f: f64,
    #[serde(rename = "nu_F")]
    pub nu_f: f64,
    #[serde(rename = "nu_L")]
    pub nu_l: f64,
    pub epsilon: f64,
    pub alpha: f64,
    pub rho1_target: Option<f64>,
    pub p_bar: Option<f64>,
    pub iterations: usize,
    pub stalled: bool,
    pub success: bool,
    pub final_accuracy: f64,
    pub wall_time_ms: Option<f64>,
}

/// One line of `summary.csv`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub experiment_id: usize,
    pub grid: String,
    pub method: String,
    pub strategy: String,
    pub consensus: String,
    pub objective: String,
    pub d: usize,
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "sigma_F")]
    pub sigma_f: f64,
    #[serde(rename = "nu_F")]
    pub nu_f: f64,
    #[serde(rename = "nu_L")]
    pub nu_l: f64,
    pub epsilon: f64,
    pub alpha: f64,
    pub rho1_target: Option<f64>,
    pub p_bar: Option<f64>,
    #[serde(rename = "M")]
    pub m: usize,
    pub successes: usize,
    pub success_rate: f64,
    pub iter_mean: Option<f64>,
    pub iter_min: Option<usize>,
    pub iter_max: Option<usize>,
    pub accuracy_mean: Option<f64>,
    pub error: Option<String>,
}

/// Setting columns shared by both tables.
struct Setting {
    method: String,
    strategy: String,
    consensus: String,
    objective: String,
    d: usize,
    n: usize,
    sigma_f: f64,
    nu_f: f64,
    nu_l: f64,
    epsilon: f64,
    alpha: f64,
    rho1_target: Option<f64>,
    p_bar: Option<f64>,
}

impl Setting {
    fn of(cfg: &RunConfig) -> Self {
        let labeled = cfg.dynamics.method != Method::Kbo;
        let strategy = cfg.transition.strategy;
        Self {
            method: cfg.dynamics.method.as_str().into(),
            strategy: if labeled {
                strategy.as_str().into()
            } else {
                "none".into()
            },
            consensus: cfg.dynamics.consensus.as_str().into(),
            objective: cfg.experiment.objective.clone(),
            d: cfg.experiment.dimension,
            n: cfg.experiment.n,
            sigma_f: cfg.dynamics.sigma_f,
            nu_f: cfg.dynamics.nu_f,
            nu_l: cfg.dynamics.nu_l,
            epsilon: cfg.dynamics.epsilon,
            alpha: cfg.dynamics.alpha,
            rho1_target: labeled.then(|| cfg.transition.leader_mass()),
            p_bar: (labeled && strategy == Strategy::Mixed).then_some(cfg.transition.p_bar),
        }
    }
}

impl SummaryRow {
    pub fn of(report: &ExperimentReport) -> Self {
        let has_runs = !report.runs.is_empty();
        let s = Setting::of(&report.config);
        Self {
            experiment_id: report.experiment_id,
            grid: report.grid_label(),
            method: s.method,
            strategy: s.strategy,
            consensus: s.consensus,
            objective: s.objective,
            d: s.d,
            n: s.n,
            sigma_f: s.sigma_f,
            nu_f: s.nu_f,
            nu_l: s.nu_l,
            epsilon: s.epsilon,
            alpha: s.alpha,
            rho1_target: s.rho1_target,
            p_bar: s.p_bar,
            m: report.m(),
            successes: report.successes(),
            success_rate: report.success_rate(),
            iter_mean: has_runs.then(|| report.iter_mean()),
            iter_min: report.iter_min(),
            iter_max: report.iter_max(),
            accuracy_mean: has_runs.then(|| report.accuracy_mean()),
            error: report.error.clone(),
        }
    }
}

fn run_row(
    report: &ExperimentReport,
    run_id: usize,
    run: &RunResult,
    opts: &ReportOptions,
) -> RunRow {
    let tol = report.config.experiment.success_tol;
    let recomputed = run.succeeded_at(tol);
    assert_eq!(
        recomputed, run.success,
        "stored success flag disagrees with accuracy {} at tolerance {tol}",
        run.final_accuracy
    );
    let s = Setting::of(&report.config);
    RunRow {
        experiment_id: report.experiment_id,
        run_id,
        seed: run.seed,
        method: s.method,
        strategy: s.strategy,
        consensus: s.consensus,
        objective: s.objective,
        d: s.d,
        n: s.n,
        sigma_f: s.sigma_f,
        nu_f: s.nu_f,
        nu_l: s.nu_l,
        epsilon: s.epsilon,
        alpha: s.alpha,
        rho1_target: s.rho1_target,
        p_bar: s.p_bar,
        iterations: run.iterations_used,
        stalled: run.stalled,
        success: recomputed,
        final_accuracy: run.final_accuracy,
        wall_time_ms: opts.wall_time.then_some(run.wall_time.as_secs_f64() * 1e3),
    }
}

fn writer(path: &Path, header: &[&str]) -> Result<csv::Writer<fs::File>> {
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_path(path)
        .map_err(|e| Error::csv(path, e))?;
    w.write_record(header).map_err(|e| Error::csv(path, e))?;
    Ok(w)
}

/// Write `runs.csv`, `summary.csv`, per-run traces (when recorded) and,
/// optionally, plots into `out_dir`. Returns the paths written.
pub fn emit_report(
    reports: &[ExperimentReport],
    out_dir: impl AsRef<Path>,
    opts: ReportOptions,
) -> Result<Vec<PathBuf>> {
    let out_dir = out_dir.as_ref();
    fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
    let mut written = Vec::new();

    let runs_path = out_dir.join(RUNS_FILE);
    let mut w = writer(&runs_path, &RUNS_HEADER)?;
    for rep in reports {
        for (i, run) in rep.runs.iter().enumerate() {
            w.serialize(run_row(rep, i, run, &opts))
                .map_err(|e| Error::csv(&runs_path, e))?;
        }
    }
    w.flush().map_err(|e| Error::io(&runs_path, e))?;
    written.push(runs_path);

    let summary_path = out_dir.join(SUMMARY_FILE);
    let rows: Vec<SummaryRow> = reports.iter().map(SummaryRow::of).collect();
    let mut w = writer(&summary_path, &SUMMARY_HEADER)?;
    for row in &rows {
        w.serialize(row).map_err(|e| Error::csv(&summary_path, e))?;
    }
    w.flush().map_err(|e| Error::io(&summary_path, e))?;
    written.push(summary_path);

    written.extend(write_traces(reports, out_dir)?);

    if opts.plots {
        written.extend(plot::render(&rows, out_dir)?);
    }
    Ok(written)
}

fn write_traces(reports: &[ExperimentReport], out_dir: &Path) -> Result<Vec<PathBuf>> {
    let mut written = Vec::new();
    for rep in reports {
        for (i, run) in rep.runs.iter().enumerate() {
            if run.trace.is_empty() {
                continue;
            }
            let dir = out_dir.join(TRACE_DIR);
            fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
            let path = dir.join(format!("exp{:03}_run{:03}.csv", rep.experiment_id, i));
            let mut w = writer(&path, &TRACE_HEADER)?;
            let eps = rep.config.dynamics.epsilon;
            for s in &run.trace {
                let gap = s.mean_gap_sq().map(|g| g.to_string()).unwrap_or_default();
                w.write_record([
                    format!("{}", (s.t / eps).round() as u64),
                    s.t.to_string(),
                    s.rho0.to_string(),
                    s.rho1.to_string(),
                    s.v0.to_string(),
                    s.v1.to_string(),
                    s.total_variance.to_string(),
                    gap,
                    s.accuracy.to_string(),
                ])
                .map_err(|e| Error::csv(&path, e))?;
            }
            w.flush().map_err(|e| Error::io(&path, e))?;
            written.push(path);
        }
    }
    Ok(written)
}

/// Read back a `summary.csv`.
pub fn read_summary(path: impl AsRef<Path>) -> Result<Vec<SummaryRow>> {
    let path = path.as_ref();
    let mut r = csv::Reader::from_path(path).map_err(|e| Error::csv(path, e))?;
    r.deserialize()
        .collect::<std::result::Result<Vec<SummaryRow>, _>>()
        .map_err(|e| Error::csv(path, e))
}
