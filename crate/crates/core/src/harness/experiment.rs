//! Repeated runs and parameter sweeps.

use rayon::prelude::*;

use super::config::{Axis, AxisValue, RunConfig};
use super::run::{execute, RunResult};
use crate::rng::derive_seed;
use crate::{Error, Registry, Result};

/// Aggregate of `M` repetitions at one parameter setting.
#[derive(Debug, Clone)]
pub struct ExperimentReport {
    pub experiment_id: usize,
    /// Swept parameters of this grid point, in axis order.
    pub grid_point: GridPoint,
    pub config: RunConfig,
    pub runs: Vec<RunResult>,
    /// Set when the grid point could not be run (invalid configuration).
    pub error: Option<String>,
}

impl ExperimentReport {
    pub fn m(&self) -> usize {
        self.runs.len()
    }

    pub fn successes(&self) -> usize {
        self.runs.iter().filter(|r| r.success).count()
    }

    /// Fraction of successful runs; 0 for a grid point without runs.
    pub fn success_rate(&self) -> f64 {
        if self.runs.is_empty() {
            0.0
        } else {
            self.successes() as f64 / self.runs.len() as f64
        }
    }

    pub fn iter_mean(&self) -> f64 {
        if self.runs.is_empty() {
            return f64::NAN;
        }
        self.runs
            .iter()
            .map(|r| r.iterations_used as f64)
            .sum::<f64>()
            / self.runs.len() as f64
    }

    pub fn iter_min(&self) -> Option<usize> {
        self.runs.iter().map(|r| r.iterations_used).min()
    }

    pub fn iter_max(&self) -> Option<usize> {
        self.runs.iter().map(|r| r.iterations_used).max()
    }

    /// Mean final accuracy over the runs.
    pub fn accuracy_mean(&self) -> f64 {
        if self.runs.is_empty() {
            return f64::NAN;
        }
        self.runs.iter().map(|r| r.final_accuracy).sum::<f64>() / self.runs.len() as f64
    }

    /// Human-readable label of the grid point, e.g. `sigma_f=4 p_bar=0.5`.
    pub fn grid_label(&self) -> String {
        self.grid_point
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// `m` independent runs of `cfg` with seeds `base_seed + 0 .. base_seed + m - 1`.
/// Runs execute on the current rayon pool; results are collected in seed order.
pub fn run_experiment(cfg: &RunConfig, m: usize, base_seed: u64) -> Result<ExperimentReport> {
    run_experiment_with(cfg, m, base_seed, &Registry::builtin())
}

pub fn run_experiment_with(
    cfg: &RunConfig,
    m: usize,
    base_seed: u64,
    registry: &Registry,
) -> Result<ExperimentReport> {
    if m < 1 {
        return Err(Error::config("an experiment needs at least one repetition"));
    }
    let objective = cfg.validate(registry)?;
    let runs = (0..m as u64)
        .into_par_iter()
        .map(|r| execute(cfg, &objective, derive_seed(base_seed, 0, r)))
        .collect();
    Ok(ExperimentReport {
        experiment_id: 0,
        grid_point: Vec::new(),
        config: cfg.clone(),
        runs,
        error: None,
    })
}

/// One grid point: the axis assignments that produced it.
pub type GridPoint = Vec<(String, AxisValue)>;

/// Cartesian product of the axes, first axis varying slowest.
pub fn grid(template: &RunConfig, axes: &[Axis]) -> Result<Vec<(GridPoint, RunConfig)>> {
    let mut points = vec![(Vec::new(), template.clone())];
    for axis in axes {
        if axis.values.is_empty() {
            return Err(Error::config(format!(
                "sweep axis `{}` has no values",
                axis.key
            )));
        }
        let mut next = Vec::with_capacity(points.len() * axis.values.len());
        for (labels, cfg) in &points {
            for value in &axis.values {
                let mut cfg: RunConfig = cfg.clone();
                cfg.set(&axis.key, value)?;
                let mut labels = labels.clone();
                labels.push((axis.key.clone(), value.clone()));
                next.push((labels, cfg));
            }
        }
        points = next;
    }
    Ok(points)
}

/// One report per grid point. Grid point `g` run `r` uses seed
/// `derive_seed(base_seed, g, r)`. Invalid grid points are reported with an
/// error and no runs; the sweep continues.
pub fn sweep(
    template: &RunConfig,
    axes: &[Axis],
    m: usize,
    base_seed: u64,
) -> Result<Vec<ExperimentReport>> {
    sweep_with(template, axes, m, base_seed, &Registry::builtin())
}

pub fn sweep_with(
    template: &RunConfig,
    axes: &[Axis],
    m: usize,
    base_seed: u64,
    registry: &Registry,
) -> Result<Vec<ExperimentReport>> {
    if m < 1 {
        return Err(Error::config("a sweep needs at least one repetition"));
    }
    let points = grid(template, axes)?;
    let objectives: Vec<_> = points
        .iter()
        .map(|(_, cfg)| cfg.validate(registry))
        .collect();

    let jobs: Vec<(usize, u64)> = objectives
        .iter()
        .enumerate()
        .filter(|(_, o)| o.is_ok())
        .flat_map(|(g, _)| (0..m as u64).map(move |r| (g, r)))
        .collect();
    let mut results: Vec<Option<RunResult>> = jobs
        .par_iter()
        .map(|&(g, r)| {
            let objective = objectives[g].as_ref().expect("filtered to valid points");
            Some(execute(
                &points[g].1,
                objective,
                derive_seed(base_seed, g as u64, r),
            ))
        })
        .collect();

    let mut cursor = 0;
    let mut reports = Vec::with_capacity(points.len());
    for (g, ((grid_point, config), objective)) in points.into_iter().zip(objectives).enumerate() {
        let (runs, error) = match objective {
            Ok(_) => {
                let runs = results[cursor..cursor + m]
                    .iter_mut()
                    .map(|r| r.take().expect("each run is consumed once"))
                    .collect();
                cursor += m;
                (runs, None)
            }
            Err(e) => {
                log::warn!("grid point {g} skipped: {e}");
                (Vec::new(), Some(e.to_string()))
            }
        };
        reports.push(ExperimentReport {
            experiment_id: g,
            grid_point,
            config,
            runs,
            error,
        });
    }
    Ok(reports)
}
