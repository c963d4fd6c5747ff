//! A single optimization run.

use std::time::{Duration, Instant};

use super::config::{InitKind, RunConfig};
use crate::consensus;
use crate::diagnostics::{self, sup_distance, MomentSnapshot};
use crate::dynamics;
use crate::transitions::apply_transition;
use crate::{Label, Objective, Registry, Result, RngStream, Swarm};

/// Outcome of one run.
#[derive(Debug, Clone)]
pub struct RunResult {
    pub seed: u64,
    /// Completed loop iterations, stall tail included.
    pub iterations_used: usize,
    /// Terminated by the stall criterion.
    pub stalled: bool,
    /// Aborted because the swarm left the guard box.
    pub diverged: bool,
    pub final_xhat: Vec<f64>,
    pub final_accuracy: f64,
    pub success: bool,
    pub trace: Vec<MomentSnapshot>,
    pub wall_time: Duration,
}

impl RunResult {
    /// Success per the stored tolerance: `accuracy <= tol`, and the run did
    /// not diverge.
    pub fn succeeded_at(&self, success_tol: f64) -> bool {
        is_success(self.final_accuracy, success_tol) && !self.diverged
    }
}

/// The success criterion `‖x̂ - x̄‖∞ <= tol`.
pub fn is_success(accuracy: f64, tol: f64) -> bool {
    accuracy <= tol
}

/// Run with the built-in objectives and the seed from the config.
pub fn run_single(cfg: &RunConfig) -> Result<RunResult> {
    run_single_with(cfg, &Registry::builtin())
}

/// Run with a custom objective registry.
pub fn run_single_with(cfg: &RunConfig, registry: &Registry) -> Result<RunResult> {
    let objective = cfg.validate(registry)?;
    Ok(execute(cfg, &objective, cfg.experiment.seed))
}

/// Draw the initial swarm. Every agent starts as a follower.
pub fn initial_swarm(cfg: &RunConfig, objective: &Objective, rng: &mut RngStream) -> Swarm {
    let n = cfg.experiment.n;
    let d = objective.dimension();
    let (lo, hi) = objective.init_region();
    let mut positions = Vec::with_capacity(n * d);
    for _ in 0..n {
        for j in 0..d {
            let width = hi[j] - lo[j];
            let x = match cfg.experiment.init {
                InitKind::UniformBox => lo[j] + width * rng.uniform(),
                InitKind::GaussianBox => 0.5 * (lo[j] + hi[j]) + 0.25 * width * rng.normal(),
            };
            positions.push(x);
        }
    }
    Swarm::from_flat(d, positions, vec![Label::Follower; n])
        .expect("n >= 2 and d >= 1 are validated")
}

/// Execute a validated configuration with the given seed.
pub(crate) fn execute(cfg: &RunConfig, objective: &Objective, seed: u64) -> RunResult {
    let started = Instant::now();
    let dyn_cfg = &cfg.dynamics;
    let exp = &cfg.experiment;
    let eps = dyn_cfg.epsilon;
    let policy = cfg.transition.policy(eps);

    let mut rng = RngStream::new(seed);
    let mut swarm = initial_swarm(cfg, objective, &mut rng);
    let mut energies = Vec::with_capacity(exp.n);
    swarm.energies_into(objective, &mut energies);
    let estimate = |swarm: &Swarm, energies: &[f64]| {
        consensus::estimate(swarm, energies, dyn_cfg.alpha, dyn_cfg.consensus)
            .expect("alpha validated and swarm nonempty")
    };
    let mut xhat = estimate(&swarm, &energies);

    let mut trace = Vec::new();
    let record = |trace: &mut Vec<MomentSnapshot>, swarm: &Swarm, xhat: &[f64], n: usize| {
        trace.push(diagnostics::snapshot_at(
            swarm,
            xhat.to_vec(),
            objective.global_min_location(),
            n as f64 * eps,
        ));
    };
    if exp.trace_every > 0 {
        record(&mut trace, &swarm, &xhat, 0);
    }

    let mut n = 0;
    let mut stall = 0;
    let mut diverged = false;
    let mut warned_leaderless = false;
    while n < exp.max_iter && stall < exp.j_stall {
        let report = dynamics::advance(&mut swarm, &xhat, dyn_cfg, &mut rng);
        if report.leaderless && !warned_leaderless {
            log::debug!("seed {seed}: no leaders at iteration {n}; followers only diffuse");
            warned_leaderless = true;
        }
        if !(swarm.max_abs_coordinate() <= exp.guard) {
            log::warn!("seed {seed}: swarm left the guard box at iteration {n}; run aborted");
            diverged = true;
            n += 1;
            break;
        }
        swarm.energies_into(objective, &mut energies);
        if dyn_cfg.method.uses_labels() {
            apply_transition(&mut swarm, &energies, &policy, eps, &mut rng);
        }
        let next = estimate(&swarm, &energies);
        if sup_distance(&next, &xhat) <= exp.delta_stall {
            stall += 1;
        } else if exp.stall_reset {
            stall = 0;
        }
        xhat = next;
        n += 1;
        if exp.trace_every > 0 && n % exp.trace_every == 0 {
            record(&mut trace, &swarm, &xhat, n);
        }
    }

    let final_accuracy = sup_distance(&xhat, objective.global_min_location());
    RunResult {
        seed,
        iterations_used: n,
        stalled: !diverged && stall >= exp.j_stall,
        diverged,
        success: !diverged && is_success(final_accuracy, exp.success_tol),
        final_xhat: xhat,
        final_accuracy,
        trace,
        wall_time: started.elapsed(),
    }
}
