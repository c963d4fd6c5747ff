//! One discrete time step of each particle method.
//!
//! All methods share the same discretization: drifts are scaled by `ν ε` and
//! noise by `σ √ε`, where `ε` is the time step. The consensus point `x̂ⁿ` is
//! computed once at the start of the step and passed in.

use serde::{Deserialize, Serialize};

use crate::consensus::{self, ConsensusSelector};
use crate::{Error, Objective, Result, RngStream, Swarm};

/// Particle method driven by the harness.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    /// Leader/follower kinetic dynamics with label transitions.
    #[default]
    Gkbo,
    /// Single-population kinetic dynamics; labels are ignored.
    Kbo,
    /// Genetic algorithm: children jump onto parents, then additive mutation.
    Ga,
    /// Genetic algorithm with mutation scaled by the diffusion matrix.
    GaModified,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Gkbo => "gkbo",
            Method::Kbo => "kbo",
            Method::Ga => "ga",
            Method::GaModified => "ga_modified",
        }
    }

    /// Whether label transitions take part in the method.
    pub fn uses_labels(self) -> bool {
        self != Method::Kbo
    }
}

/// Diffusion matrix `D(x)` multiplying the Gaussian noise.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DiffusionKind {
    /// `D = |x̂ - x| Id`.
    Isotropic,
    /// `D = diag(x̂ - x)`.
    #[default]
    Anisotropic,
}

impl DiffusionKind {
    pub fn as_str(self) -> &'static str {
        match self {
            DiffusionKind::Isotropic => "isotropic",
            DiffusionKind::Anisotropic => "anisotropic",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DynamicsConfig {
    pub method: Method,
    pub nu_f: f64,
    pub nu_l: f64,
    pub sigma_f: f64,
    pub alpha: f64,
    pub epsilon: f64,
    pub diffusion: DiffusionKind,
    pub consensus: ConsensusSelector,
    /// Probability that an agent takes part in an interaction during a step.
    pub interaction_prob: f64,
}

impl Default for DynamicsConfig {
    fn default() -> Self {
        Self {
            method: Method::Gkbo,
            nu_f: 1.0,
            nu_l: 10.0,
            sigma_f: 4.0,
            alpha: 5e6,
            epsilon: 0.1,
            diffusion: DiffusionKind::Anisotropic,
            consensus: ConsensusSelector::All,
            interaction_prob: 1.0,
        }
    }
}

impl DynamicsConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::config(format!(
                    "{name} must be positive and finite, got {v}"
                )))
            }
        };
        positive("nu_f", self.nu_f)?;
        positive("nu_l", self.nu_l)?;
        positive("alpha", self.alpha)?;
        if !(self.sigma_f >= 0.0 && self.sigma_f.is_finite()) {
            return Err(Error::config(format!(
                "sigma_f must be nonnegative, got {}",
                self.sigma_f
            )));
        }
        if !(self.epsilon > 0.0 && self.epsilon <= 1.0) {
            return Err(Error::config(format!(
                "epsilon must lie in (0, 1], got {}",
                self.epsilon
            )));
        }
        if !(self.interaction_prob > 0.0 && self.interaction_prob <= 1.0) {
            return Err(Error::config(format!(
                "interaction_prob must lie in (0, 1], got {}",
                self.interaction_prob
            )));
        }
        if self.method == Method::Gkbo && self.nu_l * self.epsilon > 1.0 {
            log::warn!(
                "nu_l * epsilon = {} > 1: leaders overshoot the consensus point",
                self.nu_l * self.epsilon
            );
        }
        Ok(())
    }
}

/// What happened during a step, for the caller's bookkeeping.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct StepReport {
    /// No leader/parent was available, so followers only diffused.
    pub leaderless: bool,
}

/// `D(x) ξ` for the given diffusion kind, evaluated at `(x̂, x)`.
pub fn diffusion_action(
    kind: DiffusionKind,
    xhat: &[f64],
    x: &[f64],
    xi: &[f64],
) -> Result<Vec<f64>> {
    let d = xhat.len();
    for v in [x, xi] {
        if v.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                got: v.len(),
            });
        }
    }
    let mut out = vec![0.0; d];
    apply_diffusion(kind, xhat, x, xi, &mut out);
    Ok(out)
}

#[inline]
fn apply_diffusion(kind: DiffusionKind, xhat: &[f64], x: &[f64], xi: &[f64], out: &mut [f64]) {
    match kind {
        DiffusionKind::Isotropic => {
            let norm = xhat
                .iter()
                .zip(x)
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt();
            for (o, z) in out.iter_mut().zip(xi) {
                *o = norm * z;
            }
        }
        DiffusionKind::Anisotropic => {
            for ((o, z), (a, b)) in out.iter_mut().zip(xi).zip(xhat.iter().zip(x)) {
                *o = (a - b) * z;
            }
        }
    }
}

/// Advance the swarm by one step of `cfg.method` around the step-start
/// consensus point `xhat`. Labels and population size are left unchanged.
pub fn advance(
    swarm: &mut Swarm,
    xhat: &[f64],
    cfg: &DynamicsConfig,
    rng: &mut RngStream,
) -> StepReport {
    debug_assert_eq!(xhat.len(), swarm.dim());
    match cfg.method {
        Method::Gkbo => gkbo(swarm, xhat, cfg, rng),
        Method::Kbo => kbo(swarm, xhat, cfg, rng),
        Method::Ga => ga(swarm, xhat, cfg, rng, false),
        Method::GaModified => ga(swarm, xhat, cfg, rng, true),
    }
}

/// Scratch buffers reused across particles.
struct Scratch {
    xi: Vec<f64>,
    noise: Vec<f64>,
    target: Vec<f64>,
}

impl Scratch {
    fn new(d: usize) -> Self {
        Self {
            xi: vec![0.0; d],
            noise: vec![0.0; d],
            target: vec![0.0; d],
        }
    }
}

fn gkbo(swarm: &mut Swarm, xhat: &[f64], cfg: &DynamicsConfig, rng: &mut RngStream) -> StepReport {
    let relax_l = cfg.nu_l * cfg.epsilon;
    let relax_f = cfg.nu_f * cfg.epsilon;
    let noise_scale = cfg.sigma_f * cfg.epsilon.sqrt();
    let partial = cfg.interaction_prob < 1.0;

    let leaders = swarm.leader_indices();
    let followers = swarm.follower_indices();

    // Leaders first: followers must see the updated leader positions.
    for &k in &leaders {
        if partial && !rng.bernoulli(cfg.interaction_prob) {
            continue;
        }
        for (y, c) in swarm.position_mut(k).iter_mut().zip(xhat) {
            *y += relax_l * (c - *y);
        }
    }

    let mut s = Scratch::new(swarm.dim());
    for &i in &followers {
        if partial && !rng.bernoulli(cfg.interaction_prob) {
            continue;
        }
        let has_leader = !leaders.is_empty();
        if has_leader {
            let k = leaders[rng.index(leaders.len())];
            s.target.copy_from_slice(swarm.position(k));
        }
        rng.fill_normal(&mut s.xi);
        let x = swarm.position_mut(i);
        apply_diffusion(cfg.diffusion, xhat, x, &s.xi, &mut s.noise);
        for j in 0..x.len() {
            let drift = if has_leader {
                relax_f * (s.target[j] - x[j])
            } else {
                0.0
            };
            x[j] += drift + noise_scale * s.noise[j];
        }
    }

    StepReport {
        leaderless: leaders.is_empty() && !followers.is_empty(),
    }
}

fn kbo(swarm: &mut Swarm, xhat: &[f64], cfg: &DynamicsConfig, rng: &mut RngStream) -> StepReport {
    let relax = cfg.nu_f * cfg.epsilon;
    let noise_scale = cfg.sigma_f * cfg.epsilon.sqrt();
    let partial = cfg.interaction_prob < 1.0;
    let mut s = Scratch::new(swarm.dim());
    for i in 0..swarm.len() {
        if partial && !rng.bernoulli(cfg.interaction_prob) {
            continue;
        }
        rng.fill_normal(&mut s.xi);
        let x = swarm.position_mut(i);
        apply_diffusion(cfg.diffusion, xhat, x, &s.xi, &mut s.noise);
        for j in 0..x.len() {
            x[j] += relax * (xhat[j] - x[j]) + noise_scale * s.noise[j];
        }
    }
    StepReport::default()
}

fn ga(
    swarm: &mut Swarm,
    xhat: &[f64],
    cfg: &DynamicsConfig,
    rng: &mut RngStream,
    modified: bool,
) -> StepReport {
    let jump_prob = (cfg.nu_f * cfg.epsilon).min(1.0);
    let noise_scale = cfg.sigma_f * cfg.epsilon.sqrt();
    let partial = cfg.interaction_prob < 1.0;
    let parents = swarm.leader_indices();
    let children = swarm.follower_indices();

    let mut s = Scratch::new(swarm.dim());
    for &i in &children {
        if partial && !rng.bernoulli(cfg.interaction_prob) {
            continue;
        }
        if !parents.is_empty() && rng.bernoulli(jump_prob) {
            let k = parents[rng.index(parents.len())];
            s.target.copy_from_slice(swarm.position(k));
            swarm.position_mut(i).copy_from_slice(&s.target);
        }
        rng.fill_normal(&mut s.xi);
        let x = swarm.position_mut(i);
        if modified {
            apply_diffusion(cfg.diffusion, xhat, x, &s.xi, &mut s.noise);
        } else {
            s.noise.copy_from_slice(&s.xi);
        }
        for (v, n) in x.iter_mut().zip(&s.noise) {
            *v += noise_scale * n;
        }
    }
    StepReport {
        leaderless: parents.is_empty() && !children.is_empty(),
    }
}

fn checked_step(
    swarm: &Swarm,
    objective: &Objective,
    cfg: &DynamicsConfig,
    rng: &mut RngStream,
    expected: &[Method],
) -> Result<Swarm> {
    if !expected.contains(&cfg.method) {
        return Err(Error::config(format!(
            "step for {:?} called with method {}",
            expected,
            cfg.method.as_str()
        )));
    }
    cfg.validate()?;
    let energies = swarm.energies(objective)?;
    let xhat = consensus::estimate(swarm, &energies, cfg.alpha, cfg.consensus)?;
    let mut next = swarm.clone();
    advance(&mut next, &xhat, cfg, rng);
    Ok(next)
}

/// One GKBO step: leaders relax toward `x̂`, then each follower relaxes toward
/// a uniformly drawn (already updated) leader and diffuses around `x̂`.
pub fn gkbo_step(
    swarm: &Swarm,
    objective: &Objective,
    cfg: &DynamicsConfig,
    rng: &mut RngStream,
) -> Result<Swarm> {
    checked_step(swarm, objective, cfg, rng, &[Method::Gkbo])
}

/// One KBO step: every particle relaxes toward `x̂` and diffuses.
pub fn kbo_step(
    swarm: &Swarm,
    objective: &Objective,
    cfg: &DynamicsConfig,
    rng: &mut RngStream,
) -> Result<Swarm> {
    checked_step(swarm, objective, cfg, rng, &[Method::Kbo])
}

/// One GA step. Parents (leaders) stay put; each child jumps onto a random
/// parent with probability `min(1, ν_F ε)` and is then mutated.
pub fn ga_step(
    swarm: &Swarm,
    objective: &Objective,
    cfg: &DynamicsConfig,
    rng: &mut RngStream,
    modified: bool,
) -> Result<Swarm> {
    let mut cfg = cfg.clone();
    cfg.method = if modified {
        Method::GaModified
    } else {
        Method::Ga
    };
    checked_step(swarm, objective, &cfg, rng, &[cfg.method])
}
