//! Run configuration and its TOML file format.
//!
//! ```toml
//! [dynamics]
//! method = "gkbo"          # gkbo | kbo | ga | ga_modified
//! sigma_f = 4.0
//!
//! [transition]
//! strategy = "random"      # random | weighted | mixed
//! pi_fl = 0.2
//! pi_lf = 0.2
//!
//! [experiment]
//! objective = "rastrigin"
//! dimension = 20
//! repetitions = 20
//!
//! [sweep]                  # only used by `gkbo sweep`
//! sigma_f = [4, 5]
//! p_bar = [0, 0.25, 0.5, 0.75, 1]
//! ```
//!
//! Every key is optional and defaults to the reference setting. Unknown keys
//! are rejected.

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::consensus::ConsensusSelector;
use crate::dynamics::{DiffusionKind, DynamicsConfig};
use crate::transitions::{stationary_masses, TransitionPolicy};
use crate::{Error, Objective, Registry, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    #[default]
    Random,
    Weighted,
    Mixed,
}

impl Strategy {
    pub fn as_str(self) -> &'static str {
        match self {
            Strategy::Random => "random",
            Strategy::Weighted => "weighted",
            Strategy::Mixed => "mixed",
        }
    }
}

/// `[transition]` section.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TransitionConfig {
    pub strategy: Strategy,
    pub pi_fl: f64,
    pub pi_lf: f64,
    pub rho1_target: f64,
    pub p_bar: f64,
    /// Weighted strategy: flip toward the ranked labeling with probability `ε`.
    pub weighted_damped: bool,
    /// Mixed strategy: redraw every random leader slot each step instead of
    /// releasing random leaders at rate `π_LF`.
    pub mixed_resample: bool,
}

impl Default for TransitionConfig {
    fn default() -> Self {
        Self {
            strategy: Strategy::Random,
            pi_fl: 0.2,
            pi_lf: 0.2,
            rho1_target: 0.5,
            p_bar: 0.5,
            weighted_damped: false,
            mixed_resample: false,
        }
    }
}

impl TransitionConfig {
    /// Transition policy for time step `epsilon`.
    pub fn policy(&self, epsilon: f64) -> TransitionPolicy {
        match self.strategy {
            Strategy::Random => TransitionPolicy::Random {
                pi_fl: self.pi_fl,
                pi_lf: self.pi_lf,
            },
            Strategy::Weighted => TransitionPolicy::Weighted {
                rho1_target: self.rho1_target,
                damped: self.weighted_damped,
            },
            Strategy::Mixed => TransitionPolicy::Mixed {
                p_bar: self.p_bar,
                rho1_target: self.rho1_target,
                turnover: if self.mixed_resample {
                    1.0
                } else {
                    epsilon * self.pi_lf
                },
            },
        }
    }

    /// Equilibrium leader mass implied by the strategy.
    pub fn leader_mass(&self) -> f64 {
        match self.strategy {
            Strategy::Random => stationary_masses(self.pi_fl, self.pi_lf)
                .map(|(_, r1)| r1)
                .unwrap_or(f64::NAN),
            Strategy::Weighted | Strategy::Mixed => self.rho1_target,
        }
    }

    /// Target the leader mass `rho1` under every strategy: sets `rho1_target`
    /// and splits the current total rate `π_FL + π_LF` so that the random
    /// strategy has stationary leader mass `rho1`.
    pub fn set_leader_mass(&mut self, rho1: f64) {
        let total = self.pi_fl + self.pi_lf;
        self.rho1_target = rho1;
        self.pi_fl = total * rho1;
        self.pi_lf = total * (1.0 - rho1);
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitKind {
    /// Uniform in the objective's initialization box.
    #[default]
    UniformBox,
    /// Normal, centered in the box with per-axis standard deviation of a
    /// quarter of the box width.
    GaussianBox,
}

/// `[experiment]` section.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ExperimentConfig {
    pub objective: String,
    pub dimension: usize,
    /// Swarm size `N`.
    pub n: usize,
    /// Iteration cap `N_t`.
    pub max_iter: usize,
    pub j_stall: usize,
    pub delta_stall: f64,
    /// Reset the stall counter whenever `x̂` moves more than `delta_stall`, so
    /// a run stops after `j_stall` consecutive small steps. When false the
    /// counter accumulates over the whole run.
    pub stall_reset: bool,
    pub success_tol: f64,
    pub init: InitKind,
    pub seed: u64,
    /// Repetitions `M` per experiment or grid point.
    pub repetitions: usize,
    /// Record a moment snapshot every this many iterations; 0 disables traces.
    pub trace_every: usize,
    /// Abort a run once any coordinate exceeds this magnitude.
    pub guard: f64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            objective: "rastrigin".into(),
            dimension: 20,
            n: 200,
            max_iter: 10_000,
            j_stall: 1000,
            delta_stall: 1e-4,
            stall_reset: true,
            success_tol: 0.25,
            init: InitKind::UniformBox,
            seed: 0,
            repetitions: 20,
            trace_every: 0,
            guard: 1e100,
        }
    }
}

/// Everything needed to execute one run.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub dynamics: DynamicsConfig,
    pub transition: TransitionConfig,
    pub experiment: ExperimentConfig,
}

impl RunConfig {
    /// Check every field; configuration errors surface here, before any run.
    pub fn validate(&self, registry: &Registry) -> Result<Objective> {
        self.dynamics.validate()?;
        if self.dynamics.method.uses_labels() {
            self.transition
                .policy(self.dynamics.epsilon)
                .validate(self.dynamics.epsilon)?;
        }
        let e = &self.experiment;
        if e.n < 2 {
            return Err(Error::config(format!(
                "swarm size n must be at least 2, got {}",
                e.n
            )));
        }
        if e.max_iter < 1 {
            return Err(Error::config("max_iter must be at least 1"));
        }
        if !(e.delta_stall > 0.0) {
            return Err(Error::config(format!(
                "delta_stall must be positive, got {}",
                e.delta_stall
            )));
        }
        if !(e.success_tol > 0.0) {
            return Err(Error::config(format!(
                "success_tol must be positive, got {}",
                e.success_tol
            )));
        }
        if e.repetitions < 1 {
            return Err(Error::config("repetitions must be at least 1"));
        }
        if !(e.guard > 0.0) {
            return Err(Error::config("guard must be positive"));
        }
        registry.objective(&e.objective, e.dimension)
    }

    /// Set one scalar parameter by its config key (as used by sweep axes).
    pub fn set(&mut self, key: &str, value: &AxisValue) -> Result<()> {
        let d = &mut self.dynamics;
        let t = &mut self.transition;
        let e = &mut self.experiment;
        match key {
            "method" => d.method = value.parse_enum(key)?,
            "nu_f" => d.nu_f = value.as_f64(key)?,
            "nu_l" => d.nu_l = value.as_f64(key)?,
            "sigma_f" => d.sigma_f = value.as_f64(key)?,
            "alpha" => d.alpha = value.as_f64(key)?,
            "epsilon" => d.epsilon = value.as_f64(key)?,
            "diffusion" => d.diffusion = value.parse_enum::<DiffusionKind>(key)?,
            "consensus" => d.consensus = value.parse_enum::<ConsensusSelector>(key)?,
            "interaction_prob" => d.interaction_prob = value.as_f64(key)?,
            "strategy" => t.strategy = value.parse_enum(key)?,
            "pi_fl" => t.pi_fl = value.as_f64(key)?,
            "pi_lf" => t.pi_lf = value.as_f64(key)?,
            "rho1_target" => t.rho1_target = value.as_f64(key)?,
            "rho1_inf" => t.set_leader_mass(value.as_f64(key)?),
            "p_bar" => t.p_bar = value.as_f64(key)?,
            "weighted_damped" => t.weighted_damped = value.as_bool(key)?,
            "mixed_resample" => t.mixed_resample = value.as_bool(key)?,
            "objective" => e.objective = value.as_str(key)?.to_string(),
            "dimension" | "d" => e.dimension = value.as_usize(key)?,
            "n" => e.n = value.as_usize(key)?,
            "max_iter" => e.max_iter = value.as_usize(key)?,
            "j_stall" => e.j_stall = value.as_usize(key)?,
            "delta_stall" => e.delta_stall = value.as_f64(key)?,
            "stall_reset" => e.stall_reset = value.as_bool(key)?,
            "success_tol" => e.success_tol = value.as_f64(key)?,
            "init" => e.init = value.parse_enum(key)?,
            _ => return Err(Error::config(format!("unknown sweep parameter `{key}`"))),
        }
        Ok(())
    }
}

/// One value on a sweep axis.
#[derive(Debug, Clone, PartialEq)]
pub enum AxisValue {
    Num(f64),
    Bool(bool),
    Text(String),
}

impl AxisValue {
    fn as_f64(&self, key: &str) -> Result<f64> {
        match self {
            AxisValue::Num(v) => Ok(*v),
            other => Err(Error::config(format!(
                "`{key}` expects a number, got {other}"
            ))),
        }
    }

    fn as_usize(&self, key: &str) -> Result<usize> {
        match self {
            AxisValue::Num(v) if *v >= 0.0 && v.fract() == 0.0 => Ok(*v as usize),
            other => Err(Error::config(format!(
                "`{key}` expects a nonnegative integer, got {other}"
            ))),
        }
    }

    fn as_bool(&self, key: &str) -> Result<bool> {
        match self {
            AxisValue::Bool(b) => Ok(*b),
            other => Err(Error::config(format!(
                "`{key}` expects a boolean, got {other}"
            ))),
        }
    }

    fn as_str(&self, key: &str) -> Result<&str> {
        match self {
            AxisValue::Text(s) => Ok(s),
            other => Err(Error::config(format!(
                "`{key}` expects a string, got {other}"
            ))),
        }
    }

    fn parse_enum<T: for<'de> Deserialize<'de>>(&self, key: &str) -> Result<T> {
        let s = self.as_str(key)?;
        T::deserialize(serde::de::value::StrDeserializer::<serde::de::value::Error>::new(s))
            .map_err(|e| Error::config(format!("`{key}`: {e}")))
    }
}

impl fmt::Display for AxisValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AxisValue::Num(v) => write!(f, "{v}"),
            AxisValue::Bool(b) => write!(f, "{b}"),
            AxisValue::Text(s) => f.write_str(s),
        }
    }
}

impl From<f64> for AxisValue {
    fn from(v: f64) -> Self {
        AxisValue::Num(v)
    }
}

impl From<&str> for AxisValue {
    fn from(v: &str) -> Self {
        AxisValue::Text(v.to_string())
    }
}

/// A swept parameter and its values.
#[derive(Debug, Clone, PartialEq)]
pub struct Axis {
    pub key: String,
    pub values: Vec<AxisValue>,
}

impl Axis {
    pub fn new(
        key: impl Into<String>,
        values: impl IntoIterator<Item = impl Into<AxisValue>>,
    ) -> Self {
        Self {
            key: key.into(),
            values: values.into_iter().map(Into::into).collect(),
        }
    }
}

/// Parsed configuration file.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ConfigFile {
    pub run: RunConfig,
    pub axes: Vec<Axis>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    #[serde(default)]
    dynamics: DynamicsConfig,
    #[serde(default)]
    transition: TransitionConfig,
    #[serde(default)]
    experiment: ExperimentConfig,
    #[serde(default)]
    sweep: toml::Table,
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self> {
        let raw: RawConfig = toml::from_str(text).map_err(|e| Error::config(e.to_string()))?;
        let mut axes = Vec::new();
        let mut probe = RunConfig::default();
        for (key, value) in raw.sweep {
            let list = match value {
                toml::Value::Array(items) => items,
                single => vec![single],
            };
            let values = list
                .into_iter()
                .map(|v| match v {
                    toml::Value::Integer(i) => Ok(AxisValue::Num(i as f64)),
                    toml::Value::Float(f) => Ok(AxisValue::Num(f)),
                    toml::Value::Boolean(b) => Ok(AxisValue::Bool(b)),
                    toml::Value::String(s) => Ok(AxisValue::Text(s)),
                    other => Err(Error::config(format!(
                        "sweep `{key}`: unsupported value {other}"
                    ))),
                })
                .collect::<Result<Vec<_>>>()?;
            if values.is_empty() {
                return Err(Error::config(format!("sweep `{key}` has no values")));
            }
            for v in &values {
                probe.set(&key, v)?;
            }
            axes.push(Axis { key, values });
        }
        Ok(Self {
            run: RunConfig {
                dynamics: raw.dynamics,
                transition: raw.transition,
                experiment: raw.experiment,
            },
            axes,
        })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text).map_err(|e| match e {
            Error::Config(msg) => Error::config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }
}
