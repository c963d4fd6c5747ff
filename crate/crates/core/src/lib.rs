//! Genetic kinetic-based optimization (GKBO).
//!
//! A derivative-free global optimizer built from an interacting particle
//! system. The swarm is split into *followers*, which explore the landscape by
//! relaxing toward a randomly chosen leader under multiplicative noise, and
//! *leaders*, which relax deterministically toward a Gibbs-weighted consensus
//! point. Labels evolve through random, fitness-ranked, or mixed transition
//! policies. Plain kinetic-based optimization (KBO) and two genetic-algorithm
//! baselines share the same machinery so that all methods are comparable per
//! iteration.
//!
//! The [`harness`] module drives complete runs, repeated experiments and
//! parameter sweeps, and writes CSV tables and SVG plots.

// `!(x > 0.0)` is used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod consensus;
pub mod diagnostics;
pub mod dynamics;
mod error;
pub mod harness;
pub mod objectives;
pub mod rng;
pub mod swarm;
pub mod transitions;

pub use consensus::{weighted_mean, ConsensusSelector};
pub use dynamics::{DiffusionKind, DynamicsConfig, Method};
pub use error::{Error, Result};
pub use harness::{run_experiment, run_single, sweep, ExperimentReport, RunConfig, RunResult};
pub use objectives::{Landscape, Objective, Registry};
pub use rng::RngStream;
pub use swarm::{Label, Particle, Swarm};
pub use transitions::TransitionPolicy;
