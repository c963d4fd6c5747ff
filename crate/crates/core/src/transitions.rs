//! Leader emergence: label transition policies.
//!
//! Labels change after the position update of every step. Three policies are
//! available:
//!
//! * **random** — independent flips with probabilities `ε π_FL` (follower to
//!   leader) and `ε π_LF` (leader to follower);
//! * **weighted** — the `⌊ρ₁ N⌋` agents whose energy is closest to the current
//!   best become leaders, everybody else a follower;
//! * **mixed** — a fraction `p̄` of the leader slots is filled by rank; the
//!   rest are held by randomly chosen agents, each of which steps down with
//!   probability `turnover` per step and is replaced uniformly at random.

use rand::seq::index;

use crate::{Error, Label, Objective, Result, RngStream, Swarm};

/// Label dynamics applied once per step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TransitionPolicy {
    Random {
        pi_fl: f64,
        pi_lf: f64,
    },
    Weighted {
        rho1_target: f64,
        /// Flip toward the ranked labeling with probability `ε` instead of
        /// relabeling deterministically.
        damped: bool,
    },
    Mixed {
        p_bar: f64,
        rho1_target: f64,
        /// Per-step probability that a randomly appointed leader is released.
        /// `1` redraws every random slot each step.
        turnover: f64,
    },
}

impl TransitionPolicy {
    pub fn name(&self) -> &'static str {
        match self {
            TransitionPolicy::Random { .. } => "random",
            TransitionPolicy::Weighted { .. } => "weighted",
            TransitionPolicy::Mixed { .. } => "mixed",
        }
    }

    /// Check the policy parameters against the time step `epsilon`.
    pub fn validate(&self, epsilon: f64) -> Result<()> {
        let fraction = |name: &str, v: f64| {
            if v > 0.0 && v < 1.0 {
                Ok(())
            } else {
                Err(Error::config(format!("{name} must lie in (0, 1), got {v}")))
            }
        };
        match *self {
            TransitionPolicy::Random { pi_fl, pi_lf } => {
                for (name, rate) in [("pi_fl", pi_fl), ("pi_lf", pi_lf)] {
                    if !(rate >= 0.0 && rate.is_finite()) {
                        return Err(Error::config(format!(
                            "{name} must be nonnegative, got {rate}"
                        )));
                    }
                    if epsilon * rate > 1.0 {
                        return Err(Error::config(format!(
                            "epsilon * {name} = {} is not a probability",
                            epsilon * rate
                        )));
                    }
                }
                Ok(())
            }
            TransitionPolicy::Weighted { rho1_target, .. } => fraction("rho1_target", rho1_target),
            TransitionPolicy::Mixed {
                p_bar,
                rho1_target,
                turnover,
            } => {
                fraction("rho1_target", rho1_target)?;
                if !(0.0..=1.0).contains(&p_bar) {
                    return Err(Error::config(format!(
                        "p_bar must lie in [0, 1], got {p_bar}"
                    )));
                }
                if !(0.0..=1.0).contains(&turnover) {
                    return Err(Error::config(format!(
                        "mixed turnover must lie in [0, 1], got {turnover}"
                    )));
                }
                Ok(())
            }
        }
    }
}

/// Equilibrium masses `(ρ₀∞, ρ₁∞)` of the constant-rate label dynamics.
pub fn stationary_masses(pi_fl: f64, pi_lf: f64) -> Result<(f64, f64)> {
    let total = pi_fl + pi_lf;
    if !(total > 0.0) {
        return Err(Error::UndefinedEquilibrium);
    }
    Ok((pi_lf / total, pi_fl / total))
}

/// Number of leaders targeted for mass `rho1` in a swarm of `n` agents:
/// `⌊rho1 n⌋`, but at least one when `rho1 > 0`.
pub fn leader_target(rho1: f64, n: usize) -> usize {
    if rho1 <= 0.0 || n == 0 {
        return 0;
    }
    // The small offset absorbs representation error, e.g. 0.29 * 100 = 28.999...
    let l = (rho1 * n as f64 + 1e-9).floor() as usize;
    l.clamp(1, n)
}

/// Fitness weight of every agent: the fraction of agents whose energy is
/// strictly closer to the current best energy than the agent's own.
pub fn agent_weights(energies: &[f64]) -> Vec<f64> {
    let n = energies.len();
    if n == 0 {
        return Vec::new();
    }
    let e_min = energies.iter().copied().fold(f64::INFINITY, f64::min);
    let mut gaps: Vec<f64> = energies.iter().map(|e| (e_min - e).abs()).collect();
    let sorted = {
        let mut s = gaps.clone();
        s.sort_by(f64::total_cmp);
        s
    };
    for g in gaps.iter_mut() {
        let closer = sorted.partition_point(|v| v < g);
        *g = closer as f64 / n as f64;
    }
    gaps
}

/// Weight `ω(x_i)` of agent `i`.
pub fn agent_weight(swarm: &Swarm, objective: &Objective, i: usize) -> Result<f64> {
    let energies = swarm.energies(objective)?;
    Ok(agent_weights(&energies)[i])
}

/// Agent indices ordered best first: by weight, then energy, then index.
pub fn rank_agents(energies: &[f64]) -> Vec<usize> {
    let weights = agent_weights(energies);
    let mut order: Vec<usize> = (0..energies.len()).collect();
    order.sort_by(|&a, &b| {
        weights[a]
            .total_cmp(&weights[b])
            .then(energies[a].total_cmp(&energies[b]))
            .then(a.cmp(&b))
    });
    order
}

/// Apply one transition step in place, given the agents' current energies.
/// Positions are never touched.
pub fn apply_transition(
    swarm: &mut Swarm,
    energies: &[f64],
    policy: &TransitionPolicy,
    epsilon: f64,
    rng: &mut RngStream,
) {
    debug_assert_eq!(energies.len(), swarm.len());
    let n = swarm.len();
    match *policy {
        TransitionPolicy::Random { pi_fl, pi_lf } => {
            let p_lead = epsilon * pi_fl;
            let p_follow = epsilon * pi_lf;
            for i in 0..n {
                let next = match swarm.label(i) {
                    Label::Follower if rng.bernoulli(p_lead) => Label::Leader,
                    Label::Leader if rng.bernoulli(p_follow) => Label::Follower,
                    same => same,
                };
                swarm.set_label(i, next);
            }
        }
        TransitionPolicy::Weighted {
            rho1_target,
            damped,
        } => {
            let target = leader_target(rho1_target, n);
            let mut selected = vec![false; n];
            for &i in rank_agents(energies).iter().take(target) {
                selected[i] = true;
            }
            for (i, &lead) in selected.iter().enumerate() {
                let wanted = if lead { Label::Leader } else { Label::Follower };
                if swarm.label(i) != wanted && (!damped || rng.bernoulli(epsilon)) {
                    swarm.set_label(i, wanted);
                }
            }
        }
        TransitionPolicy::Mixed {
            p_bar,
            rho1_target,
            turnover,
        } => {
            let target = leader_target(rho1_target, n);
            let ranked_slots = ((p_bar * target as f64) + 1e-9).floor() as usize;
            let ranked_slots = ranked_slots.min(target);
            let random_slots = target - ranked_slots;
            let mut selected = vec![false; n];
            for &i in &rank_agents(energies)[..ranked_slots] {
                selected[i] = true;
            }
            // Current leaders outside the ranked set keep a random slot unless released.
            let mut kept: Vec<usize> = (0..n)
                .filter(|&i| !selected[i] && swarm.label(i).is_leader())
                .filter(|_| !rng.bernoulli(turnover))
                .collect();
            if kept.len() > random_slots {
                let keep = index::sample(rng, kept.len(), random_slots).into_vec();
                let mut trimmed: Vec<usize> = keep.into_iter().map(|k| kept[k]).collect();
                trimmed.sort_unstable();
                kept = trimmed;
            }
            for &i in &kept {
                selected[i] = true;
            }
            let open = random_slots - kept.len();
            if open > 0 {
                let pool: Vec<usize> = (0..n).filter(|&i| !selected[i]).collect();
                for k in index::sample(rng, pool.len(), open) {
                    selected[pool[k]] = true;
                }
            }
            for (i, &lead) in selected.iter().enumerate() {
                swarm.set_label(i, if lead { Label::Leader } else { Label::Follower });
            }
        }
    }
}

/// Evaluate energies and return the relabeled swarm.
pub fn transition(
    swarm: &Swarm,
    objective: &Objective,
    policy: &TransitionPolicy,
    epsilon: f64,
    rng: &mut RngStream,
) -> Result<Swarm> {
    policy.validate(epsilon)?;
    let energies = swarm.energies(objective)?;
    let mut next = swarm.clone();
    apply_transition(&mut next, &energies, policy, epsilon, rng);
    Ok(next)
}
