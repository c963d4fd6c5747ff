//! Population moments and decay-rate fits.
//!
//! All moments use the empirical measure with weight `1/N`, so label masses are
//! fractions and `m₀ + m₁` is the swarm mean.

use crate::consensus::{self, ConsensusSelector};
use crate::{Error, Label, Objective, Result, Swarm};

/// Moments of the swarm at one instant.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentSnapshot {
    pub t: f64,
    pub rho0: f64,
    pub rho1: f64,
    /// Unnormalized first moments `(1/N) Σ_{label=λ} x_i`.
    pub m0: Vec<f64>,
    pub m1: Vec<f64>,
    /// Label means `m_λ / ρ_λ`; `None` when the label is absent.
    pub mean0: Option<Vec<f64>>,
    pub mean1: Option<Vec<f64>>,
    /// `(1/N) Σ_{label=λ} |x_i - M_λ|²`.
    pub v0: f64,
    pub v1: f64,
    /// `v0 + v1`.
    pub total_variance: f64,
    pub xhat: Vec<f64>,
    /// `‖x̂ - x̄‖∞`.
    pub accuracy: f64,
}

impl MomentSnapshot {
    /// `|M₀ - M₁|²`, defined when both labels are present.
    pub fn mean_gap_sq(&self) -> Option<f64> {
        match (&self.mean0, &self.mean1) {
            (Some(a), Some(b)) => Some(sq_dist(a, b)),
            _ => None,
        }
    }

    /// Unnormalized swarm mean `m = m₀ + m₁`.
    pub fn swarm_mean(&self) -> Vec<f64> {
        self.m0.iter().zip(&self.m1).map(|(a, b)| a + b).collect()
    }
}

fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// `‖a - b‖∞`.
pub fn sup_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

/// Snapshot of `swarm` at time `t`, with the consensus point computed from the
/// selected subset (falling back to the whole swarm when it is empty).
pub fn snapshot(
    swarm: &Swarm,
    objective: &Objective,
    alpha: f64,
    selector: ConsensusSelector,
    t: f64,
) -> Result<MomentSnapshot> {
    let energies = swarm.energies(objective)?;
    let xhat = consensus::estimate(swarm, &energies, alpha, selector)?;
    Ok(snapshot_at(swarm, xhat, objective.global_min_location(), t))
}

/// Snapshot given an already computed consensus point.
pub fn snapshot_at(swarm: &Swarm, xhat: Vec<f64>, minimizer: &[f64], t: f64) -> MomentSnapshot {
    let n = swarm.len() as f64;
    let d = swarm.dim();
    let mut m = [vec![0.0; d], vec![0.0; d]];
    let mut counts = [0usize; 2];
    for (x, &l) in swarm.positions().zip(swarm.labels()) {
        let k = l as usize;
        counts[k] += 1;
        for (acc, v) in m[k].iter_mut().zip(x) {
            *acc += v;
        }
    }
    let means: Vec<Option<Vec<f64>>> = (0..2)
        .map(|k| (counts[k] > 0).then(|| m[k].iter().map(|v| v / counts[k] as f64).collect()))
        .collect();
    let mut v = [0.0; 2];
    for (x, &l) in swarm.positions().zip(swarm.labels()) {
        let k = l as usize;
        if let Some(mean) = &means[k] {
            v[k] += sq_dist(x, mean);
        }
    }
    for k in 0..2 {
        for acc in m[k].iter_mut() {
            *acc /= n;
        }
        v[k] /= n;
    }
    let [m0, m1] = m;
    let mut means = means.into_iter();
    let accuracy = sup_distance(&xhat, minimizer);
    MomentSnapshot {
        t,
        rho0: counts[Label::Follower as usize] as f64 / n,
        rho1: counts[Label::Leader as usize] as f64 / n,
        m0,
        m1,
        mean0: means.next().flatten(),
        mean1: means.next().flatten(),
        v0: v[0],
        v1: v[1],
        total_variance: v[0] + v[1],
        xhat,
        accuracy,
    }
}

/// Variance of the whole swarm about its overall mean, `(1/N) Σ |x_i - m|²`.
/// Differs from [`MomentSnapshot::total_variance`] whenever the label means differ.
pub fn pooled_variance(swarm: &Swarm) -> f64 {
    let n = swarm.len() as f64;
    let mut mean = vec![0.0; swarm.dim()];
    for x in swarm.positions() {
        for (m, v) in mean.iter_mut().zip(x) {
            *m += v / n;
        }
    }
    swarm.positions().map(|x| sq_dist(x, &mean)).sum::<f64>() / n
}

/// Least-squares exponential fit `value ≈ C e^{-rate t}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayFit {
    pub rate: f64,
    pub r_squared: f64,
}

/// Fit an exponential decay to `(t, value)` samples by regressing `ln value`
/// on `t`. Needs at least 10 samples, all strictly positive.
pub fn fit_decay_rate(series: &[(f64, f64)]) -> Result<DecayFit> {
    if series.len() < 10 {
        return Err(Error::SeriesTooShort(series.len()));
    }
    if let Some(&(t, value)) = series.iter().find(|(_, v)| !(*v > 0.0)) {
        return Err(Error::NonPositiveSample { t, value });
    }
    let n = series.len() as f64;
    let (st, sy) = series
        .iter()
        .fold((0.0, 0.0), |(st, sy), &(t, v)| (st + t, sy + v.ln()));
    let (t_bar, y_bar) = (st / n, sy / n);
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for &(t, v) in series {
        let dx = t - t_bar;
        let dy = v.ln() - y_bar;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if sxx == 0.0 {
        return Err(Error::config("decay fit needs at least two distinct times"));
    }
    let slope = sxy / sxx;
    let ss_res = (syy - slope * sxy).max(0.0);
    let r_squared = if syy > 0.0 { 1.0 - ss_res / syy } else { 1.0 };
    Ok(DecayFit {
        rate: -slope,
        r_squared,
    })
}
