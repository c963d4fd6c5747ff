//! Gibbs-weighted consensus point.
//!
//! `x̂ = Σ x_i exp(-α E_i) / Σ exp(-α E_i)` over a label-selected subset. The
//! exponent is shifted by the subset's minimum energy before exponentiation,
//! which leaves the value unchanged and keeps the best particle's weight at
//! exactly 1, so arbitrarily large `α` cannot overflow or produce `0/0`.

use serde::{Deserialize, Serialize};

use crate::{Error, Label, Objective, Result, Swarm};

/// Which particles contribute to the consensus point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum ConsensusSelector {
    #[default]
    #[serde(rename = "all")]
    All,
    #[serde(rename = "followers")]
    FollowersOnly,
    #[serde(rename = "leaders")]
    LeadersOnly,
}

impl ConsensusSelector {
    #[inline]
    pub fn admits(self, label: Label) -> bool {
        match self {
            ConsensusSelector::All => true,
            ConsensusSelector::FollowersOnly => label == Label::Follower,
            ConsensusSelector::LeadersOnly => label == Label::Leader,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ConsensusSelector::All => "all",
            ConsensusSelector::FollowersOnly => "followers",
            ConsensusSelector::LeadersOnly => "leaders",
        }
    }
}

/// Weighted mean of the selected particles given precomputed `energies`
/// (one per particle, in swarm order).
pub fn weighted_mean(
    swarm: &Swarm,
    energies: &[f64],
    alpha: f64,
    selector: ConsensusSelector,
) -> Result<Vec<f64>> {
    if energies.len() != swarm.len() {
        return Err(Error::DimensionMismatch {
            expected: swarm.len(),
            got: energies.len(),
        });
    }
    let mut out = vec![0.0; swarm.dim()];
    weighted_mean_into(swarm, energies, alpha, selector, &mut out)?;
    Ok(out)
}

/// Evaluate energies and return the weighted mean.
pub fn consensus_point(
    swarm: &Swarm,
    objective: &Objective,
    alpha: f64,
    selector: ConsensusSelector,
) -> Result<Vec<f64>> {
    let energies = swarm.energies(objective)?;
    weighted_mean(swarm, &energies, alpha, selector)
}

/// Consensus point used by the dynamics: the selected subset when it is
/// nonempty, otherwise the whole swarm (e.g. no leaders exist yet at `t = 0`).
pub fn estimate(
    swarm: &Swarm,
    energies: &[f64],
    alpha: f64,
    selector: ConsensusSelector,
) -> Result<Vec<f64>> {
    match weighted_mean(swarm, energies, alpha, selector) {
        Err(Error::EmptyConsensusSubset(_)) => {
            weighted_mean(swarm, energies, alpha, ConsensusSelector::All)
        }
        other => other,
    }
}

pub(crate) fn weighted_mean_into(
    swarm: &Swarm,
    energies: &[f64],
    alpha: f64,
    selector: ConsensusSelector,
    out: &mut [f64],
) -> Result<()> {
    if !(alpha >= 0.0 && alpha.is_finite()) {
        return Err(Error::config(format!(
            "alpha must be finite and nonnegative, got {alpha}"
        )));
    }
    let labels = swarm.labels();
    let e_min = energies
        .iter()
        .zip(labels)
        .filter(|(_, &l)| selector.admits(l))
        .map(|(&e, _)| e)
        .fold(f64::INFINITY, f64::min);
    if e_min == f64::INFINITY {
        return Err(Error::EmptyConsensusSubset(selector.as_str()));
    }

    out.fill(0.0);
    let mut total = 0.0;
    for (i, (&e, &l)) in energies.iter().zip(labels).enumerate() {
        if !selector.admits(l) {
            continue;
        }
        let w = (-alpha * (e - e_min)).exp();
        if w == 0.0 {
            continue;
        }
        total += w;
        for (o, x) in out.iter_mut().zip(swarm.position(i)) {
            *o += w * x;
        }
    }
    for o in out.iter_mut() {
        *o /= total;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Particle;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn followers(points: &[Vec<f64>]) -> Swarm {
        Swarm::from_particles(points.iter().cloned().map(Particle::follower)).unwrap()
    }

    #[test]
    fn single_particle() {
        let s = followers(&[vec![3.0, -1.0]]);
        let xhat = weighted_mean(&s, &[17.0], 5e6, ConsensusSelector::All).unwrap();
        assert_eq!(xhat, vec![3.0, -1.0]);
    }

    #[test]
    fn equal_energies_give_arithmetic_mean() {
        let s = followers(&[vec![0.0], vec![2.0]]);
        for alpha in [0.0, 1.0, 5e6, 1e300] {
            let xhat = weighted_mean(&s, &[4.0, 4.0], alpha, ConsensusSelector::All).unwrap();
            assert_eq!(xhat, vec![1.0]);
        }
    }

    #[test]
    fn empty_subset_is_an_error() {
        let s = followers(&[vec![0.0], vec![2.0]]);
        let err = weighted_mean(&s, &[0.0, 1.0], 1.0, ConsensusSelector::LeadersOnly);
        assert!(matches!(err, Err(Error::EmptyConsensusSubset("leaders"))));
    }

    #[test]
    fn subset_selection_renormalizes() {
        let s = Swarm::from_particles([
            Particle::follower(vec![0.0]),
            Particle::leader(vec![10.0]),
            Particle::leader(vec![20.0]),
        ])
        .unwrap();
        let e = [0.0, 1.0, 1.0];
        let l = weighted_mean(&s, &e, 3.0, ConsensusSelector::LeadersOnly).unwrap();
        assert_eq!(l, vec![15.0]);
        let f = weighted_mean(&s, &e, 3.0, ConsensusSelector::FollowersOnly).unwrap();
        assert_eq!(f, vec![0.0]);
    }

    #[test]
    fn alpha_zero_is_plain_mean() {
        let s = followers(&[vec![1.0, 0.0], vec![2.0, 4.0], vec![6.0, 2.0]]);
        let xhat = weighted_mean(&s, &[5.0, -3.0, 100.0], 0.0, ConsensusSelector::All).unwrap();
        assert!((xhat[0] - 3.0).abs() < 1e-15 && (xhat[1] - 2.0).abs() < 1e-15);
    }

    #[test]
    fn negative_alpha_rejected() {
        let s = followers(&[vec![1.0]]);
        assert!(weighted_mean(&s, &[0.0], -1.0, ConsensusSelector::All).is_err());
    }

    #[test]
    fn large_alpha_picks_argmin_on_rastrigin() {
        let obj = Objective::builtin("rastrigin", 3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut checked = 0;
        while checked < 200 {
            let pts: Vec<Vec<f64>> = (0..10)
                .map(|_| (0..3).map(|_| rng.random_range(-4.12..0.0)).collect())
                .collect();
            let s = followers(&pts);
            let e = s.energies(&obj).unwrap();
            let mut sorted = e.clone();
            sorted.sort_by(f64::total_cmp);
            if sorted[1] - sorted[0] <= 1e-4 {
                continue;
            }
            let best = e.iter().position(|&v| v == sorted[0]).unwrap();
            let xhat = weighted_mean(&s, &e, 5e6, ConsensusSelector::All).unwrap();
            for (a, b) in xhat.iter().zip(s.position(best)) {
                assert!((a - b).abs() <= 1e-12);
            }
            checked += 1;
        }
    }

    #[test]
    fn concentration_is_monotone_in_alpha() {
        // Ensembles whose best particle is separated by a unit energy gap.
        let obj = Objective::builtin("rastrigin", 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut checked = 0;
        while checked < 300 {
            let pts: Vec<Vec<f64>> = (0..8)
                .map(|_| (0..2).map(|_| rng.random_range(-4.12..0.0)).collect())
                .collect();
            let s = followers(&pts);
            let e = s.energies(&obj).unwrap();
            let mut sorted = e.clone();
            sorted.sort_by(f64::total_cmp);
            if sorted[1] - sorted[0] < 1.0 {
                continue;
            }
            let best = e.iter().position(|&v| v == sorted[0]).unwrap();
            let dist = |alpha: f64| {
                let xhat = weighted_mean(&s, &e, alpha, ConsensusSelector::All).unwrap();
                xhat.iter()
                    .zip(s.position(best))
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max)
            };
            let mut prev = f64::INFINITY;
            for k in 0..=6 {
                let d = dist(10f64.powi(k));
                assert!(d <= prev + 1e-15, "alpha=1e{k}: {d} > {prev}");
                prev = d;
            }
            checked += 1;
        }
    }

    proptest! {
        #[test]
        fn stays_in_convex_hull(
            pts in prop::collection::vec(prop::collection::vec(-50.0f64..50.0, 3), 1..20),
            energies_seed in prop::collection::vec(0.0f64..100.0, 20),
            alpha in prop_oneof![Just(0.0), 0.0f64..10.0, Just(5e6)],
        ) {
            let s = followers(&pts);
            let e = &energies_seed[..pts.len()];
            let xhat = weighted_mean(&s, e, alpha, ConsensusSelector::All).unwrap();
            for j in 0..3 {
                let lo = pts.iter().map(|p| p[j]).fold(f64::INFINITY, f64::min);
                let hi = pts.iter().map(|p| p[j]).fold(f64::NEG_INFINITY, f64::max);
                prop_assert!(xhat[j] >= lo - 1e-9 && xhat[j] <= hi + 1e-9);
            }
        }

        #[test]
        fn shift_invariance_is_exact_on_dyadic_energies(
            pts in prop::collection::vec(prop::collection::vec(-5.0f64..5.0, 2), 1..12),
            ks in prop::collection::vec(0u32..4096, 12),
            c in -1000i32..1000,
            alpha in 0.0f64..50.0,
        ) {
            // Energies k/1024 shifted by an integer are exactly representable,
            // so the shifted differences match bit for bit.
            let s = followers(&pts);
            let e: Vec<f64> = ks[..pts.len()].iter().map(|&k| k as f64 / 1024.0).collect();
            let e2: Vec<f64> = e.iter().map(|v| v + c as f64).collect();
            let a = weighted_mean(&s, &e, alpha, ConsensusSelector::All).unwrap();
            let b = weighted_mean(&s, &e2, alpha, ConsensusSelector::All).unwrap();
            prop_assert_eq!(a, b);
        }
    }
}
