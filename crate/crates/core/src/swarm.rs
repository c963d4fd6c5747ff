//! Particle storage.

use crate::{Error, Objective, Result};

/// Leadership label of a particle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Label {
    #[default]
    Follower = 0,
    Leader = 1,
}

impl Label {
    pub fn is_leader(self) -> bool {
        self == Label::Leader
    }
}

/// A position in `R^d` together with a leadership label.
#[derive(Debug, Clone, PartialEq)]
pub struct Particle {
    pub position: Vec<f64>,
    pub label: Label,
}

impl Particle {
    pub fn new(position: Vec<f64>, label: Label) -> Self {
        Self { position, label }
    }

    pub fn follower(position: Vec<f64>) -> Self {
        Self::new(position, Label::Follower)
    }

    pub fn leader(position: Vec<f64>) -> Self {
        Self::new(position, Label::Leader)
    }
}

/// Ordered collection of `N` particles in `R^d`, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Swarm {
    dim: usize,
    positions: Vec<f64>,
    labels: Vec<Label>,
}

impl Swarm {
    /// Build from particles. All positions must share one nonzero dimension.
    pub fn from_particles(particles: impl IntoIterator<Item = Particle>) -> Result<Self> {
        let mut dim = None;
        let mut positions = Vec::new();
        let mut labels = Vec::new();
        for p in particles {
            let d = *dim.get_or_insert(p.position.len());
            if p.position.len() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    got: p.position.len(),
                });
            }
            positions.extend_from_slice(&p.position);
            labels.push(p.label);
        }
        let dim = dim.ok_or_else(|| Error::config("swarm must contain at least one particle"))?;
        if dim == 0 {
            return Err(Error::config("particles must have positive dimension"));
        }
        Ok(Self {
            dim,
            positions,
            labels,
        })
    }

    /// Build from a flat row-major position buffer.
    pub fn from_flat(dim: usize, positions: Vec<f64>, labels: Vec<Label>) -> Result<Self> {
        if dim == 0 || labels.is_empty() {
            return Err(Error::config(
                "swarm must be nonempty with positive dimension",
            ));
        }
        if positions.len() != dim * labels.len() {
            return Err(Error::DimensionMismatch {
                expected: dim * labels.len(),
                got: positions.len(),
            });
        }
        Ok(Self {
            dim,
            positions,
            labels,
        })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn position(&self, i: usize) -> &[f64] {
        &self.positions[i * self.dim..(i + 1) * self.dim]
    }

    #[inline]
    pub fn position_mut(&mut self, i: usize) -> &mut [f64] {
        &mut self.positions[i * self.dim..(i + 1) * self.dim]
    }

    pub fn positions(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.positions.chunks_exact(self.dim)
    }

    pub fn flat_positions(&self) -> &[f64] {
        &self.positions
    }

    #[inline]
    pub fn label(&self, i: usize) -> Label {
        self.labels[i]
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn set_label(&mut self, i: usize, label: Label) {
        self.labels[i] = label;
    }

    pub fn particle(&self, i: usize) -> Particle {
        Particle::new(self.position(i).to_vec(), self.labels[i])
    }

    pub fn particles(&self) -> impl Iterator<Item = Particle> + '_ {
        (0..self.len()).map(|i| self.particle(i))
    }

    pub fn leader_indices(&self) -> Vec<usize> {
        self.indices_with(Label::Leader)
    }

    pub fn follower_indices(&self) -> Vec<usize> {
        self.indices_with(Label::Follower)
    }

    fn indices_with(&self, label: Label) -> Vec<usize> {
        self.labels
            .iter()
            .enumerate()
            .filter_map(|(i, &l)| (l == label).then_some(i))
            .collect()
    }

    pub fn count(&self, label: Label) -> usize {
        self.labels.iter().filter(|&&l| l == label).count()
    }

    /// Label masses `(rho0, rho1)` as fractions of `N`.
    pub fn masses(&self) -> (f64, f64) {
        let n = self.len() as f64;
        let leaders = self.count(Label::Leader) as f64;
        ((n - leaders) / n, leaders / n)
    }

    /// Cost of every particle, in index order.
    pub fn energies(&self, objective: &Objective) -> Result<Vec<f64>> {
        if objective.dimension() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: objective.dimension(),
                got: self.dim,
            });
        }
        Ok(self.positions().map(|x| objective.value(x)).collect())
    }

    pub(crate) fn energies_into(&self, objective: &Objective, out: &mut Vec<f64>) {
        out.clear();
        out.extend(self.positions().map(|x| objective.value(x)));
    }

    /// Largest absolute coordinate over the swarm.
    pub fn max_abs_coordinate(&self) -> f64 {
        self.positions.iter().fold(0.0f64, |m, v| {
            if v.is_nan() {
                f64::INFINITY
            } else {
                m.max(v.abs())
            }
        })
    }
}
