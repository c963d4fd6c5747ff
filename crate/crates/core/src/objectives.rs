//! Benchmark cost functions.
//!
//! Every built-in benchmark is translated so that its global minimizer sits at
//! `x̄ = (1, ..., 1)` with minimum value `0`, and ships with an initialization
//! hypercube that deliberately excludes the minimizer.

use std::collections::BTreeMap;
use std::f64::consts::{E, PI};
use std::fmt;
use std::sync::Arc;

use crate::{Error, Result};

/// A dimension-parametric cost landscape.
pub trait Landscape: Send + Sync {
    /// Cost at `x`. Must be deterministic and finite for finite input.
    fn value(&self, x: &[f64]) -> f64;

    /// Location of the global minimizer in `dimension` dimensions.
    fn minimizer(&self, dimension: usize) -> Vec<f64>;

    fn minimum(&self) -> f64 {
        0.0
    }

    /// Default initialization hypercube as `(low, high)`.
    fn init_region(&self, dimension: usize) -> (Vec<f64>, Vec<f64>);
}

/// Classical Rastrigin function, minimum 0 at the origin.
pub fn rastrigin(z: &[f64]) -> f64 {
    rastrigin_iter(z.iter().copied())
}

fn rastrigin_iter(z: impl Iterator<Item = f64>) -> f64 {
    z.map(|v| v * v - 10.0 * (2.0 * PI * v).cos() + 10.0).sum()
}

/// Classical Ackley function (a = 20, b = 0.2, c = 2π), minimum 0 at the origin.
pub fn ackley(z: &[f64]) -> f64 {
    ackley_iter(z.iter().copied(), z.len())
}

fn ackley_iter(z: impl Iterator<Item = f64>, d: usize) -> f64 {
    let (sq, cs) = z.fold((0.0, 0.0), |(sq, cs), v| {
        (sq + v * v, cs + (2.0 * PI * v).cos())
    });
    let n = d as f64;
    // Grouped so that the origin evaluates to exactly zero.
    20.0 * (1.0 - (-0.2 * (sq / n).sqrt()).exp()) + (E - (cs / n).exp())
}

/// Classical Griewank function, minimum 0 at the origin.
pub fn griewank(z: &[f64]) -> f64 {
    griewank_iter(z.iter().copied())
}

fn griewank_iter(z: impl Iterator<Item = f64>) -> f64 {
    let (sum, prod) = z.enumerate().fold((0.0, 1.0), |(s, p), (i, v)| {
        (s + v * v, p * (v / ((i + 1) as f64).sqrt()).cos())
    });
    sum / 4000.0 + (1.0 - prod)
}

/// Classical Salomon function, minimum 0 at the origin.
pub fn salomon(z: &[f64]) -> f64 {
    salomon_iter(z.iter().copied())
}

fn salomon_iter(z: impl Iterator<Item = f64>) -> f64 {
    let r = z.map(|v| v * v).sum::<f64>().sqrt();
    1.0 - (2.0 * PI * r).cos() + 0.1 * r
}

/// Classical Rosenbrock function, minimum 0 at `(1, ..., 1)`.
pub fn rosenbrock(x: &[f64]) -> f64 {
    if x.len() == 1 {
        return (1.0 - x[0]).powi(2);
    }
    x.windows(2)
        .map(|w| 100.0 * (w[1] - w[0] * w[0]).powi(2) + (1.0 - w[0]).powi(2))
        .sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Benchmark {
    Rastrigin,
    Ackley,
    Griewank,
    Rosenbrock,
    Salomon,
}

/// One of the built-in benchmarks, translated to `x̄ = 1`.
#[derive(Debug, Clone, Copy)]
struct Translated {
    kind: Benchmark,
    init_low: f64,
    init_high: f64,
}

const SHIFT: f64 = 1.0;

impl Landscape for Translated {
    fn value(&self, x: &[f64]) -> f64 {
        let z = x.iter().map(|v| v - SHIFT);
        match self.kind {
            Benchmark::Rastrigin => rastrigin_iter(z),
            Benchmark::Ackley => ackley_iter(z, x.len()),
            Benchmark::Griewank => griewank_iter(z),
            Benchmark::Salomon => salomon_iter(z),
            // Rosenbrock already has its minimizer at 1.
            Benchmark::Rosenbrock => rosenbrock(x),
        }
    }

    fn minimizer(&self, dimension: usize) -> Vec<f64> {
        vec![SHIFT; dimension]
    }

    fn init_region(&self, dimension: usize) -> (Vec<f64>, Vec<f64>) {
        (
            vec![self.init_low; dimension],
            vec![self.init_high; dimension],
        )
    }
}

/// Named collection of landscapes used to resolve objective ids from
/// configuration files.
#[derive(Clone)]
pub struct Registry {
    entries: BTreeMap<String, Arc<dyn Landscape>>,
}

impl Registry {
    /// Registry without any entries.
    pub fn empty() -> Self {
        Self {
            entries: BTreeMap::new(),
        }
    }

    /// Registry holding the translated Rastrigin, Ackley, Griewank, Rosenbrock
    /// and Salomon benchmarks.
    pub fn builtin() -> Self {
        let mut reg = Self::empty();
        let builtins = [
            ("rastrigin", Benchmark::Rastrigin, -4.12, 0.0),
            ("ackley", Benchmark::Ackley, -5.0, 0.0),
            ("griewank", Benchmark::Griewank, -10.0, 0.0),
            ("rosenbrock", Benchmark::Rosenbrock, -2.048, 0.0),
            ("salomon", Benchmark::Salomon, -5.0, 0.0),
        ];
        for (name, kind, init_low, init_high) in builtins {
            reg.register(
                name,
                Translated {
                    kind,
                    init_low,
                    init_high,
                },
            );
        }
        reg
    }

    pub fn register(&mut self, name: impl Into<String>, landscape: impl Landscape + 'static) {
        self.entries.insert(name.into(), Arc::new(landscape));
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.entries.contains_key(name)
    }

    /// Instantiate the objective `name` in `dimension` dimensions.
    pub fn objective(&self, name: &str, dimension: usize) -> Result<Objective> {
        let landscape = self
            .entries
            .get(name)
            .ok_or_else(|| Error::UnknownObjective(name.to_string()))?;
        Objective::new(name, dimension, Arc::clone(landscape))
    }
}

impl Default for Registry {
    fn default() -> Self {
        Self::builtin()
    }
}

impl fmt::Debug for Registry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.entries.keys()).finish()
    }
}

/// A cost function fixed to a dimension, with its known minimizer and
/// initialization box.
#[derive(Clone)]
pub struct Objective {
    id: String,
    dimension: usize,
    landscape: Arc<dyn Landscape>,
    min_location: Vec<f64>,
    min_value: f64,
    init_low: Vec<f64>,
    init_high: Vec<f64>,
}

impl Objective {
    pub fn new(
        id: impl Into<String>,
        dimension: usize,
        landscape: Arc<dyn Landscape>,
    ) -> Result<Self> {
        let id = id.into();
        if dimension == 0 {
            return Err(Error::config(format!(
                "objective `{id}`: dimension must be positive"
            )));
        }
        let min_location = landscape.minimizer(dimension);
        let (init_low, init_high) = landscape.init_region(dimension);
        for v in [&min_location, &init_low, &init_high] {
            if v.len() != dimension {
                return Err(Error::DimensionMismatch {
                    expected: dimension,
                    got: v.len(),
                });
            }
        }
        if init_low.iter().zip(&init_high).any(|(lo, hi)| !(lo < hi)) {
            return Err(Error::config(format!(
                "objective `{id}`: degenerate initialization box"
            )));
        }
        Ok(Self {
            min_value: landscape.minimum(),
            id,
            dimension,
            landscape,
            min_location,
            init_low,
            init_high,
        })
    }

    /// Built-in benchmark by name.
    pub fn builtin(id: &str, dimension: usize) -> Result<Self> {
        Registry::builtin().objective(id, dimension)
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn global_min_location(&self) -> &[f64] {
        &self.min_location
    }

    pub fn global_min_value(&self) -> f64 {
        self.min_value
    }

    /// Default initialization hypercube `(low, high)`.
    pub fn init_region(&self) -> (&[f64], &[f64]) {
        (&self.init_low, &self.init_high)
    }

    /// Evaluate the cost at `x`, checking its dimension.
    pub fn evaluate(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.dimension {
            return Err(Error::DimensionMismatch {
                expected: self.dimension,
                got: x.len(),
            });
        }
        Ok(self.landscape.value(x))
    }

    /// Evaluate without the dimension check. Callers guarantee `x.len() == d`.
    #[inline]
    pub(crate) fn value(&self, x: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), self.dimension);
        self.landscape.value(x)
    }
}

impl fmt::Debug for Objective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Objective")
            .field("id", &self.id)
            .field("dimension", &self.dimension)
            .finish_non_exhaustive()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const ALL: [&str; 5] = ["rastrigin", "ackley", "griewank", "rosenbrock", "salomon"];

    #[test]
    fn rastrigin_hand_values() {
        let obj = Objective::builtin("rastrigin", 20).unwrap();
        assert_eq!(obj.evaluate(&[1.0; 20]).unwrap(), 0.0);
        assert!((obj.evaluate(&[0.0; 20]).unwrap() - 20.0).abs() < 1e-12);

        let obj3 = Objective::builtin("rastrigin", 3).unwrap();
        assert!((obj3.evaluate(&[1.0, 1.0, 2.0]).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let obj = Objective::builtin("rastrigin", 3).unwrap();
        assert!(matches!(
            obj.evaluate(&[1.0, 1.0]),
            Err(Error::DimensionMismatch {
                expected: 3,
                got: 2
            })
        ));
    }

    #[test]
    fn unknown_id() {
        assert!(matches!(
            Objective::builtin("sphere-ish", 2),
            Err(Error::UnknownObjective(_))
        ));
    }

    #[test]
    fn rastrigin_init_region() {
        for d in [1, 20] {
            let obj = Objective::builtin("rastrigin", d).unwrap();
            let (lo, hi) = obj.init_region();
            assert_eq!(lo, vec![-4.12; d].as_slice());
            assert_eq!(hi, vec![0.0; d].as_slice());
        }
    }

    #[test]
    fn minimizer_is_exact_and_outside_init_box() {
        for name in ALL {
            for d in [1, 2, 5, 20] {
                let obj = Objective::builtin(name, d).unwrap();
                let at_min = obj.evaluate(obj.global_min_location()).unwrap();
                assert!(
                    (at_min - obj.global_min_value()).abs() < 1e-12,
                    "{name} d={d}: {at_min}"
                );
                let (lo, hi) = obj.init_region();
                assert!(lo.iter().zip(hi).all(|(l, h)| l < h));
                let inside = obj
                    .global_min_location()
                    .iter()
                    .zip(lo.iter().zip(hi))
                    .all(|(x, (l, h))| l <= x && x <= h);
                assert!(!inside, "{name}: minimizer inside init box");
            }
        }
    }

    #[test]
    fn values_never_below_minimum() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for name in ALL {
            let obj = Objective::builtin(name, 6).unwrap();
            for _ in 0..5000 {
                let x: Vec<f64> = (0..6).map(|_| rng.random_range(-12.0..12.0)).collect();
                let v = obj.evaluate(&x).unwrap();
                assert!(v.is_finite());
                assert!(v >= obj.global_min_value() - 1e-12, "{name} at {x:?}: {v}");
            }
        }
    }

    #[test]
    fn custom_landscape_registers() {
        struct Bowl;
        impl Landscape for Bowl {
            fn value(&self, x: &[f64]) -> f64 {
                x.iter().map(|v| (v - 3.0).powi(2)).sum()
            }
            fn minimizer(&self, d: usize) -> Vec<f64> {
                vec![3.0; d]
            }
            fn init_region(&self, d: usize) -> (Vec<f64>, Vec<f64>) {
                (vec![-1.0; d], vec![0.0; d])
            }
        }
        let mut reg = Registry::builtin();
        reg.register("bowl", Bowl);
        let obj = reg.objective("bowl", 2).unwrap();
        assert_eq!(obj.evaluate(&[3.0, 3.0]).unwrap(), 0.0);
        assert!(reg.names().any(|n| n == "bowl"));
    }

    proptest! {
        #[test]
        fn evaluation_is_pure(x in prop::collection::vec(-10.0f64..10.0, 4)) {
            for name in ALL {
                let obj = Objective::builtin(name, 4).unwrap();
                let a = obj.evaluate(&x).unwrap();
                let b = obj.evaluate(&x).unwrap();
                prop_assert_eq!(a.to_bits(), b.to_bits());
            }
        }

        #[test]
        fn rastrigin_is_translated_classical(x in prop::collection::vec(-10.0f64..10.0, 1..8)) {
            let obj = Objective::builtin("rastrigin", x.len()).unwrap();
            let shifted: Vec<f64> = x.iter().zip(obj.global_min_location()).map(|(a, m)| a - m).collect();
            let direct: f64 = shifted
                .iter()
                .map(|z| z * z - 10.0 * (2.0 * PI * z).cos() + 10.0)
                .sum();
            prop_assert_eq!(obj.evaluate(&x).unwrap(), rastrigin(&shifted));
            prop_assert!((obj.evaluate(&x).unwrap() - direct).abs() < 1e-9);
        }
    }
}
