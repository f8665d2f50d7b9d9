//! Objective abstraction and the ten-function minimization suite.
//!
//! | name            | box              | minimizer     |
//! |-----------------|------------------|---------------|
//! | `sphere`        | [-100, 100]      | 0             |
//! | `schwefel_2_22` | [-10, 10]        | 0             |
//! | `rosenbrock`    | [-30, 30]        | 1             |
//! | `step`          | [-100, 100]      | 0             |
//! | `quartic`       | [-1.28, 1.28]    | 0 (plus noise)|
//! | `schwefel_2_26` | [-500, 500]      | 420.9687...   |
//! | `rastrigin`     | [-5.12, 5.12]    | 0             |
//! | `ackley`        | [-32, 32]        | 0             |
//! | `griewank`      | [-600, 600]      | 0             |
//! | `levy`          | [-10, 10]        | 1             |
//!
//! Every minimum is 0; Schwefel 2.26 carries the `418.98...·dim` offset.

use std::f64::consts::{E, PI, TAU};

use rand::Rng;

use crate::error::{Error, Result};
use crate::rng::Stream;
use crate::space::SearchBox;

/// Random stream handed to objectives that need one (noisy quartic).
pub type NoiseStream = Stream;

/// A minimization problem over a box.
pub trait Objective: Send + Sync {
    fn name(&self) -> &str;

    fn search_box(&self) -> &SearchBox;

    /// Global minimum value, when known.
    fn known_optimum(&self) -> Option<f64> {
        None
    }

    /// Fitness of `x` without input validation.
    fn value(&self, x: &[f64], noise: &mut NoiseStream) -> f64;

    /// Validated fitness: `x` must match the box dimension and be finite.
    fn evaluate(&self, x: &[f64], noise: &mut NoiseStream) -> Result<f64> {
        let dim = self.search_box().dim();
        if x.len() != dim {
            return Err(Error::Domain(format!(
                "{}: expected {dim} coordinates, got {}",
                self.name(),
                x.len()
            )));
        }
        if let Some(d) = x.iter().position(|v| !v.is_finite()) {
            return Err(Error::Domain(format!(
                "{}: coordinate {d} is not finite",
                self.name()
            )));
        }
        Ok(self.value(x, noise))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BenchmarkKind {
    Sphere,
    Schwefel222,
    Rosenbrock,
    Step,
    Quartic,
    Schwefel226,
    Rastrigin,
    Ackley,
    Griewank,
    Levy,
}

const SCHWEFEL_226_OFFSET: f64 = 418.982_887_272_433_7;
const SCHWEFEL_226_ARGMIN: f64 = 420.968_746_359_982_03;

impl BenchmarkKind {
    pub const ALL: [BenchmarkKind; 10] = [
        BenchmarkKind::Sphere,
        BenchmarkKind::Schwefel222,
        BenchmarkKind::Rosenbrock,
        BenchmarkKind::Step,
        BenchmarkKind::Quartic,
        BenchmarkKind::Schwefel226,
        BenchmarkKind::Rastrigin,
        BenchmarkKind::Ackley,
        BenchmarkKind::Griewank,
        BenchmarkKind::Levy,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BenchmarkKind::Sphere => "sphere",
            BenchmarkKind::Schwefel222 => "schwefel_2_22",
            BenchmarkKind::Rosenbrock => "rosenbrock",
            BenchmarkKind::Step => "step",
            BenchmarkKind::Quartic => "quartic",
            BenchmarkKind::Schwefel226 => "schwefel_2_26",
            BenchmarkKind::Rastrigin => "rastrigin",
            BenchmarkKind::Ackley => "ackley",
            BenchmarkKind::Griewank => "griewank",
            BenchmarkKind::Levy => "levy",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.name() == name)
    }

    /// Per-dimension `(lower, upper)`.
    pub fn bounds(self) -> (f64, f64) {
        match self {
            BenchmarkKind::Sphere | BenchmarkKind::Step => (-100.0, 100.0),
            BenchmarkKind::Schwefel222 | BenchmarkKind::Levy => (-10.0, 10.0),
            BenchmarkKind::Rosenbrock => (-30.0, 30.0),
            BenchmarkKind::Quartic => (-1.28, 1.28),
            BenchmarkKind::Schwefel226 => (-500.0, 500.0),
            BenchmarkKind::Rastrigin => (-5.12, 5.12),
            BenchmarkKind::Ackley => (-32.0, 32.0),
            BenchmarkKind::Griewank => (-600.0, 600.0),
        }
    }

    pub fn formula(self) -> &'static str {
        match self {
            BenchmarkKind::Sphere => "sum x_i^2",
            BenchmarkKind::Schwefel222 => "sum |x_i| + prod |x_i|",
            BenchmarkKind::Rosenbrock => "sum 100 (x_{i+1} - x_i^2)^2 + (x_i - 1)^2",
            BenchmarkKind::Step => "sum floor(x_i + 0.5)^2",
            BenchmarkKind::Quartic => "sum i x_i^4 + U[0, 1)",
            BenchmarkKind::Schwefel226 => "418.9829 n - sum x_i sin(sqrt|x_i|)",
            BenchmarkKind::Rastrigin => "sum x_i^2 - 10 cos(2 pi x_i) + 10",
            BenchmarkKind::Ackley => {
                "-20 exp(-0.2 sqrt(mean x_i^2)) - exp(mean cos(2 pi x_i)) + 20 + e"
            }
            BenchmarkKind::Griewank => "sum x_i^2 / 4000 - prod cos(x_i / sqrt i) + 1",
            BenchmarkKind::Levy => {
                "sin^2(pi w_1) + sum (w_i - 1)^2 (1 + 10 sin^2(pi w_i + 1)) + (w_n - 1)^2 (1 + sin^2(2 pi w_n))"
            }
        }
    }

    /// A global minimizer at dimension `dim`.
    pub fn minimizer(self, dim: usize) -> Vec<f64> {
        let v = match self {
            BenchmarkKind::Rosenbrock | BenchmarkKind::Levy => 1.0,
            BenchmarkKind::Schwefel226 => SCHWEFEL_226_ARGMIN,
            _ => 0.0,
        };
        vec![v; dim]
    }

    pub fn value(self, x: &[f64], noise: &mut NoiseStream) -> f64 {
        let n = x.len() as f64;
        match self {
            BenchmarkKind::Sphere => x.iter().map(|v| v * v).sum(),
            BenchmarkKind::Schwefel222 => {
                let sum: f64 = x.iter().map(|v| v.abs()).sum();
                let prod: f64 = x.iter().map(|v| v.abs()).product();
                sum + prod
            }
            BenchmarkKind::Rosenbrock => x
                .windows(2)
                .map(|w| 100.0 * (w[1] - w[0] * w[0]).powi(2) + (w[0] - 1.0).powi(2))
                .sum(),
            BenchmarkKind::Step => x.iter().map(|v| (v + 0.5).floor().powi(2)).sum(),
            BenchmarkKind::Quartic => {
                let s: f64 = x
                    .iter()
                    .enumerate()
                    .map(|(i, v)| (i + 1) as f64 * v.powi(4))
                    .sum();
                s + noise.random::<f64>()
            }
            BenchmarkKind::Schwefel226 => {
                SCHWEFEL_226_OFFSET * n - x.iter().map(|v| v * v.abs().sqrt().sin()).sum::<f64>()
            }
            BenchmarkKind::Rastrigin => x
                .iter()
                .map(|v| v * v - 10.0 * (TAU * v).cos() + 10.0)
                .sum(),
            BenchmarkKind::Ackley => {
                let sq = x.iter().map(|v| v * v).sum::<f64>() / n;
                let cs = x.iter().map(|v| (TAU * v).cos()).sum::<f64>() / n;
                -20.0 * (-0.2 * sq.sqrt()).exp() - cs.exp() + 20.0 + E
            }
            BenchmarkKind::Griewank => {
                let s = x.iter().map(|v| v * v).sum::<f64>() / 4000.0;
                let p: f64 = x
                    .iter()
                    .enumerate()
                    .map(|(i, v)| (v / ((i + 1) as f64).sqrt()).cos())
                    .product();
                s - p + 1.0
            }
            BenchmarkKind::Levy => {
                let w = |v: f64| 1.0 + (v - 1.0) / 4.0;
                let first = (PI * w(x[0])).sin().powi(2);
                let last = {
                    let wn = w(x[x.len() - 1]);
                    (wn - 1.0).powi(2) * (1.0 + (TAU * wn).sin().powi(2))
                };
                let mid: f64 = x[..x.len() - 1]
                    .iter()
                    .map(|&v| {
                        let wi = w(v);
                        (wi - 1.0).powi(2) * (1.0 + 10.0 * (PI * wi + 1.0).sin().powi(2))
                    })
                    .sum();
                first + mid + last
            }
        }
    }
}

/// One benchmark function bound to a dimension.
#[derive(Debug, Clone)]
pub struct Benchmark {
    kind: BenchmarkKind,
    search_box: SearchBox,
}

impl Benchmark {
    pub fn new(kind: BenchmarkKind, dim: usize) -> Result<Self> {
        let (lo, hi) = kind.bounds();
        Ok(Self {
            kind,
            search_box: SearchBox::uniform(lo, hi, dim)?,
        })
    }

    pub fn kind(&self) -> BenchmarkKind {
        self.kind
    }
}

impl Objective for Benchmark {
    fn name(&self) -> &str {
        self.kind.name()
    }

    fn search_box(&self) -> &SearchBox {
        &self.search_box
    }

    fn known_optimum(&self) -> Option<f64> {
        Some(0.0)
    }

    fn value(&self, x: &[f64], noise: &mut NoiseStream) -> f64 {
        self.kind.value(x, noise)
    }
}

/// The ordered ten-function suite.
#[derive(Debug, Clone)]
pub struct BenchmarkSuite {
    entries: Vec<Benchmark>,
}

impl BenchmarkSuite {
    pub fn new(dim: usize) -> Result<Self> {
        if dim < 2 {
            return Err(Error::Config(format!(
                "benchmark dimension must be at least 2, got {dim}"
            )));
        }
        let entries = BenchmarkKind::ALL
            .into_iter()
            .map(|k| Benchmark::new(k, dim))
            .collect::<Result<_>>()?;
        Ok(Self { entries })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Benchmark> {
        self.entries.iter()
    }

    pub fn get(&self, name: &str) -> Option<&Benchmark> {
        self.entries.iter().find(|b| b.name() == name)
    }
}

/// The suite at dimension `dim`.
pub fn suite(dim: usize) -> Result<BenchmarkSuite> {
    BenchmarkSuite::new(dim)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    fn noise() -> NoiseStream {
        NoiseStream::seed_from_u64(0)
    }

    #[test]
    fn optima_at_origin() {
        let mut n = noise();
        for kind in [
            BenchmarkKind::Sphere,
            BenchmarkKind::Rastrigin,
            BenchmarkKind::Griewank,
            BenchmarkKind::Ackley,
        ] {
            let v = kind.value(&[0.0; 30], &mut n);
            assert!(v.abs() < 1e-12, "{} -> {v}", kind.name());
        }
        assert_eq!(BenchmarkKind::Sphere.value(&[0.0; 30], &mut n), 0.0);
    }

    #[test]
    fn ones_in_thirty_dimensions() {
        let mut n = noise();
        assert_eq!(BenchmarkKind::Sphere.value(&[1.0; 30], &mut n), 30.0);
        let r = BenchmarkKind::Rastrigin.value(&[1.0; 30], &mut n);
        assert!((r - 30.0).abs() < 1e-12 * 30.0);
    }

    #[test]
    fn suite_shape() {
        let s = suite(30).unwrap();
        assert_eq!(s.len(), 10);
        let ackley = s.get("ackley").unwrap();
        assert!(ackley.search_box().lower().iter().all(|&v| v == -32.0));
        assert!(ackley.search_box().upper().iter().all(|&v| v == 32.0));
        for name in ["sphere", "rastrigin", "ackley", "griewank"] {
            assert!(s.get(name).is_some());
        }
        assert!(s.iter().all(|b| b.known_optimum() == Some(0.0)));
        assert!(suite(1).is_err());
    }

    #[test]
    fn value_at_minimizer_matches_known_optimum() {
        let mut n = noise();
        for dim in [2, 10, 30] {
            for b in suite(dim).unwrap().iter() {
                if b.kind() == BenchmarkKind::Quartic {
                    continue;
                }
                let v = b.evaluate(&b.kind().minimizer(dim), &mut n).unwrap();
                assert!((v - 0.0).abs() < 1e-9, "{} at dim {dim}: {v}", b.name());
            }
        }
        // The quartic's deterministic part vanishes; only the [0, 1) noise remains.
        let q = Benchmark::new(BenchmarkKind::Quartic, 30).unwrap();
        let v = q.evaluate(&[0.0; 30], &mut n).unwrap();
        assert!((0.0..1.0).contains(&v));
    }

    #[test]
    fn schwefel_minimizer_is_stationary() {
        // Central difference of x sin(sqrt x) at the tabulated minimizer.
        let g = |x: f64| x * x.sqrt().sin();
        let h = 1e-4;
        let slope = (g(SCHWEFEL_226_ARGMIN + h) - g(SCHWEFEL_226_ARGMIN - h)) / (2.0 * h);
        assert!(slope.abs() < 1e-7);
        assert!((g(SCHWEFEL_226_ARGMIN) - SCHWEFEL_226_OFFSET).abs() < 1e-10);
    }

    #[test]
    fn evaluate_validates_input() {
        let b = Benchmark::new(BenchmarkKind::Sphere, 3).unwrap();
        let mut n = noise();
        assert!(matches!(
            b.evaluate(&[0.0; 2], &mut n),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            b.evaluate(&[0.0, f64::NAN, 0.0], &mut n),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn names_round_trip() {
        for k in BenchmarkKind::ALL {
            assert_eq!(BenchmarkKind::from_name(k.name()), Some(k));
        }
        assert_eq!(BenchmarkKind::from_name("banana"), None);
    }
}
