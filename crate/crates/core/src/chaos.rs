//! Circle-map chaotic sequences and the population initializer built on them.
//!
//! The map is `x' = (x + b - a/(2π)·sin(2πx)) mod 1` with `a = 0.5`, `b = 0.2`.
//! A single scalar stream feeds the whole population row-major: individual
//! `i`, dimension `d` consumes value number `i·dim + d`.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::space::SearchBox;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CircleParams {
    pub a: f64,
    pub b: f64,
}

impl Default for CircleParams {
    fn default() -> Self {
        Self { a: 0.5, b: 0.2 }
    }
}

impl CircleParams {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !a.is_finite() || !b.is_finite() {
            return Err(Error::Domain(format!(
                "circle map coefficients must be finite, got a={a}, b={b}"
            )));
        }
        Ok(Self { a, b })
    }

    /// One application of the circle map.
    pub fn step(&self, x: f64) -> Result<f64> {
        check_unit(x)?;
        Ok(self.step_unchecked(x))
    }

    #[inline]
    fn step_unchecked(&self, x: f64) -> f64 {
        let y = (x + self.b - self.a / TAU * (TAU * x).sin()).rem_euclid(1.0);
        // rem_euclid can round up to exactly 1.0 for tiny negative inputs.
        if y >= 1.0 {
            0.0
        } else {
            y
        }
    }

    /// `[x1, ..., xn]` starting from `x0` (which is not included).
    pub fn sequence(&self, x0: f64, n: usize) -> Result<Vec<f64>> {
        check_unit(x0)?;
        if n == 0 {
            return Err(Error::EmptyRequest(
                "chaotic sequence length must be at least 1",
            ));
        }
        let mut out = Vec::with_capacity(n);
        let mut x = x0;
        for _ in 0..n {
            x = self.step_unchecked(x);
            out.push(x);
        }
        Ok(out)
    }

    /// `pop_size` positions inside `search_box` from the chaotic stream seeded at `x0`.
    pub fn init_population(
        &self,
        search_box: &SearchBox,
        pop_size: usize,
        x0: f64,
    ) -> Result<Vec<Vec<f64>>> {
        if pop_size == 0 {
            return Err(Error::EmptyRequest("population size must be at least 1"));
        }
        let dim = search_box.dim();
        let stream = self.sequence(x0, pop_size * dim)?;
        Ok(stream
            .chunks_exact(dim)
            .map(|row| {
                row.iter()
                    .enumerate()
                    .map(|(d, &u)| search_box.clamp_coord(d, search_box.lerp(d, u)))
                    .collect()
            })
            .collect())
    }
}

fn check_unit(x: f64) -> Result<()> {
    if (0.0..1.0).contains(&x) {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "circle map input {x} outside [0, 1)"
        )))
    }
}

/// Circle map step with the default coefficients.
pub fn circle_step(x: f64) -> Result<f64> {
    CircleParams::default().step(x)
}

/// Chaotic sequence with the default coefficients.
pub fn chaotic_sequence(x0: f64, n: usize) -> Result<Vec<f64>> {
    CircleParams::default().sequence(x0, n)
}

/// Population initialization with the default coefficients.
pub fn init_population(search_box: &SearchBox, pop_size: usize, x0: f64) -> Result<Vec<Vec<f64>>> {
    CircleParams::default().init_population(search_box, pop_size, x0)
}
