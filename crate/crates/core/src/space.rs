use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Axis-aligned search box `[lower[d], upper[d]]` for every dimension `d`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchBox {
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl SearchBox {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        if lower.is_empty() {
            return Err(Error::Domain(
                "search box must have at least one dimension".into(),
            ));
        }
        if lower.len() != upper.len() {
            return Err(Error::Domain(format!(
                "bound lengths differ: {} lower vs {} upper",
                lower.len(),
                upper.len()
            )));
        }
        for (d, (lo, hi)) in lower.iter().zip(&upper).enumerate() {
            if !lo.is_finite() || !hi.is_finite() || lo >= hi {
                return Err(Error::Domain(format!(
                    "degenerate bounds in dimension {d}: [{lo}, {hi}]"
                )));
            }
        }
        Ok(Self { lower, upper })
    }

    /// The same `[lo, hi]` interval repeated over `dim` dimensions.
    pub fn uniform(lo: f64, hi: f64, dim: usize) -> Result<Self> {
        Self::new(vec![lo; dim], vec![hi; dim])
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.dim()
            && x.iter()
                .zip(self.lower.iter().zip(&self.upper))
                .all(|(v, (lo, hi))| *lo <= *v && *v <= *hi)
    }

    #[inline]
    pub fn clamp_coord(&self, d: usize, v: f64) -> f64 {
        // NaN collapses to the lower bound so a position can never leave the box.
        if v.is_nan() {
            self.lower[d]
        } else {
            v.clamp(self.lower[d], self.upper[d])
        }
    }

    pub fn clamp(&self, x: &mut [f64]) {
        for (d, v) in x.iter_mut().enumerate() {
            *v = self.clamp_coord(d, *v);
        }
    }

    /// Affine map of a unit-interval value onto dimension `d`.
    #[inline]
    pub fn lerp(&self, d: usize, u: f64) -> f64 {
        self.lower[d] + u * (self.upper[d] - self.lower[d])
    }
}
