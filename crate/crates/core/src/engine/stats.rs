use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::OptimizerConfig;
use super::run::{run_optimizer, RunRecord};
use crate::error::{Error, Result};
use crate::objectives::Objective;

/// Best, mean and population standard deviation of final fitness values.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BatchStats {
    pub n_runs: usize,
    pub best: f64,
    pub mean: f64,
    pub std: f64,
}

impl BatchStats {
    pub fn from_values(values: &[f64]) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptyRequest("statistics need at least one value"));
        }
        let n = values.len() as f64;
        let best = values.iter().copied().fold(f64::INFINITY, f64::min);
        let mean = values.iter().sum::<f64>() / n;
        let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
        Ok(Self {
            n_runs: values.len(),
            best,
            // Rounding can push the mean a hair below the minimum of equal values.
            mean: mean.max(best),
            std: var.sqrt(),
        })
    }
}

#[derive(Debug, Clone)]
pub struct BatchResult {
    pub stats: BatchStats,
    /// Ordered by seed.
    pub records: Vec<RunRecord>,
}

/// `n_runs` runs with seeds `seed, seed + 1, ...`, executed in parallel.
pub fn run_batch(
    config: &OptimizerConfig,
    objective: &dyn Objective,
    n_runs: usize,
) -> Result<BatchResult> {
    if n_runs == 0 {
        return Err(Error::Config("n_runs must be at least 1".into()));
    }
    config.validate()?;
    let records = (0..n_runs as u64)
        .into_par_iter()
        .map(|i| {
            let mut c = config.clone();
            c.seed = config.seed.wrapping_add(i);
            run_optimizer(&c, objective)
        })
        .collect::<Result<Vec<_>>>()?;
    let finals: Vec<f64> = records.iter().map(|r| r.final_best_fitness).collect();
    Ok(BatchResult {
        stats: BatchStats::from_values(&finals)?,
        records,
    })
}
