use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::config::OptimizerConfig;
use super::stats::{run_batch, BatchStats};
use crate::error::{Error, Result};
use crate::objectives::Objective;

/// Parameters that can be swept. `k` stands in for step size and `b_roll`
/// for the convergence factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepParam {
    PopSize,
    MaxIters,
    K,
    BRoll,
    Ph,
    Pv,
}

impl SweepParam {
    pub fn as_str(self) -> &'static str {
        match self {
            SweepParam::PopSize => "pop_size",
            SweepParam::MaxIters => "max_iters",
            SweepParam::K => "k",
            SweepParam::BRoll => "b_roll",
            SweepParam::Ph => "ph",
            SweepParam::Pv => "pv",
        }
    }

    /// `base` with this parameter set to `value`.
    pub fn apply(self, base: &OptimizerConfig, value: f64) -> Result<OptimizerConfig> {
        let mut c = base.clone();
        let as_count = |v: f64| -> Result<usize> {
            if v.fract() == 0.0 && v >= 1.0 && v <= u32::MAX as f64 {
                Ok(v as usize)
            } else {
                Err(Error::Config(format!(
                    "{} needs a positive integer, got {v}",
                    self.as_str()
                )))
            }
        };
        match self {
            SweepParam::PopSize => c.pop_size = as_count(value)?,
            SweepParam::MaxIters => c.max_iters = as_count(value)?,
            SweepParam::K => c.dbo.k = value,
            SweepParam::BRoll => c.dbo.b_roll = value,
            SweepParam::Ph => c.crossover.horizontal_prob = value,
            SweepParam::Pv => c.crossover.vertical_prob = value,
        }
        if self == SweepParam::PopSize {
            // Explicit role counts cannot follow a population change.
            c.dbo.role_counts = None;
        }
        c.validate()?;
        Ok(c)
    }
}

impl fmt::Display for SweepParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SweepParam {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "pop_size" => SweepParam::PopSize,
            "max_iters" => SweepParam::MaxIters,
            "k" => SweepParam::K,
            "b_roll" => SweepParam::BRoll,
            "ph" => SweepParam::Ph,
            "pv" => SweepParam::Pv,
            other => {
                return Err(Error::Config(format!(
                    "unknown sweep parameter `{other}` (expected pop_size, max_iters, k, b_roll, ph, pv)"
                )))
            }
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub value: f64,
    pub config: OptimizerConfig,
    pub stats: BatchStats,
}

/// One batch per value with everything else held at `base`. All values are
/// validated before any run starts.
pub fn sweep(
    base: &OptimizerConfig,
    objective: &dyn Objective,
    param: &str,
    values: &[f64],
    n_runs: usize,
) -> Result<Vec<SweepRow>> {
    let param: SweepParam = param.parse()?;
    if values.is_empty() {
        return Err(Error::Config("sweep needs at least one value".into()));
    }
    let configs = values
        .iter()
        .map(|&v| param.apply(base, v))
        .collect::<Result<Vec<_>>>()?;
    values
        .iter()
        .zip(configs)
        .map(|(&value, config)| {
            let stats = run_batch(&config, objective, n_runs)?.stats;
            Ok(SweepRow {
                value,
                config,
                stats,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_known_params_only() {
        for name in ["pop_size", "max_iters", "k", "b_roll", "ph", "pv"] {
            assert_eq!(name.parse::<SweepParam>().unwrap().as_str(), name);
        }
        assert!(matches!(
            "banana".parse::<SweepParam>(),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn apply_validates_values() {
        let base = OptimizerConfig::cicrdbo();
        assert_eq!(SweepParam::PopSize.apply(&base, 12.0).unwrap().pop_size, 12);
        assert!(SweepParam::PopSize.apply(&base, 12.5).is_err());
        assert!(SweepParam::MaxIters.apply(&base, 0.0).is_err());
        assert!(SweepParam::K.apply(&base, 0.5).is_err());
        assert_eq!(SweepParam::BRoll.apply(&base, 0.7).unwrap().dbo.b_roll, 0.7);
        assert!(SweepParam::Pv.apply(&base, 1.0).is_err());
    }
}
