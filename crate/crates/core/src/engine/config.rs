use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::crisscross::CrossoverParams;
use crate::dbo::DboParams;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    /// Baseline dung beetle optimizer.
    Dbo,
    /// Circle-map initialization plus crisscross crossover.
    Cicrdbo,
}

impl Algorithm {
    pub fn as_str(self) -> &'static str {
        match self {
            Algorithm::Dbo => "dbo",
            Algorithm::Cicrdbo => "cicrdbo",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dbo" => Ok(Algorithm::Dbo),
            "cicrdbo" => Ok(Algorithm::Cicrdbo),
            other => Err(Error::Config(format!("unknown algorithm `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InitScheme {
    UniformRandom,
    Circle,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizerConfig {
    pub algorithm: Algorithm,
    pub pop_size: usize,
    pub max_iters: usize,
    pub dbo: DboParams,
    /// Used only by [`Algorithm::Cicrdbo`].
    pub crossover: CrossoverParams,
    pub init: InitScheme,
    pub seed: u64,
}

impl OptimizerConfig {
    /// Population 30, 500 iterations, reference constants.
    pub fn new(algorithm: Algorithm) -> Self {
        Self {
            algorithm,
            pop_size: 30,
            max_iters: 500,
            dbo: DboParams::default(),
            crossover: CrossoverParams::default(),
            init: match algorithm {
                Algorithm::Dbo => InitScheme::UniformRandom,
                Algorithm::Cicrdbo => InitScheme::Circle,
            },
            seed: 0,
        }
    }

    pub fn dbo() -> Self {
        Self::new(Algorithm::Dbo)
    }

    pub fn cicrdbo() -> Self {
        Self::new(Algorithm::Cicrdbo)
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_budget(mut self, pop_size: usize, max_iters: usize) -> Self {
        self.pop_size = pop_size;
        self.max_iters = max_iters;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.pop_size < 2 {
            return Err(Error::Config(format!(
                "pop_size must be at least 2, got {}",
                self.pop_size
            )));
        }
        if self.max_iters < 1 {
            return Err(Error::Config("max_iters must be at least 1".into()));
        }
        self.dbo.validate(self.pop_size)?;
        if self.algorithm == Algorithm::Cicrdbo {
            if self.init != InitScheme::Circle {
                return Err(Error::Config(
                    "cicrdbo requires circle-map initialization".into(),
                ));
            }
            self.crossover.validate()?;
        }
        Ok(())
    }

    /// Short stable hash of the full configuration.
    pub fn fingerprint(&self) -> String {
        let json = serde_json::to_vec(self).expect("config serializes");
        Sha256::digest(&json)[..8]
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_follow_protocol() {
        let c = OptimizerConfig::cicrdbo();
        assert_eq!((c.pop_size, c.max_iters), (30, 500));
        assert_eq!(c.init, InitScheme::Circle);
        assert_eq!(OptimizerConfig::dbo().init, InitScheme::UniformRandom);
        assert!(c.validate().is_ok());
    }

    #[test]
    fn invalid_configs_are_rejected() {
        assert!(OptimizerConfig::dbo()
            .with_budget(1, 10)
            .validate()
            .is_err());
        assert!(OptimizerConfig::dbo()
            .with_budget(10, 0)
            .validate()
            .is_err());
        let mut c = OptimizerConfig::cicrdbo();
        c.init = InitScheme::UniformRandom;
        assert!(matches!(c.validate(), Err(Error::Config(_))));
        let mut c = OptimizerConfig::cicrdbo();
        c.crossover.vertical_prob = 1.0;
        assert!(c.validate().is_err());
    }

    #[test]
    fn fingerprint_tracks_config() {
        let a = OptimizerConfig::cicrdbo().with_seed(1);
        assert_eq!(a.fingerprint(), a.clone().fingerprint());
        assert_eq!(a.fingerprint().len(), 16);
        assert_ne!(
            a.fingerprint(),
            OptimizerConfig::cicrdbo().with_seed(2).fingerprint()
        );
    }

    #[test]
    fn algorithm_names() {
        assert_eq!("dbo".parse::<Algorithm>().unwrap(), Algorithm::Dbo);
        assert_eq!("cicrdbo".parse::<Algorithm>().unwrap(), Algorithm::Cicrdbo);
        assert!("pso".parse::<Algorithm>().is_err());
    }
}
