use std::collections::HashMap;
use std::sync::Mutex;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::dataset::{stratified_folds, stratified_split, Dataset};
use super::forest::{train_forest, RfHyperparams};
use super::metrics::{auc, evaluate_model, ClassificationMetrics};
use crate::engine::{run_optimizer_with, Algorithm, OptimizerConfig, RunRecord};
use crate::error::{Error, Result};
use crate::objectives::{NoiseStream, Objective};
use crate::space::SearchBox;

const TRAIN_RATIO: f64 = 0.7;

type CacheKey = (usize, usize, usize, usize);

/// Negative mean stratified k-fold AUC of a forest, over the unit box of
/// encoded hyperparameters. Forests that differ only in a feature fraction
/// with the same per-node feature count are identical, so scores are cached
/// on `(n_trees, max_depth, min_samples_split, features_per_node)`.
pub struct CvObjective {
    train: Dataset,
    folds: Vec<Vec<usize>>,
    seed: u64,
    search_box: SearchBox,
    cache: Mutex<HashMap<CacheKey, f64>>,
}

impl CvObjective {
    pub fn new(train: Dataset, cv_folds: usize, seed: u64) -> Result<Self> {
        let folds = stratified_folds(&train, cv_folds, seed)?;
        Ok(Self {
            train,
            folds,
            seed,
            search_box: SearchBox::uniform(0.0, 1.0, RfHyperparams::DIM)?,
            cache: Mutex::new(HashMap::new()),
        })
    }

    fn key(&self, hp: &RfHyperparams) -> CacheKey {
        (
            hp.n_trees,
            hp.max_depth,
            hp.min_samples_split,
            hp.features_per_node(self.train.n_features()),
        )
    }

    /// Mean validation AUC over the folds.
    pub fn cv_auc(&self, hp: &RfHyperparams) -> f64 {
        let key = self.key(hp);
        if let Some(&v) = self.cache.lock().expect("cache lock").get(&key) {
            return v;
        }
        let n = self.train.n_rows();
        let scores: Vec<f64> = self
            .folds
            .par_iter()
            .map(|fold| {
                let mut held = vec![false; n];
                for &i in fold {
                    held[i] = true;
                }
                let fit_idx: Vec<usize> = (0..n).filter(|&i| !held[i]).collect();
                let fit = self.train.subset(&fit_idx);
                let valid = self.train.subset(fold);
                match train_forest(&fit, hp, self.seed) {
                    Ok(model) => auc(&model.predict_all(&valid), valid.labels()),
                    // Folds are checked for both classes up front.
                    Err(_) => 0.0,
                }
            })
            .collect();
        let mean = scores.iter().sum::<f64>() / scores.len() as f64;
        self.cache.lock().expect("cache lock").insert(key, mean);
        mean
    }

    pub fn train(&self) -> &Dataset {
        &self.train
    }
}

impl Objective for CvObjective {
    fn name(&self) -> &str {
        "rf_cv_auc"
    }

    fn search_box(&self) -> &SearchBox {
        &self.search_box
    }

    fn value(&self, x: &[f64], _noise: &mut NoiseStream) -> f64 {
        match RfHyperparams::decode(x) {
            Ok(hp) => -self.cv_auc(&hp),
            Err(_) => 0.0,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TuneResult {
    pub algorithm: Algorithm,
    pub best_hyperparams: RfHyperparams,
    pub cv_auc: f64,
    pub default_hyperparams: RfHyperparams,
    pub default_cv_auc: f64,
    pub test_metrics: ClassificationMetrics,
    pub default_test_metrics: ClassificationMetrics,
    pub record: RunRecord,
}

struct Problem {
    objective: CvObjective,
    test: Dataset,
    seed: u64,
}

impl Problem {
    fn new(data: &Dataset, cv_folds: usize, seed: u64) -> Result<Self> {
        let encoded = data.one_hot();
        let (train, test) = stratified_split(&encoded, TRAIN_RATIO, seed)?;
        if test.is_empty() {
            return Err(Error::Training("held-out split is empty".into()));
        }
        Ok(Self {
            objective: CvObjective::new(train, cv_folds, seed)?,
            test,
            seed,
        })
    }

    fn test_metrics(&self, hp: &RfHyperparams) -> Result<ClassificationMetrics> {
        let model = train_forest(self.objective.train(), hp, self.seed)?;
        evaluate_model(&model, &self.test, 0.5)
    }

    fn run(&self, config: &OptimizerConfig) -> Result<TuneResult> {
        let default = RfHyperparams::default();
        let record = run_optimizer_with(config, &self.objective, &[default.encode()])?;
        let best = RfHyperparams::decode(&record.final_best_position)?;
        Ok(TuneResult {
            algorithm: config.algorithm,
            best_hyperparams: best,
            cv_auc: -record.final_best_fitness,
            default_hyperparams: default,
            default_cv_auc: self.objective.cv_auc(&default),
            test_metrics: self.test_metrics(&best)?,
            default_test_metrics: self.test_metrics(&default)?,
            record,
        })
    }
}

/// Tunes forest hyperparameters on a stratified 70% split of `data` (after
/// one-hot encoding categorical columns) and scores the winner on the
/// remaining 30%. The default configuration is injected as the first
/// individual, so the returned CV AUC never falls below the default's.
pub fn tune(data: &Dataset, config: &OptimizerConfig, cv_folds: usize) -> Result<TuneResult> {
    tune_runs(data, config, cv_folds, 1)
}

/// `runs` optimizer runs with seeds `seed, seed + 1, ...` over one shared
/// split and fold assignment (both keyed by `config.seed`); returns the run
/// with the highest CV AUC, earliest seed on ties.
pub fn tune_runs(
    data: &Dataset,
    config: &OptimizerConfig,
    cv_folds: usize,
    runs: usize,
) -> Result<TuneResult> {
    if runs == 0 {
        return Err(Error::Config("runs must be at least 1".into()));
    }
    config.validate()?;
    let problem = Problem::new(data, cv_folds, config.seed)?;
    let mut best: Option<TuneResult> = None;
    for i in 0..runs as u64 {
        let mut c = config.clone();
        c.seed = config.seed.wrapping_add(i);
        let result = problem.run(&c)?;
        if best.as_ref().map_or(true, |b| result.cv_auc > b.cv_auc) {
            best = Some(result);
        }
    }
    Ok(best.expect("runs >= 1"))
}
