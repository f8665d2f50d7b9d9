//! Random-forest classification on the wholesale-customers schema and
//! optimizer-driven hyperparameter tuning.

mod dataset;
mod forest;
mod metrics;
pub mod synthetic;
mod tune;

pub use dataset::{
    load_dataset, load_dataset_from_reader, stratified_folds, stratified_split, Dataset,
};
pub use forest::{gini_impurity, train_forest, train_tree, ForestModel, RfHyperparams, Tree};
pub use metrics::{auc, classification_metrics, evaluate_model, ClassificationMetrics};
pub use tune::{tune, tune_runs, CvObjective, TuneResult};
