//! Dung beetle optimizer (DBO) and its circle-map + crisscross variant
//! (CICRDBO), a ten-function benchmark suite, an experiment engine, and a
//! random-forest hyperparameter tuner built on top of them.

pub mod chaos;
pub mod crisscross;
pub mod dbo;
pub mod engine;
pub mod error;
pub mod objectives;
pub mod rf;
pub mod rng;
pub mod space;
pub mod swarm;

pub use chaos::{chaotic_sequence, circle_step, init_population, CircleParams};
pub use crisscross::{
    apply_crisscross, compete, horizontal_cross, vertical_cross, CrossoverParams,
};
pub use dbo::{dbo_step, DboParams};
pub use engine::{
    run_batch, run_optimizer, run_optimizer_with, sweep, Algorithm, BatchResult, BatchStats,
    InitScheme, OptimizerConfig, RunRecord, TracePoint,
};
pub use error::{Error, Result};
pub use objectives::{suite, Benchmark, BenchmarkKind, BenchmarkSuite, Objective};
pub use rng::{Draws, Stream};
pub use space::SearchBox;
pub use swarm::{Individual, Role, RoleCounts, SwarmState};
