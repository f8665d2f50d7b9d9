//! Experiment orchestration: single runs, seeded batches, parameter sweeps
//! and file export.

mod config;
mod export;
mod run;
mod stats;
mod sweep;

pub use config::{Algorithm, InitScheme, OptimizerConfig};
pub use export::{
    read_stats_csv, write_record, write_stats, write_stats_csv, write_sweep_csv, write_trace_csv,
    ExportFormat, StatsRow, SweepCsvRow,
};
pub use run::{run_optimizer, run_optimizer_with, RunRecord, TracePoint};
pub use stats::{run_batch, BatchResult, BatchStats};
pub use sweep::{sweep, SweepParam, SweepRow};
