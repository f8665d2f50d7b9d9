use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::run::RunRecord;
use super::stats::BatchStats;
use super::sweep::SweepRow;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportFormat {
    Csv,
    Json,
}

impl ExportFormat {
    /// Guess from the file extension; anything but `.json` is CSV.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("json") => ExportFormat::Json,
            _ => ExportFormat::Csv,
        }
    }
}

/// One line of the best/mean/std table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatsRow {
    pub algorithm: String,
    pub objective: String,
    pub dim: usize,
    pub pop: usize,
    pub iters: usize,
    pub runs: usize,
    pub best: f64,
    pub mean: f64,
    pub std: f64,
}

impl StatsRow {
    pub fn new(record: &RunRecord, stats: &BatchStats) -> Self {
        Self {
            algorithm: record.algorithm.to_string(),
            objective: record.objective.clone(),
            dim: record.dim,
            pop: record.pop_size,
            iters: record.max_iters,
            runs: stats.n_runs,
            best: stats.best,
            mean: stats.mean,
            std: stats.std,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepCsvRow {
    pub param: String,
    pub value: f64,
    pub algorithm: String,
    pub objective: String,
    pub dim: usize,
    pub pop: usize,
    pub iters: usize,
    pub runs: usize,
    pub best: f64,
    pub mean: f64,
    pub std: f64,
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
    }
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| Error::io(path, e))
}

fn finish<W: Write>(path: &Path, mut w: W) -> Result<()> {
    w.flush().map_err(|e| Error::io(path, e))
}

fn csv_error(path: &Path, e: csv::Error) -> Error {
    if !e.is_io_error() {
        return Error::Csv(e);
    }
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::io(path, io),
        _ => unreachable!("is_io_error checked above"),
    }
}

/// Stats table as CSV into any writer.
pub fn write_stats_csv<W: Write>(rows: &[StatsRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush().map_err(|e| Error::Csv(e.into()))?;
    Ok(())
}

pub fn write_stats(rows: &[StatsRow], path: &Path, format: ExportFormat) -> Result<()> {
    let mut file = create(path)?;
    match format {
        ExportFormat::Csv => write_stats_csv(rows, &mut file).map_err(|e| match e {
            Error::Csv(c) => csv_error(path, c),
            other => other,
        })?,
        ExportFormat::Json => serde_json::to_writer_pretty(&mut file, rows)?,
    }
    finish(path, file)
}

pub fn read_stats_csv(path: &Path) -> Result<Vec<StatsRow>> {
    let mut r = csv::Reader::from_path(path).map_err(|e| csv_error(path, e))?;
    r.deserialize()
        .collect::<std::result::Result<Vec<StatsRow>, _>>()
        .map_err(Error::from)
}

pub fn write_sweep_csv<W: Write>(
    param: &str,
    objective: &str,
    dim: usize,
    rows: &[SweepRow],
    out: W,
) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(SweepCsvRow {
            param: param.to_string(),
            value: row.value,
            algorithm: row.config.algorithm.to_string(),
            objective: objective.to_string(),
            dim,
            pop: row.config.pop_size,
            iters: row.config.max_iters,
            runs: row.stats.n_runs,
            best: row.stats.best,
            mean: row.stats.mean,
            std: row.stats.std,
        })?;
    }
    w.flush().map_err(|e| Error::Csv(e.into()))?;
    Ok(())
}

/// `iteration,best_so_far` rows, one per trace entry.
pub fn write_trace_csv<W: Write>(record: &RunRecord, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for p in &record.trace {
        w.serialize(p)?;
    }
    w.flush().map_err(|e| Error::Csv(e.into()))?;
    Ok(())
}

/// Trace CSV or the full record as JSON.
pub fn write_record(record: &RunRecord, path: &Path, format: ExportFormat) -> Result<()> {
    let mut file = create(path)?;
    match format {
        ExportFormat::Csv => write_trace_csv(record, &mut file)?,
        ExportFormat::Json => serde_json::to_writer_pretty(&mut file, record)?,
    }
    finish(path, file)
}
