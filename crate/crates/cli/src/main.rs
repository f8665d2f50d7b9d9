use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use scarab_core::engine::{write_record, write_stats_csv, write_sweep_csv, ExportFormat, StatsRow};
use scarab_core::rf::{load_dataset, tune_runs, ClassificationMetrics, TuneResult};
use scarab_core::{
    run_batch, suite, sweep, Algorithm, Benchmark, BenchmarkKind, Objective, OptimizerConfig,
};
use serde::Serialize;

#[derive(Parser)]
#[command(
    name = "scarab",
    version,
    about = "Dung beetle optimizer benchmarks and tuning"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run seeded batches over the benchmark suite and emit best/mean/std.
    Bench(BenchArgs),
    /// Vary one optimizer parameter and emit one statistics row per value.
    Sweep(SweepArgs),
    /// Tune random-forest hyperparameters on the wholesale-customers data.
    TuneRf(TuneArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgoChoice {
    Dbo,
    Cicrdbo,
    Both,
}

impl AlgoChoice {
    fn algorithms(self) -> Vec<Algorithm> {
        match self {
            AlgoChoice::Dbo => vec![Algorithm::Dbo],
            AlgoChoice::Cicrdbo => vec![Algorithm::Cicrdbo],
            AlgoChoice::Both => vec![Algorithm::Dbo, Algorithm::Cicrdbo],
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SingleAlgo {
    Dbo,
    Cicrdbo,
}

impl From<SingleAlgo> for Algorithm {
    fn from(a: SingleAlgo) -> Self {
        match a {
            SingleAlgo::Dbo => Algorithm::Dbo,
            SingleAlgo::Cicrdbo => Algorithm::Cicrdbo,
        }
    }
}

#[derive(Args)]
struct Budget {
    #[arg(long, default_value_t = 30)]
    pop: usize,
    #[arg(long, default_value_t = 500)]
    iters: usize,
    #[arg(long, default_value_t = 30)]
    runs: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Horizontal crossover probability (cicrdbo).
    #[arg(long)]
    ph: Option<f64>,
    /// Vertical crossover probability (cicrdbo).
    #[arg(long)]
    pv: Option<f64>,
}

impl Budget {
    fn config(&self, algorithm: Algorithm) -> OptimizerConfig {
        let mut c = OptimizerConfig::new(algorithm)
            .with_budget(self.pop, self.iters)
            .with_seed(self.seed);
        if let Some(ph) = self.ph {
            c.crossover.horizontal_prob = ph;
        }
        if let Some(pv) = self.pv {
            c.crossover.vertical_prob = pv;
        }
        c
    }
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, value_enum, default_value = "both")]
    algo: AlgoChoice,
    /// `all` or a comma-separated list of function names.
    #[arg(long, default_value = "all")]
    functions: String,
    #[arg(long, default_value_t = 30)]
    dim: usize,
    #[command(flatten)]
    budget: Budget,
    /// Statistics CSV; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Directory for per-run `iteration,best_so_far` CSV files.
    #[arg(long)]
    trace_dir: Option<PathBuf>,
    /// Print the suite (name, box, formula) and exit.
    #[arg(long)]
    list: bool,
}

#[derive(Args)]
struct SweepArgs {
    /// One of pop_size, max_iters, k, b_roll, ph, pv.
    #[arg(long)]
    param: String,
    #[arg(long, value_delimiter = ',', required = true)]
    values: Vec<f64>,
    #[arg(long)]
    function: String,
    #[arg(long, value_enum, default_value = "cicrdbo")]
    algo: SingleAlgo,
    #[arg(long, default_value_t = 30)]
    dim: usize,
    #[command(flatten)]
    budget: Budget,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct TuneArgs {
    /// Wholesale-customers CSV.
    #[arg(long)]
    data: PathBuf,
    #[arg(long, value_enum, default_value = "cicrdbo")]
    algo: SingleAlgo,
    #[arg(long, default_value_t = 10)]
    pop: usize,
    #[arg(long, default_value_t = 20)]
    iters: usize,
    #[arg(long, default_value_t = 1)]
    runs: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 5)]
    cv_folds: usize,
    /// Result JSON; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also tune with the other algorithm and write a default/dbo/cicrdbo
    /// comparison CSV to FILE (stdout when no FILE is given).
    #[arg(long, num_args = 0..=1, value_name = "FILE")]
    report_table: Option<Option<PathBuf>>,
}

fn open_out(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => {
            if let Some(parent) = p.parent().filter(|p| !p.as_os_str().is_empty()) {
                std::fs::create_dir_all(parent)
                    .with_context(|| format!("cannot create {}", parent.display()))?;
            }
            let f = File::create(p).with_context(|| format!("cannot write {}", p.display()))?;
            Box::new(BufWriter::new(f))
        }
        None => Box::new(io::stdout().lock()),
    })
}

fn select_functions(spec: &str, dim: usize) -> Result<Vec<Benchmark>> {
    let all = suite(dim)?;
    if spec == "all" {
        return Ok(all.iter().cloned().collect());
    }
    spec.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|name| {
            all.get(name)
                .cloned()
                .with_context(|| format!("unknown function `{name}`"))
        })
        .collect()
}

fn bench(args: BenchArgs) -> Result<()> {
    if args.list {
        let mut out = io::stdout().lock();
        for kind in BenchmarkKind::ALL {
            let (lo, hi) = kind.bounds();
            writeln!(out, "{:<14} [{lo}, {hi}]  {}", kind.name(), kind.formula())?;
        }
        return Ok(());
    }
    let functions = select_functions(&args.functions, args.dim)?;
    if functions.is_empty() {
        bail!("no functions selected");
    }
    let mut rows = Vec::new();
    for objective in &functions {
        for algorithm in args.algo.algorithms() {
            let config = args.budget.config(algorithm);
            let batch = run_batch(&config, objective, args.budget.runs)
                .with_context(|| format!("{algorithm} on {}", objective.name()))?;
            if let Some(dir) = &args.trace_dir {
                for rec in &batch.records {
                    let path = dir.join(format!(
                        "{}_{}_seed{}.csv",
                        algorithm,
                        objective.name(),
                        rec.seed
                    ));
                    write_record(rec, &path, ExportFormat::Csv)?;
                }
            }
            rows.push(StatsRow::new(&batch.records[0], &batch.stats));
        }
    }
    let mut out = open_out(args.out.as_deref())?;
    write_stats_csv(&rows, &mut out)?;
    out.flush()?;
    Ok(())
}

fn run_sweep(args: SweepArgs) -> Result<()> {
    let objective = select_functions(&args.function, args.dim)?
        .into_iter()
        .next()
        .context("no function given")?;
    let base = args.budget.config(args.algo.into());
    let rows = sweep(
        &base,
        &objective,
        &args.param,
        &args.values,
        args.budget.runs,
    )?;
    let mut out = open_out(args.out.as_deref())?;
    write_sweep_csv(&args.param, objective.name(), args.dim, &rows, &mut out)?;
    out.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct TuneOutput<'a> {
    algorithm: Algorithm,
    best_hyperparams: &'a scarab_core::rf::RfHyperparams,
    cv_auc: f64,
    test_precision: f64,
    test_recall: f64,
    test_f1: f64,
    test_auc: f64,
    default_cv_auc: f64,
    seed: u64,
}

impl<'a> TuneOutput<'a> {
    fn new(r: &'a TuneResult) -> Self {
        Self {
            algorithm: r.algorithm,
            best_hyperparams: &r.best_hyperparams,
            cv_auc: r.cv_auc,
            test_precision: r.test_metrics.precision,
            test_recall: r.test_metrics.recall,
            test_f1: r.test_metrics.f1,
            test_auc: r.test_metrics.auc,
            default_cv_auc: r.default_cv_auc,
            seed: r.record.seed,
        }
    }
}

fn write_table<W: Write>(rows: &[(&str, ClassificationMetrics)], out: W) -> Result<()> {
    let mut w = BufWriter::new(out);
    w.write_all(b"Models,Precision,Recall,F1 Score,AUC\n")?;
    for (name, m) in rows {
        writeln!(w, "{name},{},{},{},{}", m.precision, m.recall, m.f1, m.auc)?;
    }
    w.flush()?;
    Ok(())
}

fn tune_rf(args: TuneArgs) -> Result<()> {
    let data = load_dataset(&args.data)?;
    let config_for = |algorithm: Algorithm| {
        OptimizerConfig::new(algorithm)
            .with_budget(args.pop, args.iters)
            .with_seed(args.seed)
    };
    let algorithm: Algorithm = args.algo.into();
    let result = tune_runs(&data, &config_for(algorithm), args.cv_folds, args.runs)?;

    let mut out = open_out(args.out.as_deref())?;
    serde_json::to_writer_pretty(&mut out, &TuneOutput::new(&result))?;
    writeln!(out)?;
    out.flush()?;
    drop(out);

    if let Some(table_path) = args.report_table {
        let other = match algorithm {
            Algorithm::Dbo => Algorithm::Cicrdbo,
            Algorithm::Cicrdbo => Algorithm::Dbo,
        };
        let other_result = tune_runs(&data, &config_for(other), args.cv_folds, args.runs)?;
        let (dbo, cicrdbo) = match algorithm {
            Algorithm::Dbo => (&result, &other_result),
            Algorithm::Cicrdbo => (&other_result, &result),
        };
        let rows = [
            ("Default Parameters", result.default_test_metrics),
            ("DBO", dbo.test_metrics),
            ("CICRDBO", cicrdbo.test_metrics),
        ];
        write_table(&rows, open_out(table_path.as_deref())?)?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Bench(a) => bench(a),
        Command::Sweep(a) => run_sweep(a),
        Command::TuneRf(a) => tune_rf(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
