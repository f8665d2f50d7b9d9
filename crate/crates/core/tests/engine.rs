use proptest::prelude::*;
use scarab_core::engine::{read_stats_csv, write_record, write_stats, ExportFormat, StatsRow};
use scarab_core::{
    run_batch, run_optimizer, sweep, BatchStats, Benchmark, BenchmarkKind, Error, OptimizerConfig,
    RunRecord,
};

fn sphere(dim: usize) -> Benchmark {
    Benchmark::new(BenchmarkKind::Sphere, dim).unwrap()
}

fn same_run(a: &RunRecord, b: &RunRecord) -> bool {
    let mut b = b.clone();
    b.wall_time = a.wall_time;
    *a == b
}

fn is_non_increasing(r: &RunRecord) -> bool {
    r.trace
        .windows(2)
        .all(|w| w[1].best_so_far <= w[0].best_so_far)
}

#[test]
fn identical_config_gives_identical_record() {
    for config in [OptimizerConfig::dbo(), OptimizerConfig::cicrdbo()] {
        let c = config.with_budget(12, 40).with_seed(31);
        let obj = Benchmark::new(BenchmarkKind::Quartic, 6).unwrap();
        let a = run_optimizer(&c, &obj).unwrap();
        let b = run_optimizer(&c, &obj).unwrap();
        assert!(same_run(&a, &b));
        assert_eq!(
            serde_json::to_string(&a.trace).unwrap(),
            serde_json::to_string(&b.trace).unwrap()
        );
    }
}

#[test]
fn single_iteration_trace() {
    let c = OptimizerConfig::cicrdbo().with_budget(8, 1).with_seed(3);
    let r = run_optimizer(&c, &sphere(4)).unwrap();
    assert_eq!(r.trace.len(), 2);
    assert!(r.trace[1].best_so_far <= r.trace[0].best_so_far);
    assert_eq!(r.trace[1].iteration, 1);
}

#[test]
fn small_cicrdbo_run_improves_on_initial_best() {
    let c = OptimizerConfig::cicrdbo().with_budget(10, 50).with_seed(7);
    let r = run_optimizer(&c, &sphere(2)).unwrap();
    assert!(r.final_best_fitness <= r.trace[0].best_so_far);
    assert_eq!(r.final_best_fitness, r.trace.last().unwrap().best_so_far);
    assert_eq!(r.trace.len(), 51);
}

#[test]
fn invalid_config_fails_before_running() {
    let c = OptimizerConfig::dbo().with_budget(1, 10);
    assert!(matches!(
        run_optimizer(&c, &sphere(3)),
        Err(Error::Config(_))
    ));
}

#[test]
fn batch_seeds_are_consecutive() {
    let c = OptimizerConfig::cicrdbo()
        .with_budget(10, 20)
        .with_seed(100);
    let obj = sphere(5);
    let batch = run_batch(&c, &obj, 4).unwrap();
    for (i, rec) in batch.records.iter().enumerate() {
        assert_eq!(rec.seed, 100 + i as u64);
        let solo = run_optimizer(&c.clone().with_seed(100 + i as u64), &obj).unwrap();
        assert!(same_run(rec, &solo));
    }
}

#[test]
fn batch_statistics_match_reference() {
    let c = OptimizerConfig::dbo().with_budget(10, 30).with_seed(5);
    let batch = run_batch(&c, &Benchmark::new(BenchmarkKind::Rastrigin, 5).unwrap(), 9).unwrap();
    let v: Vec<f64> = batch.records.iter().map(|r| r.final_best_fitness).collect();
    let min = v.iter().cloned().fold(f64::INFINITY, f64::min);
    // Two-pass reference with a separately accumulated mean.
    let mut mean = 0.0;
    for x in &v {
        mean += x;
    }
    mean /= v.len() as f64;
    let var = v.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / v.len() as f64;
    let s = batch.stats;
    assert_eq!(s.best, min);
    assert!((s.mean - mean).abs() <= 1e-12 * mean.abs().max(1e-300));
    assert!((s.std - var.sqrt()).abs() <= 1e-12 * var.sqrt().max(1e-300));
    assert!(s.best <= s.mean && s.std >= 0.0);

    let one = run_batch(&c, &sphere(3), 1).unwrap().stats;
    assert_eq!(one.best, one.mean);
    assert_eq!(one.std, 0.0);
    assert!(run_batch(&c, &sphere(3), 0).is_err());
}

#[test]
fn sweep_rows_and_rejection() {
    let base = OptimizerConfig::cicrdbo().with_budget(10, 10).with_seed(1);
    let rows = sweep(&base, &sphere(3), "pop_size", &[10.0, 30.0], 2).unwrap();
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[0].config.pop_size, 10);
    assert_eq!(rows[1].config.pop_size, 30);
    assert!(matches!(
        sweep(&base, &sphere(3), "banana", &[1.0], 2),
        Err(Error::Config(_))
    ));
}

#[test]
fn each_budget_gives_a_monotone_trace() {
    let obj = Benchmark::new(BenchmarkKind::Ackley, 10).unwrap();
    for iters in [20, 60, 100] {
        let c = OptimizerConfig::cicrdbo()
            .with_budget(15, iters)
            .with_seed(4);
        let batch = run_batch(&c, &obj, 3).unwrap();
        assert!(batch.records.iter().all(is_non_increasing));
        assert!(batch.records.iter().all(|r| r.trace.len() == iters + 1));
    }
}

#[test]
fn stats_csv_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("stats.csv");
    let rows = vec![
        StatsRow {
            algorithm: "cicrdbo".into(),
            objective: "sphere".into(),
            dim: 30,
            pop: 30,
            iters: 500,
            runs: 30,
            best: 1.234_567_890_123_456_7e-200,
            mean: 0.1 + 0.2,
            std: 3.0_f64.sqrt(),
        },
        StatsRow {
            algorithm: "dbo".into(),
            objective: "ackley".into(),
            dim: 30,
            pop: 30,
            iters: 500,
            runs: 30,
            best: 0.0,
            mean: 8.881_784_197_001_252e-16,
            std: 0.0,
        },
    ];
    write_stats(&rows, &path, ExportFormat::Csv).unwrap();
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("algorithm,objective,dim,pop,iters,runs,best,mean,std\n"));
    assert_eq!(read_stats_csv(&path).unwrap(), rows);
}

#[test]
fn record_exports_have_one_row_per_iteration() {
    let dir = tempfile::tempdir().unwrap();
    let c = OptimizerConfig::dbo().with_budget(5, 500).with_seed(2);
    let rec = run_optimizer(&c, &sphere(2)).unwrap();

    let json_path = dir.path().join("run.json");
    write_record(&rec, &json_path, ExportFormat::Json).unwrap();
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&json_path).unwrap()).unwrap();
    assert_eq!(json["trace"].as_array().unwrap().len(), 501);
    assert_eq!(
        json["final_best_fitness"].as_f64().unwrap(),
        rec.final_best_fitness
    );

    let csv_path = dir.path().join("nested/trace.csv");
    write_record(&rec, &csv_path, ExportFormat::Csv).unwrap();
    let mut rdr = csv::Reader::from_path(&csv_path).unwrap();
    assert_eq!(rdr.headers().unwrap(), vec!["iteration", "best_so_far"]);
    let rows: Vec<csv::StringRecord> = rdr.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 501);
    let last: f64 = rows[500][1].parse().unwrap();
    assert_eq!(last, rec.final_best_fitness);
}

#[test]
fn unwritable_path_names_the_path() {
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("file");
    std::fs::write(&blocker, b"x").unwrap();
    let path = blocker.join("out.csv");
    let err = write_stats(&[], &path, ExportFormat::Csv).unwrap_err();
    assert!(matches!(err, Error::Io { .. }));
    assert!(err.to_string().contains("out.csv") || err.to_string().contains("file"));
}

#[test]
fn batch_stats_from_two_points() {
    let s = BatchStats::from_values(&[1.0, 3.0]).unwrap();
    assert_eq!((s.best, s.mean, s.std), (1.0, 2.0, 1.0));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn traces_never_increase(seed in any::<u64>(), cicr in any::<bool>(), kind_ix in 0usize..10) {
        let c = if cicr { OptimizerConfig::cicrdbo() } else { OptimizerConfig::dbo() };
        let c = c.with_budget(10, 30).with_seed(seed);
        let obj = Benchmark::new(BenchmarkKind::ALL[kind_ix], 4).unwrap();
        let r = run_optimizer(&c, &obj).unwrap();
        prop_assert!(is_non_increasing(&r));
        prop_assert_eq!(r.trace.len(), 31);
    }
}
