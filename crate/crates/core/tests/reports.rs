use std::fs;

use gkbo::harness::{
    emit_report, read_summary, run_experiment, sweep, Axis, ConfigFile, ReportOptions, RunConfig,
    RUNS_HEADER, SUMMARY_HEADER,
};

fn quick() -> RunConfig {
    let mut cfg = RunConfig::default();
    cfg.experiment.dimension = 4;
    cfg.experiment.n = 40;
    cfg.experiment.max_iter = 60;
    cfg
}

#[test]
fn empty_report_list_writes_headers_only() {
    let tmp = tempfile::tempdir().unwrap();
    emit_report(&[], tmp.path(), ReportOptions::default()).unwrap();
    let runs = fs::read_to_string(tmp.path().join("runs.csv")).unwrap();
    let summary = fs::read_to_string(tmp.path().join("summary.csv")).unwrap();
    assert_eq!(runs, format!("{}\n", RUNS_HEADER.join(",")));
    assert_eq!(summary, format!("{}\n", SUMMARY_HEADER.join(",")));
}

#[test]
fn one_point_twenty_runs() {
    let tmp = tempfile::tempdir().unwrap();
    let rep = run_experiment(&quick(), 20, 0).unwrap();
    emit_report(&[rep], tmp.path(), ReportOptions::default()).unwrap();
    let runs = fs::read_to_string(tmp.path().join("runs.csv")).unwrap();
    assert_eq!(runs.lines().count(), 21);
    let summary = read_summary(tmp.path().join("summary.csv")).unwrap();
    assert_eq!(summary.len(), 1);
    assert_eq!(summary[0].m, 20);
    assert_eq!(summary[0].rho1_target, Some(0.5));
    assert_eq!(summary[0].p_bar, None);
    // wall time stays blank unless requested
    assert!(runs.lines().skip(1).all(|l| l.ends_with(',')));
}

#[test]
fn run_rows_agree_with_summary() {
    let tmp = tempfile::tempdir().unwrap();
    let axes = [
        Axis::new("strategy", ["random", "mixed"]),
        Axis::new("sigma_f", [1.0, 3.0]),
    ];
    let reports = sweep(&quick(), &axes, 4, 9).unwrap();
    emit_report(
        &reports,
        tmp.path(),
        ReportOptions {
            wall_time: true,
            plots: false,
        },
    )
    .unwrap();

    let mut reader = csv::Reader::from_path(tmp.path().join("runs.csv")).unwrap();
    let rows: Vec<gkbo::harness::RunRow> = reader.deserialize().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 16);
    let summary = read_summary(tmp.path().join("summary.csv")).unwrap();
    for s in &summary {
        let mine: Vec<_> = rows
            .iter()
            .filter(|r| r.experiment_id == s.experiment_id)
            .collect();
        let successes = mine.iter().filter(|r| r.success).count();
        assert_eq!(successes, s.successes);
        let mean = mine.iter().map(|r| r.iterations as f64).sum::<f64>() / mine.len() as f64;
        assert!((mean - s.iter_mean.unwrap()).abs() < 1e-9);
        for r in &mine {
            assert_eq!(r.success, r.final_accuracy <= 0.25);
            assert!(r.wall_time_ms.is_some());
        }
    }
    assert_eq!(summary[0].grid, "strategy=random sigma_f=1");
    assert_eq!(summary[2].p_bar, Some(0.5));
}

#[test]
fn table_layout_has_nine_rows() {
    let text = fs::read_to_string(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/../../configs/table1.toml"
    ))
    .unwrap();
    let file = ConfigFile::parse(&text).unwrap();
    let mut cfg = file.run.clone();
    cfg.experiment.max_iter = 3;
    cfg.experiment.dimension = 2;
    let reports = sweep(&cfg, &file.axes, 1, 0).unwrap();
    let tmp = tempfile::tempdir().unwrap();
    emit_report(&reports, tmp.path(), ReportOptions::default()).unwrap();
    let summary = read_summary(tmp.path().join("summary.csv")).unwrap();
    assert_eq!(summary.len(), 9);
    let masses: Vec<f64> = summary.iter().map(|s| s.rho1_target.unwrap()).collect();
    for (got, want) in masses[..3].iter().zip([0.25, 0.5, 0.75]) {
        assert!((got - want).abs() < 1e-12, "{got}");
    }
}

#[test]
fn invalid_grid_points_are_reported() {
    let tmp = tempfile::tempdir().unwrap();
    let axes = [Axis::new("rho1_target", [0.5, 1.5])];
    let mut cfg = quick();
    cfg.transition.strategy = gkbo::harness::Strategy::Weighted;
    let reports = sweep(&cfg, &axes, 2, 0).unwrap();
    emit_report(
        &reports,
        tmp.path(),
        ReportOptions {
            wall_time: false,
            plots: true,
        },
    )
    .unwrap();
    let summary = read_summary(tmp.path().join("summary.csv")).unwrap();
    assert_eq!(summary.len(), 2);
    assert!(summary[0].error.is_none());
    assert!(summary[1].error.as_deref().unwrap().contains("rho1_target"));
    assert_eq!(summary[1].m, 0);
    let runs = fs::read_to_string(tmp.path().join("runs.csv")).unwrap();
    assert_eq!(runs.lines().count(), 3);
}

#[test]
fn every_shipped_config_parses() {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/../../configs");
    let mut seen = 0;
    for entry in fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().is_some_and(|e| e == "toml") {
            let file = ConfigFile::load(&path).unwrap();
            file.run.validate(&gkbo::Registry::builtin()).unwrap();
            seen += 1;
        }
    }
    assert!(seen >= 8, "{seen}");
}
