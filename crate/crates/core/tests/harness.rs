use std::collections::BTreeSet;

use dwpp_core::controllers::ControllerKind;
use dwpp_core::harness::{
    emit_report, emit_sweep_report, load_profile, run_comparison, run_lookahead_sweep,
    trajectory_file_name, ExperimentConfig, PathEntry, SweepConfig, EXPERIMENT_PROFILE,
    METRICS_CSV, SIMULATION_PROFILE, SUMMARY_CSV, SUMMARY_TXT,
};

#[test]
fn default_profile_runs_sixty_scenarios_once_each() {
    let config = load_profile(EXPERIMENT_PROFILE).unwrap();
    let comparison = run_comparison(&config).unwrap();
    assert_eq!(comparison.trials.len(), 60);
    assert_eq!(comparison.cells.len(), 12);
    let keys: BTreeSet<_> = comparison
        .trials
        .iter()
        .map(|t| (t.path.clone(), t.controller.name(), t.trial))
        .collect();
    assert_eq!(keys.len(), 60);

    let dir = tempfile::tempdir().unwrap();
    let summary = emit_report(&comparison, dir.path()).unwrap();
    let trajectories = std::fs::read_dir(dir.path())
        .unwrap()
        .filter(|e| {
            e.as_ref()
                .unwrap()
                .file_name()
                .to_string_lossy()
                .starts_with("trajectory_")
        })
        .count();
    assert_eq!(trajectories, 60);
    assert!(dir
        .path()
        .join(trajectory_file_name("C", ControllerKind::Dwpp, 4))
        .exists());

    let metrics = std::fs::read_to_string(dir.path().join(METRICS_CSV)).unwrap();
    assert_eq!(metrics.lines().count(), 61);
    assert!(metrics.starts_with(
        "path,controller,trial,seed,violation_ratio,mean_cte,max_cte,travel_time,reached_goal\n"
    ));
    assert_eq!(
        std::fs::read_to_string(dir.path().join(SUMMARY_CSV))
            .unwrap()
            .lines()
            .count(),
        13
    );
    assert_eq!(
        std::fs::read_to_string(dir.path().join(SUMMARY_TXT)).unwrap(),
        summary
    );
    for title in [
        "violation ratio",
        "Mean cross track",
        "Max cross track",
        "Travel time",
    ] {
        assert!(summary.contains(title), "missing table {title}");
    }
    assert!(summary.contains("DWPP: L = 0.700"));
}

#[test]
fn dwpp_column_is_zero_with_spread_from_noise() {
    let config = ExperimentConfig {
        controllers: vec![ControllerKind::Dwpp],
        ..ExperimentConfig::default()
    };
    let comparison = run_comparison(&config).unwrap();
    for cell in &comparison.cells {
        assert_eq!(cell.aggregate.violation_ratio.mean, 0.0);
        assert_eq!(cell.aggregate.violation_ratio.sd, 0.0);
        assert_eq!(cell.aggregate.trial_count, 5);
        assert!(cell.aggregate.mean_cte.sd > 0.0, "{}: no spread", cell.path);
    }
    let seeds: Vec<u64> = comparison.trials.iter().take(5).map(|t| t.seed).collect();
    assert_eq!(seeds, vec![0, 1, 2, 3, 4]);
}

#[test]
fn single_run_has_zero_spread() {
    let config = ExperimentConfig {
        trials: 1,
        controllers: vec![ControllerKind::Rpp],
        paths: vec![PathEntry::new("B", 90.0)],
        ..ExperimentConfig::default()
    };
    let comparison = run_comparison(&config).unwrap();
    assert_eq!(comparison.trials.len(), 1);
    let agg = &comparison.cells[0].aggregate;
    assert_eq!(
        (agg.mean_cte.sd, agg.travel_time.sd, agg.violation_ratio.sd),
        (0.0, 0.0, 0.0)
    );
    assert_eq!(agg.reached_count, 1);
}

#[test]
fn sweep_rows_follow_configured_values() {
    let config = load_profile(SIMULATION_PROFILE).unwrap();
    let sweep = SweepConfig::from_experiment(config.clone()).unwrap();
    let results = run_lookahead_sweep(&sweep).unwrap();
    assert_eq!(results.path, "C");
    let ls: Vec<f64> = results.rows.iter().map(|r| r.lookahead).collect();
    assert_eq!(ls, vec![0.26, 0.39, 0.52, 0.65, 0.78, 0.91, 1.04]);
    assert!(results
        .rows
        .iter()
        .all(|r| r.reached_count == 1 && r.trial_count == 1));

    let dir = tempfile::tempdir().unwrap();
    let csv = emit_sweep_report(&results, &config, dir.path()).unwrap();
    let text = std::fs::read_to_string(csv).unwrap();
    let mut lines = text.lines();
    assert!(lines
        .next()
        .unwrap()
        .starts_with("lookahead,mean_cte,travel_time"));
    let first: Vec<f64> = lines
        .map(|l| l.split(',').next().unwrap().parse().unwrap())
        .collect();
    assert_eq!(first, ls);
}

#[test]
fn single_lookahead_gives_single_row() {
    let config = load_profile(SIMULATION_PROFILE).unwrap();
    let results = run_lookahead_sweep(&SweepConfig::new(config, vec![0.5]).unwrap()).unwrap();
    assert_eq!(results.rows.len(), 1);
}

#[test]
fn invalid_sweep_values_rejected() {
    let config = load_profile(SIMULATION_PROFILE).unwrap();
    assert!(SweepConfig::new(config.clone(), vec![]).is_err());
    assert!(SweepConfig::new(config.clone(), vec![0.5, 0.5]).is_err());
    assert!(SweepConfig::new(config, vec![-0.1]).is_err());
}

#[test]
fn unwritable_output_reports_path() {
    let comparison = run_comparison(&ExperimentConfig {
        trials: 1,
        controllers: vec![ControllerKind::Pp],
        paths: vec![PathEntry::new("A", 45.0)],
        ..ExperimentConfig::default()
    })
    .unwrap();
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("file");
    std::fs::write(&blocker, "").unwrap();
    let err = emit_report(&comparison, &blocker.join("out")).unwrap_err();
    assert!(err.to_string().contains("file"), "{err}");
}
