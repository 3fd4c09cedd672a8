//! Experiment orchestration: configuration, controller comparison grid,
//! lookahead sweep and report emission.

mod config;
mod experiment;
mod report;

pub use config::{
    load_config, load_profile, resolve_config, ExperimentConfig, PathEntry, SweepSection,
    EXPERIMENT_PROFILE, SIMULATION_PROFILE,
};
pub use experiment::{
    run_comparison, run_lookahead_sweep, trial_noise, CellSummary, Comparison, SweepConfig,
    SweepResults, SweepRow, TrialRecord,
};
pub use report::{
    emit_report, emit_sweep_report, format_summary, format_sweep, stability_advisories,
    trajectory_file_name, write_metrics_csv, StabilityAdvisory, METRICS_CSV, SUMMARY_CSV,
    SUMMARY_TXT, SWEEP_CSV, SWEEP_TXT,
};
