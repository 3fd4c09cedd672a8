//! Text and CSV output for comparison runs and lookahead sweeps.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use super::config::ExperimentConfig;
use super::experiment::{Comparison, SweepResults};
use crate::controllers::{effective_lookahead, min_stable_lookahead, ControllerKind};
use crate::error::{Error, Result};
use crate::metrics::{AggregateMetrics, Stat};

pub const METRICS_CSV: &str = "metrics.csv";
pub const SUMMARY_CSV: &str = "summary.csv";
pub const SUMMARY_TXT: &str = "summary.txt";
pub const SWEEP_CSV: &str = "sweep.csv";
pub const SWEEP_TXT: &str = "sweep.txt";

/// File name of a per-trial trajectory log.
pub fn trajectory_file_name(path: &str, controller: ControllerKind, trial: usize) -> String {
    format!("trajectory_{path}_{controller}_{trial}.csv")
}

/// Result of the stability check for one controller.
#[derive(Debug, Clone, PartialEq)]
pub struct StabilityAdvisory {
    pub label: String,
    pub lookahead: f64,
    pub velocity: f64,
    pub required: f64,
}

impl StabilityAdvisory {
    pub fn satisfied(&self) -> bool {
        self.lookahead >= self.required
    }

    fn line(&self) -> String {
        format!(
            "{}: L = {:.3} m at v = {:.3} m/s, minimum stable L = {:.3} m: {}",
            self.label,
            self.lookahead,
            self.velocity,
            self.required,
            if self.satisfied() { "ok" } else { "VIOLATED" }
        )
    }
}

/// Lookahead each configured controller uses at top speed, against the
/// minimum stable lookahead at that speed.
pub fn stability_advisories(config: &ExperimentConfig) -> Vec<StabilityAdvisory> {
    let v = config.limits.v_max;
    config
        .controllers
        .iter()
        .map(|kind| {
            let lookahead = match kind {
                ControllerKind::Pp => config.lookahead.fixed,
                _ => effective_lookahead(&config.lookahead, v),
            };
            StabilityAdvisory {
                label: kind.to_string(),
                lookahead,
                velocity: v,
                required: min_stable_lookahead(v, &config.stability),
            }
        })
        .collect()
}

fn table(
    out: &mut String,
    title: &str,
    comparison: &Comparison,
    precision: usize,
    pick: fn(&AggregateMetrics) -> Stat,
) {
    let controllers = &comparison.config.controllers;
    let _ = writeln!(out, "{title} (Mean ± SD)");
    let _ = write!(out, "{:<8}", "Path");
    for c in controllers {
        let _ = write!(out, " {:>16}", c.name());
    }
    out.push('\n');
    for entry in &comparison.config.paths {
        let _ = write!(out, "{:<8}", entry.name);
        for &c in controllers {
            let cell = comparison
                .cell(&entry.name, c)
                .map(|cell| pick(&cell.aggregate))
                .map(|s| format!("{:.p$} ± {:.p$}", s.mean, s.sd, p = precision))
                .unwrap_or_else(|| "-".into());
            let _ = write!(out, " {cell:>16}");
        }
        out.push('\n');
    }
    out.push('\n');
}

/// Plain-text summary: four metric tables (rows = paths, columns =
/// controllers), goal-reach counts and stability advisories.
pub fn format_summary(comparison: &Comparison) -> Result<String> {
    if comparison.cells.is_empty() {
        return Err(Error::invalid("no results to report"));
    }
    let config = &comparison.config;
    let mut out = String::new();
    let _ = writeln!(
        out,
        "Controller comparison: {} trial(s) per cell, base seed {}.",
        config.trials, config.noise.seed
    );
    let _ = writeln!(
        out,
        "Spread across trials comes from seeded initial-pose perturbation in a kinematic \
         simulator; it is not comparable to real-robot run-to-run variability.\n"
    );
    table(
        &mut out,
        "Constraint violation ratio [%]",
        comparison,
        1,
        |a| a.violation_ratio,
    );
    table(&mut out, "Mean cross track error [m]", comparison, 3, |a| {
        a.mean_cte
    });
    table(&mut out, "Max cross track error [m]", comparison, 3, |a| {
        a.max_cte
    });
    table(&mut out, "Travel time [s]", comparison, 2, |a| {
        a.travel_time
    });

    let unreached: Vec<_> = comparison
        .cells
        .iter()
        .filter(|c| c.aggregate.reached_count < c.aggregate.trial_count)
        .map(|c| {
            format!(
                "{}/{}: {} of {} trials timed out",
                c.path,
                c.controller,
                c.aggregate.trial_count - c.aggregate.reached_count,
                c.aggregate.trial_count
            )
        })
        .collect();
    if !unreached.is_empty() {
        let _ = writeln!(out, "Goal not reached:");
        for line in unreached {
            let _ = writeln!(out, "  {line}");
        }
        out.push('\n');
    }

    let _ = writeln!(
        out,
        "Stability advisory (T = {} s, L'_min = {}):",
        config.stability.time_constant, config.stability.min_nondimensional_lookahead
    );
    for advisory in stability_advisories(config) {
        let _ = writeln!(out, "  {}", advisory.line());
    }
    Ok(out)
}

#[derive(Serialize)]
struct MetricsRow<'a> {
    path: &'a str,
    controller: &'a str,
    trial: usize,
    seed: u64,
    violation_ratio: f64,
    mean_cte: f64,
    max_cte: f64,
    travel_time: f64,
    reached_goal: bool,
}

#[derive(Serialize)]
struct SummaryRow<'a> {
    path: &'a str,
    controller: &'a str,
    trials: usize,
    reached: usize,
    violation_ratio_mean: f64,
    violation_ratio_sd: f64,
    mean_cte_mean: f64,
    mean_cte_sd: f64,
    max_cte_mean: f64,
    max_cte_sd: f64,
    travel_time_mean: f64,
    travel_time_sd: f64,
}

#[derive(Serialize)]
struct SweepCsvRow {
    lookahead: f64,
    mean_cte: f64,
    travel_time: f64,
    max_cte: f64,
    reached: usize,
    trials: usize,
}

fn write_rows<T: Serialize>(path: &Path, rows: impl IntoIterator<Item = T>) -> Result<()> {
    let csv_err = |source| Error::Csv {
        path: path.to_path_buf(),
        source,
    };
    let mut writer = csv::Writer::from_path(path).map_err(csv_err)?;
    for row in rows {
        writer.serialize(row).map_err(csv_err)?;
    }
    writer.flush().map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn ensure_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|source| Error::Io {
        path: dir.to_path_buf(),
        source,
    })
}

/// Writes the per-trial metrics CSV only.
pub fn write_metrics_csv(comparison: &Comparison, path: &Path) -> Result<()> {
    write_rows(
        path,
        comparison.trials.iter().map(|t| MetricsRow {
            path: &t.path,
            controller: t.controller.name(),
            trial: t.trial,
            seed: t.seed,
            violation_ratio: t.metrics.violation_ratio,
            mean_cte: t.metrics.mean_cte,
            max_cte: t.metrics.max_cte,
            travel_time: t.metrics.travel_time,
            reached_goal: t.metrics.reached_goal,
        }),
    )
}

/// Writes trajectories, the metrics CSV, the summary CSV and the text
/// summary into `dir`. Returns the text summary.
pub fn emit_report(comparison: &Comparison, dir: &Path) -> Result<String> {
    let summary = format_summary(comparison)?;
    ensure_dir(dir)?;
    for t in &comparison.trials {
        let file = dir.join(trajectory_file_name(&t.path, t.controller, t.trial));
        t.result.log.write_csv(&file)?;
    }
    write_metrics_csv(comparison, &dir.join(METRICS_CSV))?;
    write_rows(
        &dir.join(SUMMARY_CSV),
        comparison.cells.iter().map(|c| {
            let a = &c.aggregate;
            SummaryRow {
                path: &c.path,
                controller: c.controller.name(),
                trials: a.trial_count,
                reached: a.reached_count,
                violation_ratio_mean: a.violation_ratio.mean,
                violation_ratio_sd: a.violation_ratio.sd,
                mean_cte_mean: a.mean_cte.mean,
                mean_cte_sd: a.mean_cte.sd,
                max_cte_mean: a.max_cte.mean,
                max_cte_sd: a.max_cte.sd,
                travel_time_mean: a.travel_time.mean,
                travel_time_sd: a.travel_time.sd,
            }
        }),
    )?;
    write_text(&dir.join(SUMMARY_TXT), &summary)?;
    Ok(summary)
}

pub fn format_sweep(results: &SweepResults, config: &ExperimentConfig) -> Result<String> {
    if results.rows.is_empty() {
        return Err(Error::invalid("no sweep results to report"));
    }
    let mut out = String::new();
    let _ = writeln!(
        out,
        "DWPP lookahead sweep on path {} (fixed lookahead, regulation disabled, v_max = {} m/s)\n",
        results.path, config.limits.v_max
    );
    let _ = writeln!(
        out,
        "{:>8} {:>14} {:>14} {:>14} {:>8}",
        "L [m]", "mean CTE [m]", "max CTE [m]", "time [s]", "reached"
    );
    for row in &results.rows {
        let _ = writeln!(
            out,
            "{:>8.3} {:>14.4} {:>14.4} {:>14.2} {:>5}/{}",
            row.lookahead,
            row.mean_cte.mean,
            row.max_cte.mean,
            row.travel_time.mean,
            row.reached_count,
            row.trial_count
        );
    }
    let v = config.limits.v_max;
    let required = min_stable_lookahead(v, &config.stability);
    let _ = writeln!(
        out,
        "\nStability advisory at v = {v} m/s (minimum stable L = {required:.3} m):"
    );
    for row in &results.rows {
        let advisory = StabilityAdvisory {
            label: format!("DWPP L={}", row.lookahead),
            lookahead: row.lookahead,
            velocity: v,
            required,
        };
        let _ = writeln!(out, "  {}", advisory.line());
    }
    Ok(out)
}

/// Writes `sweep.csv` (lookahead, mean_cte, travel_time, ...) and
/// `sweep.txt` into `dir`. Returns the written CSV path.
pub fn emit_sweep_report(
    results: &SweepResults,
    config: &ExperimentConfig,
    dir: &Path,
) -> Result<PathBuf> {
    let text = format_sweep(results, config)?;
    ensure_dir(dir)?;
    let csv_path = dir.join(SWEEP_CSV);
    write_rows(
        &csv_path,
        results.rows.iter().map(|r| SweepCsvRow {
            lookahead: r.lookahead,
            mean_cte: r.mean_cte.mean,
            travel_time: r.travel_time.mean,
            max_cte: r.max_cte.mean,
            reached: r.reached_count,
            trials: r.trial_count,
        }),
    )?;
    write_text(&dir.join(SWEEP_TXT), &text)?;
    Ok(csv_path)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::controllers::LookaheadMode;

    #[test]
    fn default_stability_advisory_is_satisfied() {
        let mut config = ExperimentConfig::default();
        config.lookahead.mode = LookaheadMode::Fixed;
        let advisories = stability_advisories(&config);
        let pp = &advisories[0];
        assert_eq!(pp.label, "PP");
        assert_eq!((pp.lookahead, pp.velocity), (0.6, 0.5));
        assert!((pp.required - 0.4).abs() < 1e-12);
        assert!(pp.satisfied());
    }

    #[test]
    fn short_lookahead_is_flagged() {
        let mut config = ExperimentConfig::default();
        config.lookahead.fixed = 0.3;
        let pp = &stability_advisories(&config)[0];
        assert!(!pp.satisfied());
        assert!(pp.line().ends_with("VIOLATED"));
    }

    #[test]
    fn empty_results_rejected() {
        let comparison = Comparison {
            config: ExperimentConfig::default(),
            trials: Vec::new(),
            cells: Vec::new(),
        };
        assert!(matches!(
            format_summary(&comparison),
            Err(Error::InvalidParameter(_))
        ));
        let dir = tempfile::tempdir().unwrap();
        assert!(emit_report(&comparison, dir.path()).is_err());
        let sweep = SweepResults {
            path: "C".into(),
            rows: Vec::new(),
        };
        assert!(format_sweep(&sweep, &ExperimentConfig::default()).is_err());
    }
}
