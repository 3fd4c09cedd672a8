use rayon::prelude::*;

use super::config::{validate_lookahead_values, ExperimentConfig, PathEntry};
use crate::controllers::{ControllerKind, LookaheadConfig, PurePursuit, RegulationConfig};
use crate::error::{Error, Result};
use crate::geometry::ReferencePath;
use crate::metrics::{aggregate, AggregateMetrics, ScenarioMetrics, Stat};
use crate::simulator::{run_scenario, ExecutionModel, NoiseModel, Scenario, ScenarioResult};

/// One simulated run of the comparison grid.
#[derive(Debug, Clone)]
pub struct TrialRecord {
    pub path: String,
    pub controller: ControllerKind,
    pub trial: usize,
    pub seed: u64,
    pub metrics: ScenarioMetrics,
    pub result: ScenarioResult,
}

#[derive(Debug, Clone)]
pub struct CellSummary {
    pub path: String,
    pub controller: ControllerKind,
    pub aggregate: AggregateMetrics,
}

#[derive(Debug, Clone)]
pub struct Comparison {
    pub config: ExperimentConfig,
    /// Ordered by path (config order), controller (config order), trial.
    pub trials: Vec<TrialRecord>,
    pub cells: Vec<CellSummary>,
}

impl Comparison {
    pub fn cell(&self, path: &str, controller: ControllerKind) -> Option<&CellSummary> {
        self.cells
            .iter()
            .find(|c| c.path == path && c.controller == controller)
    }
}

/// Noise for a given trial: seeds advance by trial index, and initial-pose
/// perturbation only applies when more than one trial is requested.
pub fn trial_noise(config: &ExperimentConfig, trial: usize) -> NoiseModel {
    let mut noise = config
        .noise
        .with_seed(config.noise.seed.wrapping_add(trial as u64));
    if config.trials == 1 {
        noise.sigma_pose_xy = 0.0;
        noise.sigma_pose_theta = 0.0;
    }
    noise
}

fn run_trial(
    config: &ExperimentConfig,
    path: &ReferencePath,
    controller: PurePursuit,
    noise: NoiseModel,
) -> Result<(ScenarioMetrics, ScenarioResult)> {
    let scenario = Scenario {
        path,
        controller,
        execution: ExecutionModel::hardware_clip(config.limits),
        noise,
        max_time: config.max_time,
        goal_tolerance: config.goal_tolerance,
        obstacle_distance: f64::INFINITY,
    };
    let result = run_scenario(&scenario)?;
    let metrics = ScenarioMetrics::from_result(&result, path)?;
    Ok((metrics, result))
}

/// Runs every (path, controller, trial) combination of the config.
pub fn run_comparison(config: &ExperimentConfig) -> Result<Comparison> {
    config.validate()?;
    let paths = config
        .paths
        .iter()
        .map(|entry| Ok((entry, entry.build()?)))
        .collect::<Result<Vec<(&PathEntry, ReferencePath)>>>()?;

    let jobs: Vec<_> = paths
        .iter()
        .flat_map(|(entry, path)| {
            config.controllers.iter().flat_map(move |&kind| {
                (0..config.trials).map(move |trial| (*entry, path, kind, trial))
            })
        })
        .collect();

    let trials = jobs
        .into_par_iter()
        .map(|(entry, path, kind, trial)| {
            let controller =
                PurePursuit::new(kind, config.limits, config.lookahead, config.regulation);
            let noise = trial_noise(config, trial);
            run_trial(config, path, controller, noise)
                .map(|(metrics, result)| TrialRecord {
                    path: entry.name.clone(),
                    controller: kind,
                    trial,
                    seed: noise.seed,
                    metrics,
                    result,
                })
                .map_err(|source| Error::Scenario {
                    path: entry.name.clone(),
                    controller: kind.to_string(),
                    trial,
                    source: Box::new(source),
                })
        })
        .collect::<Result<Vec<_>>>()?;

    let mut cells = Vec::new();
    for chunk in trials.chunks(config.trials) {
        let metrics: Vec<_> = chunk.iter().map(|t| t.metrics).collect();
        cells.push(CellSummary {
            path: chunk[0].path.clone(),
            controller: chunk[0].controller,
            aggregate: aggregate(&metrics)?,
        });
    }

    Ok(Comparison {
        config: config.clone(),
        trials,
        cells,
    })
}

/// Lookahead sweep: DWPP with a fixed lookahead distance and no regulation.
#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub base: ExperimentConfig,
    pub lookahead_values: Vec<f64>,
}

impl SweepConfig {
    pub fn new(base: ExperimentConfig, lookahead_values: Vec<f64>) -> Result<Self> {
        validate_lookahead_values(&lookahead_values).map_err(|e| match e {
            Error::InvalidParameter(reason) => Error::config("sweep.lookahead_values", reason),
            other => other,
        })?;
        Ok(Self {
            base,
            lookahead_values,
        })
    }

    /// Sweep over the values configured in (or defaulted by) `base`.
    pub fn from_experiment(base: ExperimentConfig) -> Result<Self> {
        let values = base.sweep_values();
        Self::new(base, values)
    }

    /// The swept path: the one with the sharpest corner.
    pub fn path_entry(&self) -> &PathEntry {
        self.base
            .paths
            .iter()
            .max_by(|a, b| a.corner_angle_deg.total_cmp(&b.corner_angle_deg))
            .expect("validated config has at least one path")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub lookahead: f64,
    pub mean_cte: Stat,
    pub max_cte: Stat,
    pub travel_time: Stat,
    pub reached_count: usize,
    pub trial_count: usize,
}

#[derive(Debug, Clone)]
pub struct SweepResults {
    pub path: String,
    /// Sorted by lookahead distance.
    pub rows: Vec<SweepRow>,
}

pub fn run_lookahead_sweep(sweep: &SweepConfig) -> Result<SweepResults> {
    let base = &sweep.base;
    base.validate()?;
    validate_lookahead_values(&sweep.lookahead_values)?;
    let entry = sweep.path_entry();
    let path = entry.build()?;

    let rows = sweep
        .lookahead_values
        .par_iter()
        .map(|&lookahead| {
            let controller = PurePursuit::new(
                ControllerKind::Dwpp,
                base.limits,
                LookaheadConfig::fixed(lookahead),
                RegulationConfig::disabled(),
            );
            let metrics = (0..base.trials)
                .map(|trial| {
                    run_trial(base, &path, controller, trial_noise(base, trial))
                        .map(|(m, _)| m)
                        .map_err(|source| Error::Scenario {
                            path: entry.name.clone(),
                            controller: format!("DWPP(L={lookahead})"),
                            trial,
                            source: Box::new(source),
                        })
                })
                .collect::<Result<Vec<_>>>()?;
            let agg = aggregate(&metrics)?;
            Ok(SweepRow {
                lookahead,
                mean_cte: agg.mean_cte,
                max_cte: agg.max_cte,
                travel_time: agg.travel_time,
                reached_count: agg.reached_count,
                trial_count: agg.trial_count,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(SweepResults {
        path: entry.name.clone(),
        rows,
    })
}
