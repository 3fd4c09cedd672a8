//! Experiment configuration files.
//!
//! Configurations are TOML documents. Every key is optional; missing keys
//! take the values of the `experiment_table1` profile, unknown keys are
//! rejected. See `profiles/` for the two shipped profiles.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::controllers::{
    ControllerKind, KinodynamicLimits, LookaheadConfig, RegulationConfig, StabilityConfig,
};
use crate::error::{Error, Result};
use crate::geometry::{
    generate_corner_path, CornerPathSpec, Pose2D, ReferencePath, DEFAULT_WAYPOINT_SPACING,
};
use crate::simulator::{NoiseModel, DEFAULT_GOAL_TOLERANCE, DEFAULT_MAX_TIME};

pub const EXPERIMENT_PROFILE: &str = "experiment_table1";
pub const SIMULATION_PROFILE: &str = "simulation_table6";

const EXPERIMENT_TOML: &str = include_str!("../../profiles/experiment_table1.toml");
const SIMULATION_TOML: &str = include_str!("../../profiles/simulation_table6.toml");

/// A named corner path.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PathEntry {
    pub name: String,
    #[serde(default = "default_segment_length")]
    pub segment_length: f64,
    pub corner_angle_deg: f64,
    #[serde(default = "default_spacing")]
    pub waypoint_spacing: f64,
    #[serde(default)]
    pub start: Pose2D,
}

fn default_segment_length() -> f64 {
    3.0
}

fn default_spacing() -> f64 {
    DEFAULT_WAYPOINT_SPACING
}

impl PathEntry {
    pub fn new(name: &str, corner_angle_deg: f64) -> Self {
        Self {
            name: name.to_string(),
            segment_length: default_segment_length(),
            corner_angle_deg,
            waypoint_spacing: default_spacing(),
            start: Pose2D::default(),
        }
    }

    pub fn spec(&self) -> CornerPathSpec {
        CornerPathSpec {
            segment_length: self.segment_length,
            corner_angle: self.corner_angle_deg.to_radians(),
            waypoint_spacing: self.waypoint_spacing,
            start_pose: Pose2D::new(self.start.x, self.start.y, self.start.theta),
        }
    }

    pub fn build(&self) -> Result<ReferencePath> {
        generate_corner_path(&self.spec())
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepSection {
    /// Lookahead distances to sweep. Defaults to 1.0, 1.5, ..., 4.0 times `v_max`.
    pub lookahead_values: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub trials: usize,
    pub goal_tolerance: f64,
    pub max_time: f64,
    pub output_dir: Option<PathBuf>,
    pub controllers: Vec<ControllerKind>,
    pub limits: KinodynamicLimits,
    pub lookahead: LookaheadConfig,
    pub regulation: RegulationConfig,
    pub stability: StabilityConfig,
    pub noise: NoiseModel,
    pub paths: Vec<PathEntry>,
    pub sweep: SweepSection,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            trials: 5,
            goal_tolerance: DEFAULT_GOAL_TOLERANCE,
            max_time: DEFAULT_MAX_TIME,
            output_dir: None,
            controllers: ControllerKind::ALL.to_vec(),
            limits: KinodynamicLimits::EXPERIMENT,
            lookahead: LookaheadConfig::default(),
            regulation: RegulationConfig::default(),
            stability: StabilityConfig::default(),
            noise: NoiseModel::trial_default(),
            paths: vec![
                PathEntry::new("A", 45.0),
                PathEntry::new("B", 90.0),
                PathEntry::new("C", 135.0),
            ],
            sweep: SweepSection::default(),
        }
    }
}

fn in_section(section: &str, err: Error) -> Error {
    match err {
        Error::Config { key, reason } => Error::config(format!("{section}.{key}"), reason),
        Error::InvalidParameter(reason) => Error::config(section, reason),
        other => other,
    }
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let config: Self = toml::from_str(text)?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::config("trials", "must be at least 1"));
        }
        if !(self.goal_tolerance >= 0.0 && self.goal_tolerance.is_finite()) {
            return Err(Error::config("goal_tolerance", "must be non-negative"));
        }
        if !(self.max_time > 0.0 && self.max_time.is_finite()) {
            return Err(Error::config("max_time", "must be positive"));
        }
        if self.controllers.is_empty() {
            return Err(Error::config("controllers", "must not be empty"));
        }
        if self.paths.is_empty() {
            return Err(Error::config("paths", "must not be empty"));
        }
        self.limits
            .validate()
            .map_err(|e| in_section("limits", e))?;
        self.lookahead
            .validate()
            .map_err(|e| in_section("lookahead", e))?;
        self.regulation
            .validate()
            .map_err(|e| in_section("regulation", e))?;
        self.stability
            .validate()
            .map_err(|e| in_section("stability", e))?;
        self.noise.validate().map_err(|e| in_section("noise", e))?;
        for (i, entry) in self.paths.iter().enumerate() {
            entry
                .spec()
                .validate()
                .map_err(|e| in_section(&format!("paths[{i}]"), e))?;
            if self.paths[..i].iter().any(|p| p.name == entry.name) {
                return Err(Error::config(
                    format!("paths[{i}].name"),
                    format!("duplicate path name `{}`", entry.name),
                ));
            }
        }
        if let Some(values) = &self.sweep.lookahead_values {
            validate_lookahead_values(values)
                .map_err(|e| in_section("sweep.lookahead_values", e))?;
        }
        Ok(())
    }

    /// Sweep values from the config, or 1.0..=4.0 times `v_max` in steps of 0.5.
    pub fn sweep_values(&self) -> Vec<f64> {
        self.sweep.lookahead_values.clone().unwrap_or_else(|| {
            (2..=8)
                .map(|k| (k as f64 * 0.5 * self.limits.v_max * 1e9).round() / 1e9)
                .collect()
        })
    }
}

pub(crate) fn validate_lookahead_values(values: &[f64]) -> Result<()> {
    if values.is_empty() {
        return Err(Error::invalid("must not be empty"));
    }
    if values.iter().any(|v| !(*v > 0.0 && v.is_finite())) {
        return Err(Error::invalid("values must be positive"));
    }
    if values.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::invalid("values must be strictly increasing"));
    }
    Ok(())
}

/// Parses and validates a configuration file.
pub fn load_config(path: &Path) -> Result<ExperimentConfig> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    ExperimentConfig::from_toml(&text)
}

/// One of the shipped profiles, by name.
pub fn load_profile(name: &str) -> Result<ExperimentConfig> {
    match name {
        EXPERIMENT_PROFILE => ExperimentConfig::from_toml(EXPERIMENT_TOML),
        SIMULATION_PROFILE => ExperimentConfig::from_toml(SIMULATION_TOML),
        other => Err(Error::invalid(format!(
            "unknown profile `{other}` (expected {EXPERIMENT_PROFILE} or {SIMULATION_PROFILE})"
        ))),
    }
}

/// Resolves a shipped profile name or a path to a config file.
pub fn resolve_config(spec: &str) -> Result<ExperimentConfig> {
    if spec == EXPERIMENT_PROFILE || spec == SIMULATION_PROFILE {
        load_profile(spec)
    } else {
        load_config(Path::new(spec))
    }
}
