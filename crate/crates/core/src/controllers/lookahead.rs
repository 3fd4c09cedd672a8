use serde::{Deserialize, Serialize};

use super::VelocityCommand;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LookaheadMode {
    Fixed,
    VelocityScaled,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LookaheadConfig {
    pub mode: LookaheadMode,
    /// Distance used in fixed mode, and always by plain pure pursuit.
    pub fixed: f64,
    pub min: f64,
    pub max: f64,
    /// Seconds of travel at the current speed to project ahead.
    pub time_gain: f64,
}

impl Default for LookaheadConfig {
    fn default() -> Self {
        Self {
            mode: LookaheadMode::VelocityScaled,
            fixed: 0.6,
            min: 0.3,
            max: 0.7,
            time_gain: 1.4,
        }
    }
}

impl LookaheadConfig {
    pub fn fixed(distance: f64) -> Self {
        Self {
            mode: LookaheadMode::Fixed,
            fixed: distance,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.fixed > 0.0 && self.fixed.is_finite()) {
            return Err(Error::config("fixed", "must be positive"));
        }
        if !(self.min > 0.0 && self.min.is_finite()) {
            return Err(Error::config("min", "must be positive"));
        }
        if !(self.max >= self.min && self.max.is_finite()) {
            return Err(Error::config("max", "must be at least `min`"));
        }
        if !(self.time_gain > 0.0 && self.time_gain.is_finite()) {
            return Err(Error::config("time_gain", "must be positive"));
        }
        Ok(())
    }
}

/// Lookahead distance for the current linear velocity.
pub fn effective_lookahead(cfg: &LookaheadConfig, v: f64) -> f64 {
    match cfg.mode {
        LookaheadMode::Fixed => cfg.fixed,
        LookaheadMode::VelocityScaled => (v.max(0.0) * cfg.time_gain).clamp(cfg.min, cfg.max),
    }
}

/// Constant-speed pure pursuit command: drive at `v_des` along the arc.
pub fn pp_nominal_command(kappa: f64, v_des: f64) -> VelocityCommand {
    VelocityCommand::new(v_des, kappa * v_des)
}

/// Steering time constant and minimum nondimensional lookahead for the
/// pure pursuit stability condition.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct StabilityConfig {
    pub time_constant: f64,
    pub min_nondimensional_lookahead: f64,
}

impl Default for StabilityConfig {
    fn default() -> Self {
        Self {
            time_constant: 0.4,
            min_nondimensional_lookahead: 2.0,
        }
    }
}

impl StabilityConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.time_constant > 0.0 && self.time_constant.is_finite()) {
            return Err(Error::config("time_constant", "must be positive"));
        }
        if !(self.min_nondimensional_lookahead > 0.0
            && self.min_nondimensional_lookahead.is_finite())
        {
            return Err(Error::config(
                "min_nondimensional_lookahead",
                "must be positive",
            ));
        }
        Ok(())
    }
}

/// Smallest lookahead distance that keeps pure pursuit stable at speed `v`.
pub fn min_stable_lookahead(v: f64, cfg: &StabilityConfig) -> f64 {
    v * cfg.time_constant * cfg.min_nondimensional_lookahead
}
