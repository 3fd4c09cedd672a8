use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Velocity and acceleration bounds of the drive, plus the control period.
///
/// Deceleration bounds are magnitudes: `dec_max = 0.5` allows the linear
/// velocity to drop by `0.5 * dt` per step.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct KinodynamicLimits {
    pub v_max: f64,
    pub v_min: f64,
    pub omega_max: f64,
    pub omega_min: f64,
    pub acc_max: f64,
    pub dec_max: f64,
    pub alpha_acc_max: f64,
    pub alpha_dec_max: f64,
    pub dt: f64,
}

impl KinodynamicLimits {
    /// Limits of the real-robot experiment profile.
    pub const EXPERIMENT: Self = Self {
        v_max: 0.5,
        v_min: 0.0,
        omega_max: 1.0,
        omega_min: -1.0,
        acc_max: 0.5,
        dec_max: 0.5,
        alpha_acc_max: 1.0,
        alpha_dec_max: 1.0,
        dt: 0.033,
    };

    /// Limits of the simulated small-robot profile used for lookahead sweeps.
    pub const SIMULATION: Self = Self {
        v_max: 0.26,
        v_min: 0.0,
        omega_max: 0.5,
        omega_min: -0.5,
        acc_max: 0.26,
        dec_max: 0.26,
        alpha_acc_max: 0.5,
        alpha_dec_max: 0.5,
        dt: 0.033,
    };

    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("v_max", self.v_max),
            ("v_min", self.v_min),
            ("omega_max", self.omega_max),
            ("omega_min", self.omega_min),
            ("acc_max", self.acc_max),
            ("dec_max", self.dec_max),
            ("alpha_acc_max", self.alpha_acc_max),
            ("alpha_dec_max", self.alpha_dec_max),
            ("dt", self.dt),
        ];
        if let Some((key, _)) = fields.iter().find(|(_, v)| !v.is_finite()) {
            return Err(Error::config(*key, "must be finite"));
        }
        if self.v_min > self.v_max {
            return Err(Error::config("v_min", "must not exceed v_max"));
        }
        if self.omega_min > self.omega_max {
            return Err(Error::config("omega_min", "must not exceed omega_max"));
        }
        for (key, value) in &fields[4..] {
            if *value <= 0.0 {
                return Err(Error::config(*key, "must be positive"));
            }
        }
        Ok(())
    }
}

impl Default for KinodynamicLimits {
    fn default() -> Self {
        Self::EXPERIMENT
    }
}

/// Commanded (or executed) linear and angular velocity.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct VelocityCommand {
    pub v: f64,
    pub omega: f64,
}

impl VelocityCommand {
    pub const fn new(v: f64, omega: f64) -> Self {
        Self { v, omega }
    }

    pub fn is_finite(&self) -> bool {
        self.v.is_finite() && self.omega.is_finite()
    }
}
