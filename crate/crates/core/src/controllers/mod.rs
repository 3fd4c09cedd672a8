//! Command-velocity laws of the pure pursuit family.
//!
//! All four controllers share the same geometric front end: find the
//! lookahead point, compute the arc curvature to it. They differ in how the
//! linear velocity is chosen:
//!
//! * [`ControllerKind::Pp`] drives at `v_max` with a fixed lookahead.
//! * [`ControllerKind::App`] scales the lookahead with speed.
//! * [`ControllerKind::Rpp`] additionally regulates the linear velocity.
//! * [`ControllerKind::Dwpp`] builds the dynamic window, restricts it to the
//!   regulated speed and picks the feasible point closest to `omega = kappa * v`.
//!
//! Only DWPP guarantees its command is reachable in one control period; the
//! others rely on the drive to clip infeasible commands.

mod limits;
mod lookahead;
mod regulation;
mod window;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use limits::{KinodynamicLimits, VelocityCommand};
pub use lookahead::{
    effective_lookahead, min_stable_lookahead, pp_nominal_command, LookaheadConfig, LookaheadMode,
    StabilityConfig,
};
pub use regulation::{
    curvature_heuristic, goal_heuristic, proximity_heuristic, regulate_linear_velocity,
    CombinationMode, RegulationConfig,
};
pub use window::{
    apply_regulation_to_window, compute_dynamic_window, distance_point_to_line,
    optimal_velocity_in_window, sampled_optimal_velocity, DynamicWindow, BOUNDARY_TOLERANCE,
};

use crate::error::{Error, Result};
use crate::geometry::{compute_curvature, ReferencePath, RobotState};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ControllerKind {
    #[serde(rename = "PP")]
    Pp,
    #[serde(rename = "APP")]
    App,
    #[serde(rename = "RPP")]
    Rpp,
    #[serde(rename = "DWPP")]
    Dwpp,
}

impl ControllerKind {
    pub const ALL: [ControllerKind; 4] = [Self::Pp, Self::App, Self::Rpp, Self::Dwpp];

    pub fn name(&self) -> &'static str {
        match self {
            Self::Pp => "PP",
            Self::App => "APP",
            Self::Rpp => "RPP",
            Self::Dwpp => "DWPP",
        }
    }
}

impl fmt::Display for ControllerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ControllerKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| {
                Error::invalid(format!(
                    "unknown controller `{s}` (expected PP, APP, RPP or DWPP)"
                ))
            })
    }
}

/// A configured controller. Stateless: every call is a pure function of the
/// robot state and the path.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PurePursuit {
    pub kind: ControllerKind,
    pub limits: KinodynamicLimits,
    pub lookahead: LookaheadConfig,
    pub regulation: RegulationConfig,
}

impl PurePursuit {
    pub fn new(
        kind: ControllerKind,
        limits: KinodynamicLimits,
        lookahead: LookaheadConfig,
        regulation: RegulationConfig,
    ) -> Self {
        Self {
            kind,
            limits,
            lookahead,
            regulation,
        }
    }

    /// Lookahead distance used at linear velocity `v`.
    pub fn lookahead_distance(&self, v: f64) -> f64 {
        match self.kind {
            ControllerKind::Pp => self.lookahead.fixed,
            _ => effective_lookahead(&self.lookahead, v),
        }
    }

    /// Velocity command for the current state. `obstacle_dist` feeds the
    /// proximity heuristic; pass `f64::INFINITY` in free space.
    pub fn compute_command(
        &self,
        state: &RobotState,
        path: &ReferencePath,
        obstacle_dist: f64,
    ) -> Result<VelocityCommand> {
        let lookahead = self.lookahead_distance(state.v);
        let target = path.lookahead_point(&state.pose, lookahead)?;
        let kappa = compute_curvature(&state.pose, target)?;
        let v_des = self.limits.v_max;

        Ok(match self.kind {
            ControllerKind::Pp | ControllerKind::App => pp_nominal_command(kappa, v_des),
            ControllerKind::Rpp => {
                let v_reg = self.regulated_velocity(state, path, kappa, obstacle_dist);
                pp_nominal_command(kappa, v_reg)
            }
            ControllerKind::Dwpp => {
                let v_reg = self.regulated_velocity(state, path, kappa, obstacle_dist);
                let window = compute_dynamic_window(state, &self.limits);
                let window = apply_regulation_to_window(&window, v_reg);
                optimal_velocity_in_window(&window, kappa)
            }
        })
    }

    fn regulated_velocity(
        &self,
        state: &RobotState,
        path: &ReferencePath,
        kappa: f64,
        obstacle_dist: f64,
    ) -> f64 {
        let remaining = path.remaining_distance(&state.pose);
        regulate_linear_velocity(
            self.limits.v_max,
            kappa,
            obstacle_dist,
            remaining,
            &self.regulation,
        )
    }
}
