//! Linear-velocity regulation heuristics of regulated pure pursuit.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// How the minimum-speed parameters enter the heuristic combination.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CombinationMode {
    /// `min(v_curv, v_prox, min_speed)` then `min(v_goal, goal_min_speed)`,
    /// i.e. the minimum speeds act as caps.
    Literal,
    /// The minimum speeds act as floors for the scaled velocities.
    LowerBound,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RegulationConfig {
    pub use_curvature: bool,
    /// Turning radius below which the curvature heuristic scales velocity.
    pub min_radius: f64,
    pub use_proximity: bool,
    pub proximity_dist: f64,
    /// Deceleration gain of the proximity heuristic, in `(0, 1]`.
    pub proximity_gain: f64,
    pub use_goal: bool,
    pub goal_dist: f64,
    /// Minimum regulated speed for the curvature/proximity stage.
    pub min_speed: f64,
    /// Minimum speed while approaching the goal.
    pub goal_min_speed: f64,
    pub combination: CombinationMode,
}

impl Default for RegulationConfig {
    fn default() -> Self {
        Self {
            use_curvature: true,
            min_radius: 0.9,
            use_proximity: false,
            proximity_dist: 0.7,
            proximity_gain: 1.0,
            use_goal: true,
            goal_dist: 1.0,
            min_speed: 0.25,
            goal_min_speed: 0.05,
            combination: CombinationMode::LowerBound,
        }
    }
}

impl RegulationConfig {
    /// Every heuristic switched off; regulation becomes the identity.
    pub fn disabled() -> Self {
        Self {
            use_curvature: false,
            use_proximity: false,
            use_goal: false,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("min_radius", self.min_radius),
            ("proximity_dist", self.proximity_dist),
            ("goal_dist", self.goal_dist),
        ];
        for (key, value) in positive {
            if !(value > 0.0 && value.is_finite()) {
                return Err(Error::config(key, "must be positive"));
            }
        }
        if !(self.proximity_gain > 0.0 && self.proximity_gain <= 1.0) {
            return Err(Error::config("proximity_gain", "must lie in (0, 1]"));
        }
        for (key, value) in [
            ("min_speed", self.min_speed),
            ("goal_min_speed", self.goal_min_speed),
        ] {
            if !(value >= 0.0 && value.is_finite()) {
                return Err(Error::config(key, "must be non-negative"));
            }
        }
        Ok(())
    }
}

/// Scales `v` by `radius / min_radius` on turns tighter than `min_radius`.
pub fn curvature_heuristic(v: f64, radius: f64, min_radius: f64) -> f64 {
    if radius > min_radius {
        v
    } else {
        v * radius / min_radius
    }
}

/// Slows down near obstacles. Pass `f64::INFINITY` when nothing is nearby.
pub fn proximity_heuristic(v: f64, obstacle_dist: f64, proximity_dist: f64, gain: f64) -> f64 {
    if obstacle_dist > proximity_dist {
        v
    } else {
        v * gain * obstacle_dist / proximity_dist
    }
}

pub fn goal_heuristic(v: f64, goal_remaining: f64, goal_dist: f64) -> f64 {
    if goal_remaining > goal_dist {
        v
    } else {
        v * goal_remaining / goal_dist
    }
}

/// Regulated linear velocity; never exceeds `v_cmd`.
///
/// `kappa` is the arc curvature (zero means no curvature scaling),
/// `obstacle_dist` the closest obstacle distance and `goal_remaining` the
/// arc length left to the goal.
pub fn regulate_linear_velocity(
    v_cmd: f64,
    kappa: f64,
    obstacle_dist: f64,
    goal_remaining: f64,
    cfg: &RegulationConfig,
) -> f64 {
    let radius = if kappa == 0.0 {
        f64::INFINITY
    } else {
        1.0 / kappa.abs()
    };
    let curvature = cfg
        .use_curvature
        .then(|| curvature_heuristic(v_cmd, radius, cfg.min_radius));
    let proximity = cfg
        .use_proximity
        .then(|| proximity_heuristic(v_cmd, obstacle_dist, cfg.proximity_dist, cfg.proximity_gain));

    let v_reg = match cfg.combination {
        CombinationMode::Literal => {
            let mut v = v_cmd;
            if curvature.is_some() || proximity.is_some() {
                v = curvature
                    .unwrap_or(f64::INFINITY)
                    .min(proximity.unwrap_or(f64::INFINITY))
                    .min(cfg.min_speed);
            }
            if cfg.use_goal {
                v = goal_heuristic(v, goal_remaining, cfg.goal_dist).min(cfg.goal_min_speed);
            }
            v
        }
        CombinationMode::LowerBound => {
            let mut v = v_cmd;
            if curvature.is_some() || proximity.is_some() {
                let scaled = curvature
                    .unwrap_or(f64::INFINITY)
                    .min(proximity.unwrap_or(f64::INFINITY));
                v = scaled.max(cfg.min_speed).min(v_cmd);
            }
            if cfg.use_goal {
                let approach =
                    goal_heuristic(v, goal_remaining, cfg.goal_dist).max(cfg.goal_min_speed);
                v = v.min(approach);
            }
            v
        }
    };
    v_cmd.min(v_reg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn curvature_only(combination: CombinationMode) -> RegulationConfig {
        RegulationConfig {
            use_goal: false,
            combination,
            ..RegulationConfig::default()
        }
    }

    #[test]
    fn curvature_examples() {
        assert_eq!(curvature_heuristic(0.5, 2.0, 0.9), 0.5);
        assert_abs_diff_eq!(curvature_heuristic(0.5, 0.45, 0.9), 0.25, epsilon = 1e-15);
        assert_eq!(curvature_heuristic(0.5, 0.9, 0.9), 0.5);
    }

    #[test]
    fn proximity_examples() {
        assert_eq!(proximity_heuristic(0.5, f64::INFINITY, 1.0, 0.5), 0.5);
        assert_abs_diff_eq!(
            proximity_heuristic(0.5, 0.5, 1.0, 0.5),
            0.125,
            epsilon = 1e-15
        );
        assert_eq!(proximity_heuristic(0.5, 0.0, 1.0, 0.5), 0.0);
    }

    #[test]
    fn goal_examples() {
        assert_eq!(goal_heuristic(0.5, 5.0, 1.0), 0.5);
        assert_abs_diff_eq!(goal_heuristic(0.5, 0.5, 1.0), 0.25, epsilon = 1e-15);
        assert_eq!(goal_heuristic(0.5, 0.0, 1.0), 0.0);
    }

    #[test]
    fn disabled_regulation_is_identity() {
        let cfg = RegulationConfig::disabled();
        for mode in [CombinationMode::Literal, CombinationMode::LowerBound] {
            let cfg = RegulationConfig {
                combination: mode,
                ..cfg
            };
            assert_eq!(regulate_linear_velocity(0.5, 5.0, 0.1, 0.1, &cfg), 0.5);
        }
    }

    #[test]
    fn lower_bound_mode_sharp_turn() {
        let cfg = curvature_only(CombinationMode::LowerBound);
        let v = regulate_linear_velocity(0.5, 1.0 / 0.45, f64::INFINITY, 10.0, &cfg);
        assert_abs_diff_eq!(v, 0.25, epsilon = 1e-12);
        // Tighter turn: the floor holds.
        let v = regulate_linear_velocity(0.5, 10.0, f64::INFINITY, 10.0, &cfg);
        assert_eq!(v, 0.25);
    }

    #[test]
    fn literal_mode_sharp_turn() {
        let cfg = curvature_only(CombinationMode::Literal);
        let v = regulate_linear_velocity(0.5, 1.0 / 0.45, f64::INFINITY, 10.0, &cfg);
        assert_abs_diff_eq!(v, 0.25, epsilon = 1e-12);
        // Printed form caps at the minimum speed even on a straight line.
        assert_eq!(
            regulate_linear_velocity(0.5, 0.0, f64::INFINITY, 10.0, &cfg),
            0.25
        );
    }

    #[test]
    fn goal_stage_lower_bound() {
        let cfg = RegulationConfig {
            use_curvature: false,
            ..RegulationConfig::default()
        };
        assert_abs_diff_eq!(
            regulate_linear_velocity(0.5, 0.0, f64::INFINITY, 0.5, &cfg),
            0.25,
            epsilon = 1e-12
        );
        assert_eq!(
            regulate_linear_velocity(0.5, 0.0, f64::INFINITY, 0.0, &cfg),
            0.05
        );
        let literal = RegulationConfig {
            combination: CombinationMode::Literal,
            ..cfg
        };
        assert_eq!(
            regulate_linear_velocity(0.5, 0.0, f64::INFINITY, 0.5, &literal),
            0.05
        );
    }

    proptest! {
        #[test]
        fn regulation_never_speeds_up(
            v in 0.0f64..2.0, kappa in -20.0f64..20.0, d_o in 0.0f64..3.0, d_g in 0.0f64..8.0,
            curv: bool, prox: bool, goal: bool, literal: bool, min_speed in 0.0f64..1.0
        ) {
            let cfg = RegulationConfig {
                use_curvature: curv,
                use_proximity: prox,
                use_goal: goal,
                min_speed,
                combination: if literal { CombinationMode::Literal } else { CombinationMode::LowerBound },
                ..RegulationConfig::default()
            };
            let out = regulate_linear_velocity(v, kappa, d_o, d_g, &cfg);
            prop_assert!(out <= v);
            prop_assert!(curvature_heuristic(v, 1.0 / kappa.abs().max(1e-9), 0.9) <= v);
            prop_assert!(proximity_heuristic(v, d_o, 0.7, 0.5) <= v);
            prop_assert!(goal_heuristic(v, d_g, 1.0) <= v);
        }
    }
}
