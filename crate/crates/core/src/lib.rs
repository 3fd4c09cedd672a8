//! Pure pursuit path tracking with explicit velocity and acceleration limits.
//!
//! The crate provides four controllers sharing one geometric core:
//! plain pure pursuit, adaptive (velocity-scaled lookahead), regulated
//! (heuristic linear-velocity scaling) and dynamic window pure pursuit,
//! which selects the command inside the dynamic window closest to the
//! line `omega = kappa * v` in closed form.
//!
//! Around the controllers sit a deterministic unicycle simulator with a
//! clipping drive model, evaluation metrics, and a harness that runs
//! controller comparisons and lookahead sweeps from TOML configurations.
//!
//! ```
//! use dwpp_core::prelude::*;
//!
//! let path = generate_corner_path(&CornerPathSpec::new(3.0, 135f64.to_radians(), Pose2D::default())).unwrap();
//! let controller = PurePursuit::new(
//!     ControllerKind::Dwpp,
//!     KinodynamicLimits::EXPERIMENT,
//!     LookaheadConfig::default(),
//!     RegulationConfig::default(),
//! );
//! let result = run_scenario(&Scenario::new(&path, controller)).unwrap();
//! assert!(result.reached_goal);
//! assert_eq!(violation_ratio(&result.log).unwrap(), 0.0);
//! ```

pub mod controllers;
pub mod error;
pub mod geometry;
pub mod harness;
pub mod metrics;
pub mod simulator;

pub use error::{Error, Result};

pub mod prelude {
    pub use crate::controllers::{
        apply_regulation_to_window, compute_dynamic_window, optimal_velocity_in_window,
        ControllerKind, DynamicWindow, KinodynamicLimits, LookaheadConfig, LookaheadMode,
        PurePursuit, RegulationConfig, StabilityConfig, VelocityCommand,
    };
    pub use crate::error::{Error, Result};
    pub use crate::geometry::{
        generate_corner_path, CornerPathSpec, Point2, Pose2D, ReferencePath, RobotState,
    };
    pub use crate::metrics::{aggregate, cross_track_stats, violation_ratio, ScenarioMetrics};
    pub use crate::simulator::{
        run_scenario, step_unicycle, ExecutionModel, NoiseModel, Scenario, ScenarioResult,
    };
}
