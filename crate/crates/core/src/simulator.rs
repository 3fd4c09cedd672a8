//! Discrete-time unicycle simulator with a hardware clipping drive model.
//!
//! Each tick the controller produces a command from the current state, the
//! drive projects it onto the dynamic window (what a real velocity smoother
//! or motor controller would do), and the pose is advanced by exact arc
//! integration. Constraint violations are judged on the raw command.

use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::controllers::{compute_dynamic_window, KinodynamicLimits, PurePursuit, VelocityCommand};
use crate::error::{Error, Result};
use crate::geometry::{wrap_angle, Pose2D, ReferencePath, RobotState};

/// Absolute tolerance when judging a command against the limits.
pub const VIOLATION_TOLERANCE: f64 = 1e-9;
pub const DEFAULT_GOAL_TOLERANCE: f64 = 0.15;
pub const DEFAULT_MAX_TIME: f64 = 60.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExecutionMode {
    /// Commands are clipped to the dynamic window before execution.
    HardwareClip,
    /// Commands are executed as given.
    PassThrough,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExecutionModel {
    pub mode: ExecutionMode,
    pub limits: KinodynamicLimits,
}

impl ExecutionModel {
    pub fn hardware_clip(limits: KinodynamicLimits) -> Self {
        Self {
            mode: ExecutionMode::HardwareClip,
            limits,
        }
    }
}

/// Gaussian perturbations. Velocity noise is applied to every executed
/// command, pose noise once to the initial pose.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(default = "NoiseModel::trial_default", deny_unknown_fields)]
pub struct NoiseModel {
    pub sigma_v: f64,
    pub sigma_omega: f64,
    pub sigma_pose_xy: f64,
    pub sigma_pose_theta: f64,
    pub seed: u64,
}

impl NoiseModel {
    /// Initial-pose perturbation used to spread repeated trials: 1 cm and
    /// 0.01 rad, no velocity noise.
    pub fn trial_default() -> Self {
        Self {
            sigma_pose_xy: 0.01,
            sigma_pose_theta: 0.01,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (key, value) in [
            ("sigma_v", self.sigma_v),
            ("sigma_omega", self.sigma_omega),
            ("sigma_pose_xy", self.sigma_pose_xy),
            ("sigma_pose_theta", self.sigma_pose_theta),
        ] {
            if !(value >= 0.0 && value.is_finite()) {
                return Err(Error::config(key, "must be non-negative"));
            }
        }
        Ok(())
    }

    pub fn with_seed(self, seed: u64) -> Self {
        Self { seed, ..self }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ViolationFlags {
    pub velocity: bool,
    pub angular_velocity: bool,
    pub acceleration: bool,
    pub angular_acceleration: bool,
}

impl ViolationFlags {
    /// Checks a raw command against the limits, given the current state.
    pub fn evaluate(
        command: &VelocityCommand,
        state: &RobotState,
        limits: &KinodynamicLimits,
    ) -> Self {
        let tol = VIOLATION_TOLERANCE;
        let dv = command.v - state.v;
        let dw = command.omega - state.omega;
        Self {
            velocity: command.v > limits.v_max + tol || command.v < limits.v_min - tol,
            angular_velocity: command.omega > limits.omega_max + tol
                || command.omega < limits.omega_min - tol,
            acceleration: dv > limits.acc_max * limits.dt + tol
                || -dv > limits.dec_max * limits.dt + tol,
            angular_acceleration: dw > limits.alpha_acc_max * limits.dt + tol
                || -dw > limits.alpha_dec_max * limits.dt + tol,
        }
    }

    pub fn any(&self) -> bool {
        self.velocity || self.angular_velocity || self.acceleration || self.angular_acceleration
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectoryStep {
    pub time: f64,
    /// State at the start of the tick, before `executed` is applied.
    pub state: RobotState,
    pub command: VelocityCommand,
    pub executed: VelocityCommand,
    pub violations: ViolationFlags,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct TrajectoryLog {
    pub steps: Vec<TrajectoryStep>,
}

#[derive(Serialize)]
struct CsvRow {
    t: f64,
    x: f64,
    y: f64,
    theta: f64,
    v: f64,
    omega: f64,
    v_cmd: f64,
    omega_cmd: f64,
    v_exec: f64,
    omega_exec: f64,
    viol_v: u8,
    viol_w: u8,
    viol_a: u8,
    viol_alpha: u8,
}

impl TrajectoryLog {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let file = std::fs::File::create(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        self.write_csv_to(file).map_err(|source| Error::Csv {
            path: path.to_path_buf(),
            source,
        })
    }

    pub fn write_csv_to<W: std::io::Write>(&self, out: W) -> std::result::Result<(), csv::Error> {
        let mut writer = csv::Writer::from_writer(out);
        for s in &self.steps {
            writer.serialize(CsvRow {
                t: s.time,
                x: s.state.pose.x,
                y: s.state.pose.y,
                theta: s.state.pose.theta,
                v: s.state.v,
                omega: s.state.omega,
                v_cmd: s.command.v,
                omega_cmd: s.command.omega,
                v_exec: s.executed.v,
                omega_exec: s.executed.omega,
                viol_v: s.violations.velocity as u8,
                viol_w: s.violations.angular_velocity as u8,
                viol_a: s.violations.acceleration as u8,
                viol_alpha: s.violations.angular_acceleration as u8,
            })?;
        }
        writer.flush()?;
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioResult {
    pub log: TrajectoryLog,
    pub reached_goal: bool,
    /// Time to reach the goal, or the elapsed time when the run timed out.
    pub travel_time: f64,
}

/// Projects a command onto the dynamic window of `state`, axis by axis.
pub fn clip_to_feasible(
    command: &VelocityCommand,
    state: &RobotState,
    limits: &KinodynamicLimits,
) -> VelocityCommand {
    compute_dynamic_window(state, limits).clamp(command)
}

/// Advances a unicycle by `dt` under constant `(v, omega)`, integrating the
/// arc exactly. The returned state carries the executed velocities.
pub fn step_unicycle(state: &RobotState, executed: &VelocityCommand, dt: f64) -> RobotState {
    let VelocityCommand { v, omega } = *executed;
    let Pose2D { x, y, theta } = state.pose;
    let (x, y) = if omega.abs() > 1e-9 {
        let r = v / omega;
        let heading = theta + omega * dt;
        (
            x + r * (heading.sin() - theta.sin()),
            y - r * (heading.cos() - theta.cos()),
        )
    } else {
        (x + v * dt * theta.cos(), y + v * dt * theta.sin())
    };
    RobotState {
        pose: Pose2D {
            x,
            y,
            theta: wrap_angle(theta + omega * dt),
        },
        v,
        omega,
    }
}

/// Everything needed to run one closed-loop tracking episode.
#[derive(Debug, Clone)]
pub struct Scenario<'a> {
    pub path: &'a ReferencePath,
    pub controller: PurePursuit,
    pub execution: ExecutionModel,
    pub noise: NoiseModel,
    pub max_time: f64,
    pub goal_tolerance: f64,
    /// Distance to the nearest obstacle fed to the proximity heuristic.
    pub obstacle_distance: f64,
}

impl<'a> Scenario<'a> {
    pub fn new(path: &'a ReferencePath, controller: PurePursuit) -> Self {
        Self {
            path,
            controller,
            execution: ExecutionModel::hardware_clip(controller.limits),
            noise: NoiseModel::default(),
            max_time: DEFAULT_MAX_TIME,
            goal_tolerance: DEFAULT_GOAL_TOLERANCE,
            obstacle_distance: f64::INFINITY,
        }
    }
}

pub fn run_scenario(scenario: &Scenario<'_>) -> Result<ScenarioResult> {
    if scenario.max_time.is_nan() || scenario.max_time <= 0.0 {
        return Err(Error::invalid("max_time must be positive"));
    }
    if scenario.goal_tolerance.is_nan() || scenario.goal_tolerance < 0.0 {
        return Err(Error::invalid("goal_tolerance must be non-negative"));
    }
    scenario.noise.validate()?;
    let limits = scenario.execution.limits;
    limits.validate()?;
    let dt = limits.dt;

    let noise = scenario.noise;
    let mut rng = ChaCha8Rng::seed_from_u64(noise.seed);
    let mut gaussian = |sigma: f64| -> f64 {
        if sigma > 0.0 {
            Normal::new(0.0, sigma)
                .expect("sigma validated")
                .sample(&mut rng)
        } else {
            0.0
        }
    };

    let path = scenario.path;
    let start = path.start();
    let mut state = RobotState::at_rest(Pose2D::new(
        start.x + gaussian(noise.sigma_pose_xy),
        start.y + gaussian(noise.sigma_pose_xy),
        path.start_heading() + gaussian(noise.sigma_pose_theta),
    ));
    let goal = path.goal();
    let max_steps = (scenario.max_time / dt).ceil() as usize;
    let mut log = TrajectoryLog {
        steps: Vec::with_capacity(max_steps.min(1 << 16)),
    };

    for k in 0..=max_steps {
        let time = k as f64 * dt;
        if state.pose.position().distance(&goal) <= scenario.goal_tolerance {
            return Ok(ScenarioResult {
                log,
                reached_goal: true,
                travel_time: time,
            });
        }
        if k == max_steps {
            break;
        }
        let command =
            scenario
                .controller
                .compute_command(&state, path, scenario.obstacle_distance)?;
        let violations = ViolationFlags::evaluate(&command, &state, &limits);
        let mut executed = match scenario.execution.mode {
            ExecutionMode::HardwareClip => clip_to_feasible(&command, &state, &limits),
            ExecutionMode::PassThrough => command,
        };
        if noise.sigma_v > 0.0 || noise.sigma_omega > 0.0 {
            executed.v += gaussian(noise.sigma_v);
            executed.omega += gaussian(noise.sigma_omega);
            if scenario.execution.mode == ExecutionMode::HardwareClip {
                executed = clip_to_feasible(&executed, &state, &limits);
            }
        }
        log.steps.push(TrajectoryStep {
            time,
            state,
            command,
            executed,
            violations,
        });
        state = step_unicycle(&state, &executed, dt);
        if !state.is_finite() {
            return Err(Error::Diverged { step: k, time });
        }
    }

    Ok(ScenarioResult {
        log,
        reached_goal: false,
        travel_time: max_steps as f64 * dt,
    })
}
