//! Dynamic window construction and the closed-form velocity selection of
//! dynamic window pure pursuit.
//!
//! The path-following condition `omega = kappa * v` is a line through the
//! origin of the v-omega plane. The selected command is the point of the
//! (regulated) dynamic window closest to that line, preferring the largest
//! linear velocity among equally close points. Because the window is an
//! axis-aligned rectangle the optimum is either the fastest point of the
//! line/rectangle intersection or, when they do not meet, a rectangle
//! vertex, so the selection is constant time.

use super::{KinodynamicLimits, VelocityCommand};
use crate::geometry::RobotState;

/// Membership tolerance for points on the window boundary.
pub const BOUNDARY_TOLERANCE: f64 = 1e-9;

/// Tolerance under which two vertex distances are considered equal.
const DISTANCE_TIE: f64 = 1e-12;

/// Axis-aligned rectangle of velocities reachable in the next control step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DynamicWindow {
    pub v_lo: f64,
    pub v_hi: f64,
    pub omega_lo: f64,
    pub omega_hi: f64,
}

impl DynamicWindow {
    pub fn new(v_lo: f64, v_hi: f64, omega_lo: f64, omega_hi: f64) -> Self {
        debug_assert!(v_lo <= v_hi && omega_lo <= omega_hi);
        Self {
            v_lo,
            v_hi,
            omega_lo,
            omega_hi,
        }
    }

    /// Closed-interval membership with an absolute tolerance.
    pub fn contains(&self, cmd: &VelocityCommand, tol: f64) -> bool {
        cmd.v >= self.v_lo - tol
            && cmd.v <= self.v_hi + tol
            && cmd.omega >= self.omega_lo - tol
            && cmd.omega <= self.omega_hi + tol
    }

    /// Projects a command onto the window, each axis independently.
    pub fn clamp(&self, cmd: &VelocityCommand) -> VelocityCommand {
        VelocityCommand::new(
            cmd.v.clamp(self.v_lo, self.v_hi),
            cmd.omega.clamp(self.omega_lo, self.omega_hi),
        )
    }

    pub fn vertices(&self) -> [VelocityCommand; 4] {
        [
            VelocityCommand::new(self.v_lo, self.omega_lo),
            VelocityCommand::new(self.v_lo, self.omega_hi),
            VelocityCommand::new(self.v_hi, self.omega_lo),
            VelocityCommand::new(self.v_hi, self.omega_hi),
        ]
    }
}

pub fn compute_dynamic_window(state: &RobotState, limits: &KinodynamicLimits) -> DynamicWindow {
    let v_hi = limits.v_max.min(state.v + limits.acc_max * limits.dt);
    let v_lo = limits.v_min.max(state.v - limits.dec_max * limits.dt);
    let omega_hi = limits
        .omega_max
        .min(state.omega + limits.alpha_acc_max * limits.dt);
    let omega_lo = limits
        .omega_min
        .max(state.omega - limits.alpha_dec_max * limits.dt);
    // A state outside the velocity limits can only come back by saturating.
    DynamicWindow::new(v_lo.min(v_hi), v_hi, omega_lo.min(omega_hi), omega_hi)
}

/// Intersects the window with `[0, v_reg]`. If the intersection is empty the
/// window collapses onto its slowest reachable velocity.
pub fn apply_regulation_to_window(dw: &DynamicWindow, v_reg: f64) -> DynamicWindow {
    let v_lo = dw.v_lo.max(0.0);
    let v_hi = dw.v_hi.min(v_reg).max(v_lo);
    DynamicWindow { v_lo, v_hi, ..*dw }
}

/// Euclidean distance from `(v, omega)` to the line `omega = kappa * v`.
pub fn distance_point_to_line(cmd: &VelocityCommand, kappa: f64) -> f64 {
    (kappa * cmd.v - cmd.omega).abs() / (kappa * kappa + 1.0).sqrt()
}

pub fn optimal_velocity_in_window(dw: &DynamicWindow, kappa: f64) -> VelocityCommand {
    if kappa == 0.0 {
        let omega = if dw.omega_lo <= 0.0 && 0.0 <= dw.omega_hi {
            0.0
        } else if dw.omega_lo.abs() < dw.omega_hi.abs() {
            dw.omega_lo
        } else {
            dw.omega_hi
        };
        return VelocityCommand::new(dw.v_hi, omega);
    }

    // Intersections of the line with the four extended window edges.
    let crossings = [
        VelocityCommand::new(dw.v_lo, kappa * dw.v_lo),
        VelocityCommand::new(dw.v_hi, kappa * dw.v_hi),
        VelocityCommand::new(dw.omega_lo / kappa, dw.omega_lo),
        VelocityCommand::new(dw.omega_hi / kappa, dw.omega_hi),
    ];
    let fastest = crossings
        .iter()
        .filter(|p| dw.contains(p, BOUNDARY_TOLERANCE))
        .map(|p| p.v)
        .reduce(f64::max);
    if let Some(v) = fastest {
        let v = v.clamp(dw.v_lo, dw.v_hi);
        return VelocityCommand::new(v, (kappa * v).clamp(dw.omega_lo, dw.omega_hi));
    }

    // No intersection: the closest point is a vertex.
    let mut best = dw.vertices()[0];
    let mut best_dist = distance_point_to_line(&best, kappa);
    for c in &dw.vertices()[1..] {
        let d = distance_point_to_line(c, kappa);
        let better = if (d - best_dist).abs() <= DISTANCE_TIE {
            c.v > best.v || (c.v == best.v && c.omega.abs() > best.omega.abs())
        } else {
            d < best_dist
        };
        if better {
            best = *c;
            best_dist = d;
        }
    }
    best
}

/// Sampled counterpart of [`optimal_velocity_in_window`]: evaluates a
/// `samples x samples` grid spanning the window and keeps the point closest
/// to the line, preferring the largest linear velocity.
///
/// Cost grows with the square of `samples`; it exists for comparison and
/// benchmarking.
pub fn sampled_optimal_velocity(dw: &DynamicWindow, kappa: f64, samples: usize) -> VelocityCommand {
    let samples = samples.max(2);
    let step = |lo: f64, hi: f64, i: usize| lo + (hi - lo) * i as f64 / (samples - 1) as f64;
    let mut best = VelocityCommand::new(dw.v_lo, dw.omega_lo);
    let mut best_dist = f64::INFINITY;
    for i in 0..samples {
        let v = step(dw.v_lo, dw.v_hi, i);
        for j in 0..samples {
            let cmd = VelocityCommand::new(v, step(dw.omega_lo, dw.omega_hi, j));
            let d = distance_point_to_line(&cmd, kappa);
            if d < best_dist - DISTANCE_TIE || ((d - best_dist).abs() <= DISTANCE_TIE && v > best.v)
            {
                best = cmd;
                best_dist = d;
            }
        }
    }
    best
}
