//! Reference paths and the planar geometry used by the pure pursuit family.
//!
//! Everything here is an immutable value type; queries are pure functions of
//! the path and the robot pose.

use std::f64::consts::PI;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default spacing between generated waypoints.
pub const DEFAULT_WAYPOINT_SPACING: f64 = 0.05;

/// Wraps an angle to `(-pi, pi]`.
pub fn wrap_angle(theta: f64) -> f64 {
    let wrapped = (theta + PI).rem_euclid(2.0 * PI) - PI;
    if wrapped <= -PI {
        PI
    } else {
        wrapped
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn distance(&self, other: &Point2) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

/// Planar pose in the map frame. `theta` is kept in `(-pi, pi]`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Pose2D {
    pub x: f64,
    pub y: f64,
    pub theta: f64,
}

impl Pose2D {
    pub fn new(x: f64, y: f64, theta: f64) -> Self {
        Self {
            x,
            y,
            theta: wrap_angle(theta),
        }
    }

    pub fn position(&self) -> Point2 {
        Point2::new(self.x, self.y)
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.theta.is_finite()
    }
}

/// Pose plus the current linear and angular velocity.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct RobotState {
    pub pose: Pose2D,
    pub v: f64,
    pub omega: f64,
}

impl RobotState {
    pub fn new(pose: Pose2D, v: f64, omega: f64) -> Self {
        Self { pose, v, omega }
    }

    /// A robot at rest at `pose`.
    pub fn at_rest(pose: Pose2D) -> Self {
        Self::new(pose, 0.0, 0.0)
    }

    pub fn is_finite(&self) -> bool {
        self.pose.is_finite() && self.v.is_finite() && self.omega.is_finite()
    }
}

/// Ordered polyline of waypoints with cumulative arc length.
#[derive(Debug, Clone, PartialEq)]
pub struct ReferencePath {
    waypoints: Vec<Point2>,
    cumulative: Vec<f64>,
}

/// Closest point on a path polyline to a query position.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathProjection {
    pub point: Point2,
    /// Index of the segment `[waypoints[i], waypoints[i + 1]]` holding `point`.
    pub segment: usize,
    /// Unsigned distance from the query position to `point`.
    pub distance: f64,
    /// Arc length from the start of the path to `point`.
    pub arclength: f64,
}

impl ReferencePath {
    pub fn new(waypoints: Vec<Point2>) -> Result<Self> {
        if waypoints.len() < 2 {
            return Err(Error::invalid(format!(
                "a reference path needs at least 2 waypoints, got {}",
                waypoints.len()
            )));
        }
        let mut cumulative = Vec::with_capacity(waypoints.len());
        cumulative.push(0.0);
        for (i, pair) in waypoints.windows(2).enumerate() {
            if !(pair[1].x.is_finite() && pair[1].y.is_finite())
                || !(pair[0].x.is_finite() && pair[0].y.is_finite())
            {
                return Err(Error::invalid(format!("waypoint {i} is not finite")));
            }
            let step = pair[0].distance(&pair[1]);
            if step <= 0.0 {
                return Err(Error::invalid(format!(
                    "waypoints {} and {} coincide",
                    i,
                    i + 1
                )));
            }
            cumulative.push(cumulative[i] + step);
        }
        Ok(Self {
            waypoints,
            cumulative,
        })
    }

    pub fn waypoints(&self) -> &[Point2] {
        &self.waypoints
    }

    pub fn cumulative_arclength(&self) -> &[f64] {
        &self.cumulative
    }

    pub fn len(&self) -> usize {
        self.waypoints.len()
    }

    pub fn is_empty(&self) -> bool {
        self.waypoints.is_empty()
    }

    pub fn total_length(&self) -> f64 {
        *self
            .cumulative
            .last()
            .expect("path has at least two waypoints")
    }

    pub fn start(&self) -> Point2 {
        self.waypoints[0]
    }

    pub fn goal(&self) -> Point2 {
        *self
            .waypoints
            .last()
            .expect("path has at least two waypoints")
    }

    /// Heading of the first segment.
    pub fn start_heading(&self) -> f64 {
        let (a, b) = (self.waypoints[0], self.waypoints[1]);
        (b.y - a.y).atan2(b.x - a.x)
    }

    /// Closest point on the polyline, segment interiors included.
    ///
    /// Ties go to the lowest segment index.
    pub fn nearest_point(&self, position: Point2) -> PathProjection {
        let mut best = PathProjection {
            point: self.waypoints[0],
            segment: 0,
            distance: f64::INFINITY,
            arclength: 0.0,
        };
        for (i, pair) in self.waypoints.windows(2).enumerate() {
            let (a, b) = (pair[0], pair[1]);
            let (dx, dy) = (b.x - a.x, b.y - a.y);
            let len2 = dx * dx + dy * dy;
            let t = (((position.x - a.x) * dx + (position.y - a.y) * dy) / len2).clamp(0.0, 1.0);
            let foot = Point2::new(a.x + t * dx, a.y + t * dy);
            let distance = foot.distance(&position);
            if distance < best.distance {
                best = PathProjection {
                    point: foot,
                    segment: i,
                    distance,
                    arclength: self.cumulative[i]
                        + t * (self.cumulative[i + 1] - self.cumulative[i]),
                };
            }
        }
        best
    }

    /// Lookahead target: the first waypoint after the nearest point whose
    /// distance from the nearest point reaches `lookahead` while its
    /// predecessor's does not. Falls back to the final waypoint.
    pub fn lookahead_point(&self, pose: &Pose2D, lookahead: f64) -> Result<Point2> {
        if lookahead.is_nan() || lookahead <= 0.0 {
            return Err(Error::invalid(format!(
                "lookahead distance must be positive, got {lookahead}"
            )));
        }
        let proj = self.nearest_point(pose.position());
        let mut prev = self.waypoints[proj.segment].distance(&proj.point);
        for p in &self.waypoints[proj.segment + 1..] {
            let dist = p.distance(&proj.point);
            if prev < lookahead && dist >= lookahead {
                return Ok(*p);
            }
            prev = dist;
        }
        Ok(self.goal())
    }

    /// Unsigned distance from the pose position to the polyline.
    pub fn cross_track_error(&self, pose: &Pose2D) -> f64 {
        self.nearest_point(pose.position()).distance
    }

    /// Arc length from the projection of the pose to the final waypoint.
    pub fn remaining_distance(&self, pose: &Pose2D) -> f64 {
        (self.total_length() - self.nearest_point(pose.position()).arclength).max(0.0)
    }

    pub fn read_csv(path: &Path) -> Result<Self> {
        let csv_err = |source| Error::Csv {
            path: path.to_path_buf(),
            source,
        };
        let mut reader = csv::Reader::from_path(path).map_err(csv_err)?;
        let waypoints = reader
            .deserialize::<Point2>()
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(csv_err)?;
        Self::new(waypoints)
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let csv_err = |source| Error::Csv {
            path: path.to_path_buf(),
            source,
        };
        let mut writer = csv::Writer::from_path(path).map_err(csv_err)?;
        for p in &self.waypoints {
            writer.serialize(p).map_err(csv_err)?;
        }
        writer.flush().map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })
    }
}

/// Signed curvature of the arc leaving `pose` tangentially and passing
/// through `target`. Positive for a target on the robot's left.
pub fn compute_curvature(pose: &Pose2D, target: Point2) -> Result<f64> {
    let (dx, dy) = (target.x - pose.x, target.y - pose.y);
    let l = dx.hypot(dy);
    if l.is_nan() || l <= 1e-12 {
        return Err(Error::DegenerateGeometry(format!(
            "lookahead point ({}, {}) coincides with the robot position",
            target.x, target.y
        )));
    }
    let phi = dy.atan2(dx) - pose.theta;
    Ok(2.0 * phi.sin() / l)
}

/// Two straight legs joined at a corner; the second leg turns left by
/// `corner_angle` relative to the first.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CornerPathSpec {
    pub segment_length: f64,
    /// Heading change at the corner, radians.
    pub corner_angle: f64,
    pub waypoint_spacing: f64,
    pub start_pose: Pose2D,
}

impl CornerPathSpec {
    pub fn new(segment_length: f64, corner_angle: f64, start_pose: Pose2D) -> Self {
        Self {
            segment_length,
            corner_angle,
            waypoint_spacing: DEFAULT_WAYPOINT_SPACING,
            start_pose,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.segment_length > 0.0 && self.segment_length.is_finite()) {
            return Err(Error::invalid(format!(
                "segment_length must be positive, got {}",
                self.segment_length
            )));
        }
        if !(self.waypoint_spacing > 0.0 && self.waypoint_spacing < self.segment_length) {
            return Err(Error::invalid(format!(
                "waypoint_spacing must lie in (0, segment_length), got {}",
                self.waypoint_spacing
            )));
        }
        if !(self.corner_angle > 0.0 && self.corner_angle < PI) {
            return Err(Error::invalid(format!(
                "corner_angle must lie in (0, pi), got {}",
                self.corner_angle
            )));
        }
        if !self.start_pose.is_finite() {
            return Err(Error::invalid("start_pose must be finite"));
        }
        Ok(())
    }
}

pub fn generate_corner_path(spec: &CornerPathSpec) -> Result<ReferencePath> {
    spec.validate()?;
    let origin = spec.start_pose.position();
    let first = spec.start_pose.theta;
    let second = first + spec.corner_angle;

    // Sample offsets along one leg, always ending exactly on the leg length.
    let steps = (spec.segment_length / spec.waypoint_spacing - 1e-9).ceil() as usize;
    let offsets: Vec<f64> = (1..steps)
        .map(|k| k as f64 * spec.waypoint_spacing)
        .chain(std::iter::once(spec.segment_length))
        .collect();

    let corner = Point2::new(
        origin.x + spec.segment_length * first.cos(),
        origin.y + spec.segment_length * first.sin(),
    );
    let mut waypoints = Vec::with_capacity(2 * offsets.len() + 1);
    waypoints.push(origin);
    waypoints.extend(
        offsets[..offsets.len() - 1]
            .iter()
            .map(|s| Point2::new(origin.x + s * first.cos(), origin.y + s * first.sin())),
    );
    waypoints.push(corner);
    waypoints.extend(
        offsets
            .iter()
            .map(|s| Point2::new(corner.x + s * second.cos(), corner.y + s * second.sin())),
    );
    ReferencePath::new(waypoints)
}
