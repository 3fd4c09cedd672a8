//! Per-run evaluation metrics and their aggregation over trials.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::ReferencePath;
use crate::simulator::{ScenarioResult, TrajectoryLog};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScenarioMetrics {
    /// Percentage of control steps whose raw command broke a limit.
    pub violation_ratio: f64,
    pub mean_cte: f64,
    pub max_cte: f64,
    pub travel_time: f64,
    pub reached_goal: bool,
}

impl ScenarioMetrics {
    pub fn from_result(result: &ScenarioResult, path: &ReferencePath) -> Result<Self> {
        let (mean_cte, max_cte) = cross_track_stats(&result.log, path)?;
        Ok(Self {
            violation_ratio: violation_ratio(&result.log)?,
            mean_cte,
            max_cte,
            travel_time: result.travel_time,
            reached_goal: result.reached_goal,
        })
    }
}

pub fn violation_ratio(log: &TrajectoryLog) -> Result<f64> {
    if log.is_empty() {
        return Err(Error::invalid("violation ratio of an empty log"));
    }
    let flagged = log.steps.iter().filter(|s| s.violations.any()).count();
    Ok(100.0 * flagged as f64 / log.len() as f64)
}

/// Mean and maximum cross-track error over every logged pose.
pub fn cross_track_stats(log: &TrajectoryLog, path: &ReferencePath) -> Result<(f64, f64)> {
    if log.is_empty() {
        return Err(Error::invalid("cross-track statistics of an empty log"));
    }
    let (sum, max) = log
        .steps
        .iter()
        .map(|s| path.cross_track_error(&s.state.pose))
        .fold((0.0, 0.0f64), |(sum, max), e| (sum + e, max.max(e)));
    Ok((sum / log.len() as f64, max))
}

/// Mean and sample standard deviation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Stat {
    pub mean: f64,
    pub sd: f64,
}

impl Stat {
    /// Sample SD (n - 1 denominator); zero for a single value.
    pub fn of(values: &[f64]) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::invalid("statistics of an empty sample"));
        }
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let sd = if values.len() < 2 {
            0.0
        } else {
            (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
        };
        Ok(Self { mean, sd })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AggregateMetrics {
    pub violation_ratio: Stat,
    pub mean_cte: Stat,
    pub max_cte: Stat,
    pub travel_time: Stat,
    pub trial_count: usize,
    /// Trials that reached the goal.
    pub reached_count: usize,
}

pub fn aggregate(trials: &[ScenarioMetrics]) -> Result<AggregateMetrics> {
    if trials.is_empty() {
        return Err(Error::invalid("cannot aggregate zero trials"));
    }
    let stat = |f: fn(&ScenarioMetrics) -> f64| Stat::of(&trials.iter().map(f).collect::<Vec<_>>());
    Ok(AggregateMetrics {
        violation_ratio: stat(|m| m.violation_ratio)?,
        mean_cte: stat(|m| m.mean_cte)?,
        max_cte: stat(|m| m.max_cte)?,
        travel_time: stat(|m| m.travel_time)?,
        trial_count: trials.len(),
        reached_count: trials.iter().filter(|m| m.reached_goal).count(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::controllers::VelocityCommand;
    use crate::geometry::{Point2, Pose2D, RobotState};
    use crate::simulator::{TrajectoryStep, ViolationFlags};
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn step(y: f64, flagged: bool) -> TrajectoryStep {
        TrajectoryStep {
            time: 0.0,
            state: RobotState::at_rest(Pose2D::new(1.0, y, 0.0)),
            command: VelocityCommand::default(),
            executed: VelocityCommand::default(),
            violations: ViolationFlags {
                acceleration: flagged,
                ..ViolationFlags::default()
            },
        }
    }

    fn straight() -> ReferencePath {
        ReferencePath::new(vec![Point2::new(0.0, 0.0), Point2::new(5.0, 0.0)]).unwrap()
    }

    fn metrics(v: f64) -> ScenarioMetrics {
        ScenarioMetrics {
            violation_ratio: v,
            mean_cte: v / 10.0,
            max_cte: v / 5.0,
            travel_time: 20.0 + v,
            reached_goal: true,
        }
    }

    #[test]
    fn violation_counting() {
        let clean = TrajectoryLog {
            steps: vec![step(0.0, false); 4],
        };
        assert_eq!(violation_ratio(&clean).unwrap(), 0.0);
        let mut one = clean.clone();
        one.steps[2] = step(0.0, true);
        assert_eq!(violation_ratio(&one).unwrap(), 25.0);
        assert!(violation_ratio(&TrajectoryLog::default()).is_err());
    }

    #[test]
    fn cross_track_examples() {
        let path = straight();
        let on_path = TrajectoryLog {
            steps: vec![step(0.0, false); 3],
        };
        assert_eq!(cross_track_stats(&on_path, &path).unwrap(), (0.0, 0.0));
        let log = TrajectoryLog {
            steps: vec![step(0.1, false), step(-0.3, false)],
        };
        let (mean, max) = cross_track_stats(&log, &path).unwrap();
        assert_abs_diff_eq!(mean, 0.2, epsilon = 1e-15);
        assert_abs_diff_eq!(max, 0.3, epsilon = 1e-15);
        assert!(cross_track_stats(&TrajectoryLog::default(), &path).is_err());
    }

    #[test]
    fn aggregate_examples() {
        let same = aggregate(&[metrics(2.0); 3]).unwrap();
        assert_eq!(same.violation_ratio.sd, 0.0);
        assert_eq!(same.trial_count, 3);
        let single = aggregate(&[metrics(5.0)]).unwrap();
        assert_eq!(single.travel_time.sd, 0.0);
        let two = aggregate(&[metrics(1.0), metrics(3.0)]).unwrap();
        assert_eq!(two.violation_ratio.mean, 2.0);
        assert_abs_diff_eq!(two.violation_ratio.sd, 2f64.sqrt(), epsilon = 1e-15);
        assert!(aggregate(&[]).is_err());
    }

    proptest! {
        #[test]
        fn aggregate_permutation_invariant(mut values in proptest::collection::vec(0.0f64..100.0, 1..8), seed: u64) {
            let a = aggregate(&values.iter().map(|v| metrics(*v)).collect::<Vec<_>>()).unwrap();
            // Deterministic shuffle by rotation.
            let len = values.len();
            values.rotate_left((seed as usize) % len);
            values.reverse();
            let b = aggregate(&values.iter().map(|v| metrics(*v)).collect::<Vec<_>>()).unwrap();
            prop_assert!((a.violation_ratio.mean - b.violation_ratio.mean).abs() <= 1e-9);
            prop_assert!((a.violation_ratio.sd - b.violation_ratio.sd).abs() <= 1e-9);
        }

        #[test]
        fn duplicate_mean_trial_keeps_mean(values in proptest::collection::vec(0.0f64..100.0, 1..8)) {
            let trials: Vec<_> = values.iter().map(|v| metrics(*v)).collect();
            let a = aggregate(&trials).unwrap();
            let mut extended = trials.clone();
            extended.push(metrics(a.violation_ratio.mean));
            let b = aggregate(&extended).unwrap();
            prop_assert!((a.violation_ratio.mean - b.violation_ratio.mean).abs() <= 1e-9);
        }

        #[test]
        fn max_dominates_mean(ys in proptest::collection::vec(-1.0f64..1.0, 1..30)) {
            let log = TrajectoryLog { steps: ys.iter().map(|y| step(*y, false)).collect() };
            let (mean, max) = cross_track_stats(&log, &straight()).unwrap();
            prop_assert!(0.0 <= mean && mean <= max + 1e-15);
        }
    }
}
