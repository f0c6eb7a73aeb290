//! Sequential planning in priority order, with start blocking for robots that
//! have not been planned yet and promotion of a failed robot to the front.

use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::config::{PlannerConfig, PriorityScheme};
use crate::grid::GridMap;
use crate::model::{RobotSpec, Trajectory};
use crate::obstacles::{DynamicObstacle, ObstacleSet};
use crate::sipp::{plan_single_until, PlanError};

#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub map: GridMap,
    pub robots: Vec<RobotSpec>,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum InstanceError {
    #[error("robot {robot}: {what} does not fit on the map")]
    Blocked { robot: usize, what: &'static str },
    #[error("robot {robot}: radius, speed and rotation speed must be positive")]
    Kinematics { robot: usize },
    #[error("robots {a} and {b} overlap at their {what}s")]
    Overlap { a: usize, b: usize, what: &'static str },
}

impl Instance {
    pub fn new(map: GridMap, robots: Vec<RobotSpec>) -> Self {
        Self { map, robots }
    }

    /// Static validity of every start and goal plus pairwise non-overlap.
    pub fn check(&self) -> Result<(), InstanceError> {
        for (i, r) in self.robots.iter().enumerate() {
            if !(r.radius > 0.0 && r.v_translate > 0.0 && r.omega_rotate > 0.0) {
                return Err(InstanceError::Kinematics { robot: i });
            }
            if !self.map.disk_fits(r.start.position(), r.radius) {
                return Err(InstanceError::Blocked { robot: i, what: "start" });
            }
            if !self.map.disk_fits(r.goal.position(), r.radius) {
                return Err(InstanceError::Blocked { robot: i, what: "goal" });
            }
        }
        for a in 0..self.robots.len() {
            for b in a + 1..self.robots.len() {
                let (ra, rb) = (&self.robots[a], &self.robots[b]);
                let reach = ra.radius + rb.radius;
                if ra.start.position().distance(rb.start.position()) < reach {
                    return Err(InstanceError::Overlap { a, b, what: "start" });
                }
                if ra.goal.position().distance(rb.goal.position()) < reach {
                    return Err(InstanceError::Overlap { a, b, what: "goal" });
                }
            }
        }
        Ok(())
    }

    /// A copy with every radius grown by `extra`.
    pub fn inflated(&self, extra: f64) -> Instance {
        let mut out = self.clone();
        for r in &mut out.robots {
            r.radius += extra;
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    /// Indexed by robot, not by priority.
    pub trajectories: Vec<Trajectory>,
    pub flowtime: f64,
    pub makespan: f64,
    /// Number of planning passes (1 + reschedules).
    pub attempts: usize,
    /// Final priority order.
    pub order: Vec<usize>,
    pub elapsed: Duration,
}

impl Solution {
    pub fn from_trajectories(trajectories: Vec<Trajectory>, attempts: usize, order: Vec<usize>, elapsed: Duration) -> Self {
        let flowtime = trajectories.iter().map(|t| t.arrival_time).sum();
        let makespan = trajectories.iter().map(|t| t.arrival_time).fold(0.0, f64::max);
        Self {
            trajectories,
            flowtime,
            makespan,
            attempts,
            order,
            elapsed,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FailureKind {
    /// The robot failed while already planned first.
    TopPriorityUnsolvable,
    RescheduleBudgetExhausted,
    Timeout,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("planning failed ({kind:?}) at robot {robot} after {attempts} attempt(s): {cause}")]
pub struct PlanFailure {
    pub kind: FailureKind,
    pub robot: usize,
    pub attempts: usize,
    pub cause: PlanError,
}

/// Robot indices sorted by ascending start-goal distance, ties by index.
pub fn assign_priorities(instance: &Instance) -> Vec<usize> {
    let mut order: Vec<usize> = (0..instance.robots.len()).collect();
    order.sort_by(|&a, &b| {
        let (da, db) = (
            instance.robots[a].straight_line_distance(),
            instance.robots[b].straight_line_distance(),
        );
        da.total_cmp(&db)
    });
    order
}

/// Moves `robot` to the front, keeping the relative order of the rest.
pub fn promote(order: &[usize], robot: usize) -> Vec<usize> {
    std::iter::once(robot)
        .chain(order.iter().copied().filter(|&r| r != robot))
        .collect()
}

pub fn initial_order(instance: &Instance, scheme: PriorityScheme) -> Vec<usize> {
    match scheme {
        PriorityScheme::DistanceAscending => assign_priorities(instance),
        PriorityScheme::AsGiven => (0..instance.robots.len()).collect(),
    }
}

/// One pass over `order`. Returns the trajectories or the failing position.
fn plan_in_order(
    instance: &Instance,
    cfg: &PlannerConfig,
    order: &[usize],
    deadline: Instant,
) -> Result<Vec<Trajectory>, (usize, PlanError)> {
    let map = &instance.map;
    let mut obstacles = ObstacleSet::new(map.width(), map.height());
    let mut blockers = vec![None; instance.robots.len()];
    if cfg.ssi_duration > 0.0 {
        for &r in order {
            let robot = &instance.robots[r];
            blockers[r] = Some(obstacles.add(DynamicObstacle::blocker(
                robot.start.position(),
                robot.radius,
                cfg.ssi_duration,
            )));
        }
    }

    let mut planned: Vec<Option<Trajectory>> = vec![None; instance.robots.len()];
    for (pos, &r) in order.iter().enumerate() {
        if Instant::now() >= deadline {
            return Err((pos, PlanError::Timeout));
        }
        if let Some(b) = blockers[r] {
            obstacles.set_active(b, false);
        }
        let robot = &instance.robots[r];
        let traj = plan_single_until(robot, map, &obstacles, cfg, Some(deadline)).map_err(|e| (pos, e))?;
        obstacles.add(DynamicObstacle::from_trajectory(&traj, robot.radius));
        planned[r] = Some(traj);
    }
    Ok(planned.into_iter().map(|t| t.expect("every robot planned")).collect())
}

/// Plans every robot, promoting failed robots and restarting until success,
/// a hard failure, the reschedule budget, or the deadline.
pub fn plan_all(instance: &Instance, cfg: &PlannerConfig) -> Result<Solution, PlanFailure> {
    let started = Instant::now();
    let deadline = started + Duration::from_secs_f64(cfg.timeout_s);
    let budget = cfg.max_reschedules.unwrap_or(instance.robots.len());
    let mut order = initial_order(instance, cfg.priority_scheme);
    let mut attempts = 0;
    loop {
        attempts += 1;
        match plan_in_order(instance, cfg, &order, deadline) {
            Ok(trajectories) => {
                return Ok(Solution::from_trajectories(trajectories, attempts, order, started.elapsed()));
            }
            Err((pos, cause)) => {
                let robot = order[pos];
                let kind = if cause == PlanError::Timeout {
                    Some(FailureKind::Timeout)
                } else if pos == 0 {
                    Some(FailureKind::TopPriorityUnsolvable)
                } else if attempts > budget {
                    Some(FailureKind::RescheduleBudgetExhausted)
                } else {
                    None
                };
                if let Some(kind) = kind {
                    return Err(PlanFailure {
                        kind,
                        robot,
                        attempts,
                        cause,
                    });
                }
                order = promote(&order, robot);
            }
        }
    }
}
