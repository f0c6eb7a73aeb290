//! Radius inflation, plan-time wait augmentation and a delay-injecting
//! execution simulator.
//!
//! In simulation a delayed translation follows the planned segment but
//! reaches its endpoint `delay` time units late. Each later wait is shortened
//! by the accumulated lateness, so departures happen on time whenever the
//! waits can absorb it.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::config::PlannerConfig;
use crate::geometry::Point2;
use crate::model::{Primitive, Trajectory};
use crate::prioritized::{plan_all, Instance, PlanFailure, Solution};
use crate::validate::{dynamic_conflicts, CheckMode, ConflictReport, DEFAULT_DT};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum DelayModel {
    #[default]
    None,
    /// Uniform in `[0, max_delay]`, drawn per translation.
    Uniform { max_delay: f64 },
    Fixed { delay: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(default)]
pub struct RobustnessConfig {
    /// Added to every robot radius at planning time.
    pub inflation: f64,
    /// Minimum wait before every translation.
    pub d: f64,
    pub delay_model: DelayModel,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum RobustnessError {
    #[error("inflation must be non-negative, got {0}")]
    Inflation(f64),
    #[error("wait duration d must be non-negative, got {0}")]
    Wait(f64),
    #[error("delays must be non-negative, got {0}")]
    Delay(f64),
}

impl RobustnessConfig {
    pub fn validate(&self) -> Result<(), RobustnessError> {
        if !(self.inflation >= 0.0) {
            return Err(RobustnessError::Inflation(self.inflation));
        }
        if !(self.d >= 0.0) {
            return Err(RobustnessError::Wait(self.d));
        }
        match self.delay_model {
            DelayModel::Uniform { max_delay: x } | DelayModel::Fixed { delay: x } if !(x >= 0.0) => {
                Err(RobustnessError::Delay(x))
            }
            _ => Ok(()),
        }
    }
}

/// Plans with every translation preceded by a wait of at least `d`.
pub fn augment_with_waits(instance: &Instance, cfg: &PlannerConfig, d: f64) -> Result<Solution, PlanFailure> {
    let mut cfg = cfg.clone();
    cfg.wait_floor = d;
    plan_all(instance, &cfg)
}

/// Plans the inflated instance with wait floor `rcfg.d`.
pub fn plan_robust(instance: &Instance, cfg: &PlannerConfig, rcfg: &RobustnessConfig) -> Result<Solution, PlanFailure> {
    augment_with_waits(&instance.inflated(rcfg.inflation), cfg, rcfg.d)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Waypoint {
    pub at: Point2,
    pub planned_time: f64,
    pub realized_time: f64,
    /// Lateness carried at arrival, before any of it is discharged.
    pub lateness: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RobotTrace {
    pub waypoints: Vec<Waypoint>,
    pub realized: Trajectory,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExecutionTrace {
    pub seed: u64,
    pub robots: Vec<RobotTrace>,
}

fn draw_delay(model: DelayModel, rng: &mut ChaCha8Rng) -> f64 {
    match model {
        DelayModel::None => 0.0,
        DelayModel::Fixed { delay } => delay,
        DelayModel::Uniform { max_delay } if max_delay > 0.0 => rng.gen_range(0.0..=max_delay),
        DelayModel::Uniform { .. } => 0.0,
    }
}

fn execute(traj: &Trajectory, model: DelayModel, rng: &mut ChaCha8Rng) -> RobotTrace {
    // Realized times are planned times plus the current lateness.
    let mut late = 0.0;
    let mut waypoints = Vec::new();
    let mut prims = Vec::with_capacity(traj.primitives.len());
    for p in &traj.primitives {
        let start = p.t_start() + late;
        let realized = match *p {
            Primitive::Wait { .. } => {
                late = (late - p.duration()).max(0.0);
                p.retimed(start, p.t_end() + late)
            }
            Primitive::Rotate { .. } => p.retimed(start, p.t_end() + late),
            Primitive::Translate { to, .. } => {
                late += draw_delay(model, rng);
                let q = p.retimed(start, p.t_end() + late);
                waypoints.push(Waypoint {
                    at: to,
                    planned_time: p.t_end(),
                    realized_time: q.t_end(),
                    lateness: late,
                });
                q
            }
        };
        // Fully discharged waits leave no trace.
        if !(matches!(realized, Primitive::Wait { .. }) && realized.duration() == 0.0) {
            prims.push(realized);
        }
    }
    RobotTrace {
        waypoints,
        realized: Trajectory::new(traj.start, prims),
    }
}

/// Executes `solution` under `rcfg.delay_model` and checks the realized
/// motion against the true radii of `instance` by sampling.
pub fn simulate_execution(
    solution: &Solution,
    instance: &Instance,
    rcfg: &RobustnessConfig,
    seed: u64,
) -> (ExecutionTrace, ConflictReport) {
    let robots: Vec<RobotTrace> = solution
        .trajectories
        .iter()
        .enumerate()
        .map(|(i, t)| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            execute(t, rcfg.delay_model, &mut rng)
        })
        .collect();
    let realized: Vec<Trajectory> = robots.iter().map(|r| r.realized.clone()).collect();
    let radii: Vec<f64> = instance.robots.iter().map(|r| r.radius).collect();
    let conflicts = dynamic_conflicts(&realized, &radii, CheckMode::Sampled { dt: DEFAULT_DT });
    (ExecutionTrace { seed, robots }, ConflictReport { conflicts })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::GridMap;
    use crate::model::{Configuration, RobotSpec};

    fn single() -> Instance {
        let robot = RobotSpec {
            radius: 0.5,
            v_translate: 1.0,
            omega_rotate: 180.0,
            start: Configuration::new(0.5, 0.5, 0.0),
            goal: Configuration::new(3.5, 3.5, 90.0),
        };
        Instance::new(GridMap::from_rows(&["....", ".@@.", ".@@.", "...."], 1.0).unwrap(), vec![robot])
    }

    #[test]
    fn augmented_single_robot_adds_d_per_translation() {
        let inst = single();
        let cfg = PlannerConfig::default();
        let base = augment_with_waits(&inst, &cfg, 0.0).unwrap();
        let aug = augment_with_waits(&inst, &cfg, 5.0).unwrap();
        let n = base.trajectories[0].translation_count();
        assert_eq!(n, 2);
        assert_eq!(aug.trajectories[0].translation_count(), n);
        assert!((aug.flowtime - (base.flowtime + 5.0 * n as f64)).abs() < 1e-9);
        assert_eq!(base, {
            let mut again = plan_all(&inst, &cfg).unwrap();
            again.elapsed = base.elapsed;
            again
        });
    }

    #[test]
    fn no_delays_reproduce_the_plan() {
        let inst = single();
        let sol = augment_with_waits(&inst, &PlannerConfig::default(), 2.0).unwrap();
        let (trace, report) = simulate_execution(&sol, &inst, &RobustnessConfig::default(), 3);
        assert!(report.is_clean());
        assert_eq!(trace.robots[0].realized, sol.trajectories[0]);
        assert!(trace.robots[0].waypoints.iter().all(|w| w.lateness == 0.0));
    }

    #[test]
    fn fixed_delay_equal_to_d_is_fully_absorbed() {
        let inst = single();
        let sol = augment_with_waits(&inst, &PlannerConfig::default(), 2.0).unwrap();
        let rcfg = RobustnessConfig {
            inflation: 0.0,
            d: 2.0,
            delay_model: DelayModel::Fixed { delay: 2.0 },
        };
        let (trace, _) = simulate_execution(&sol, &inst, &rcfg, 0);
        let planned: Vec<f64> = sol.trajectories[0]
            .primitives
            .iter()
            .filter(|p| p.is_translation())
            .map(|p| p.t_start())
            .collect();
        let realized: Vec<f64> = trace.robots[0]
            .realized
            .primitives
            .iter()
            .filter(|p| p.is_translation())
            .map(|p| p.t_start())
            .collect();
        assert_eq!(planned, realized);
        for w in &trace.robots[0].waypoints {
            assert!((w.realized_time - w.planned_time - 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn seeds_are_reproducible() {
        let inst = single();
        let sol = augment_with_waits(&inst, &PlannerConfig::default(), 1.0).unwrap();
        let rcfg = RobustnessConfig {
            inflation: 0.0,
            d: 1.0,
            delay_model: DelayModel::Uniform { max_delay: 3.0 },
        };
        let a = simulate_execution(&sol, &inst, &rcfg, 42);
        let b = simulate_execution(&sol, &inst, &rcfg, 42);
        let c = simulate_execution(&sol, &inst, &rcfg, 43);
        assert_eq!(a, b);
        assert_ne!(a.0, c.0);
    }
}
