//! Versioned JSON formats for instances, solutions and reports.
//!
//! Numbers are written with the shortest representation that parses back to
//! the same `f64`, so write -> read -> write is byte-identical.

use std::path::Path;
use std::time::Duration;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::config::PlannerConfig;
use crate::grid::{GridError, GridMap};
use crate::model::{Configuration, Primitive, RobotSpec, Trajectory};
use crate::prioritized::{Instance, InstanceError, Solution};

pub const INSTANCE_FORMAT: &str = "aasipp-instance/1";
pub const SOLUTION_FORMAT: &str = "aasipp-solution/1";

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported format tag {found:?}, expected {expected:?}")]
    Version { found: String, expected: &'static str },
    #[error("map: {0}")]
    Grid(#[from] GridError),
    #[error("instance: {0}")]
    Instance(#[from] InstanceError),
    #[error("solution has {got} robots, instance has {expected}")]
    RobotCount { got: usize, expected: usize },
}

/// Serde adapter writing infinite values as the string `"inf"`.
pub mod float_or_inf {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Num(f64),
        Text(String),
    }

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_infinite() && *v > 0.0 {
            s.serialize_str("inf")
        } else {
            s.serialize_f64(*v)
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Num(v) => Ok(v),
            Repr::Text(t) if t == "inf" => Ok(f64::INFINITY),
            Repr::Text(t) => Err(serde::de::Error::custom(format!("expected a number or \"inf\", got {t:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MapSection {
    pub width: usize,
    pub height: usize,
    pub cell_size: f64,
    /// Row `j` lists cells `(0, j) .. (width - 1, j)`; `.` free, `@` blocked.
    pub rows: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceFile {
    pub format: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub map: MapSection,
    pub robots: Vec<RobotSpec>,
}

impl InstanceFile {
    pub fn from_instance(instance: &Instance, seed: Option<u64>) -> Self {
        let map = &instance.map;
        Self {
            format: INSTANCE_FORMAT.to_string(),
            seed,
            map: MapSection {
                width: map.width(),
                height: map.height(),
                cell_size: map.cell_size(),
                rows: map.to_rows(),
            },
            robots: instance.robots.clone(),
        }
    }

    /// Parses the map and checks the instance invariants.
    pub fn to_instance(&self) -> Result<Instance, FormatError> {
        check_tag(&self.format, INSTANCE_FORMAT)?;
        let map = GridMap::from_rows(&self.map.rows, self.map.cell_size)?;
        if map.width() != self.map.width || map.height() != self.map.height {
            return Err(GridError::SizeMismatch {
                expected: self.map.width * self.map.height,
                got: map.width() * map.height(),
            }
            .into());
        }
        let instance = Instance::new(map, self.robots.clone());
        instance.check()?;
        Ok(instance)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    pub flowtime: f64,
    pub makespan: f64,
    pub attempts: usize,
    /// Omitted in benchmark output so that reruns are byte-identical.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub runtime_s: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RobotPlan {
    pub start: Configuration,
    pub arrival_time: f64,
    pub primitives: Vec<Primitive>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolutionFile {
    pub format: String,
    pub config: PlannerConfig,
    pub metrics: Metrics,
    pub order: Vec<usize>,
    pub robots: Vec<RobotPlan>,
}

impl SolutionFile {
    pub fn from_solution(solution: &Solution, cfg: &PlannerConfig, with_runtime: bool) -> Self {
        Self {
            format: SOLUTION_FORMAT.to_string(),
            config: cfg.clone(),
            metrics: Metrics {
                flowtime: solution.flowtime,
                makespan: solution.makespan,
                attempts: solution.attempts,
                runtime_s: with_runtime.then_some(solution.elapsed.as_secs_f64()),
            },
            order: solution.order.clone(),
            robots: solution
                .trajectories
                .iter()
                .map(|t| RobotPlan {
                    start: t.start,
                    arrival_time: t.arrival_time,
                    primitives: t.primitives.clone(),
                })
                .collect(),
        }
    }

    /// Rebuilds the solution; metrics are recomputed from the primitives.
    pub fn to_solution(&self) -> Result<Solution, FormatError> {
        check_tag(&self.format, SOLUTION_FORMAT)?;
        let trajectories = self
            .robots
            .iter()
            .map(|r| Trajectory::new(r.start, r.primitives.clone()))
            .collect();
        let elapsed = Duration::from_secs_f64(self.metrics.runtime_s.unwrap_or(0.0).max(0.0));
        Ok(Solution::from_trajectories(
            trajectories,
            self.metrics.attempts,
            self.order.clone(),
            elapsed,
        ))
    }
}

fn check_tag(found: &str, expected: &'static str) -> Result<(), FormatError> {
    if found == expected {
        Ok(())
    } else {
        Err(FormatError::Version {
            found: found.to_string(),
            expected,
        })
    }
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("plain data serializes");
    s.push('\n');
    s
}

pub fn from_json<T: DeserializeOwned>(text: &str) -> Result<T, FormatError> {
    Ok(serde_json::from_str(text)?)
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, FormatError> {
    from_json(&std::fs::read_to_string(path)?)
}

/// Writes to `path`, or to standard output when `path` is `None`.
pub fn write_json<T: Serialize>(path: Option<&Path>, value: &T) -> Result<(), FormatError> {
    let text = to_json(value);
    match path {
        Some(p) => std::fs::write(p, text)?,
        None => {
            use std::io::Write;
            std::io::stdout().write_all(text.as_bytes())?;
        }
    }
    Ok(())
}
