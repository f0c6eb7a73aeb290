//! Random instances: mixed robot types on empty maps or maps with
//! rectangular obstacles.
//!
//! Robots are generated round-robin over the types, so a prefix holding the
//! first `k` robots of every type is itself a valid instance.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::grid::{CellCoord, GridMap};
use crate::model::{Configuration, RobotSpec};
use crate::prioritized::Instance;

/// Placement attempts per start or goal before giving up.
pub const MAX_PLACEMENT_TRIES: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RobotType {
    pub radius: f64,
    pub v_translate: f64,
    pub omega_rotate: f64,
}

/// Small and fast, medium, large and slow.
pub const STANDARD_TYPES: [RobotType; 3] = [
    RobotType {
        radius: 0.3,
        v_translate: 1.5,
        omega_rotate: 180.0,
    },
    RobotType {
        radius: 0.5,
        v_translate: 1.0,
        omega_rotate: 180.0,
    },
    RobotType {
        radius: 1.0,
        v_translate: 0.5,
        omega_rotate: 180.0,
    },
];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MapKind {
    Empty,
    /// `count` blocks of `length x thickness` cells, each horizontal or
    /// vertical at random, placed fully inside the map (overlaps allowed).
    Rectangles { count: usize, length: usize, thickness: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub width: usize,
    pub height: usize,
    pub map: MapKind,
    /// `(type, count)` pairs.
    pub robots: Vec<(RobotType, usize)>,
}

impl GeneratorSpec {
    /// The three standard types with `per_type` robots each.
    pub fn mixed(width: usize, height: usize, map: MapKind, per_type: usize) -> Self {
        Self {
            width,
            height,
            map,
            robots: STANDARD_TYPES.iter().map(|&t| (t, per_type)).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GenError {
    #[error("no free {what} found for robot {robot} (radius {radius}) after {tries} tries")]
    Placement {
        robot: usize,
        what: &'static str,
        radius: f64,
        tries: usize,
    },
    #[error("obstacle of {length}x{thickness} cells does not fit a {width}x{height} map")]
    ObstacleTooLarge {
        length: usize,
        thickness: usize,
        width: usize,
        height: usize,
    },
}

/// A generated instance that remembers the type of every robot.
#[derive(Debug, Clone, PartialEq)]
pub struct MetaInstance {
    pub instance: Instance,
    pub robot_types: Vec<usize>,
    pub seed: u64,
}

impl MetaInstance {
    /// Keeps the first `k` robots of each type.
    pub fn truncated(&self, k: usize) -> Instance {
        let mut seen = vec![0usize; self.robot_types.iter().max().map_or(0, |m| m + 1)];
        let robots = self
            .instance
            .robots
            .iter()
            .zip(&self.robot_types)
            .filter(|(_, &t)| {
                seen[t] += 1;
                seen[t] <= k
            })
            .map(|(r, _)| *r)
            .collect();
        Instance::new(self.instance.map.clone(), robots)
    }
}

fn random_map(spec: &GeneratorSpec, rng: &mut ChaCha8Rng) -> Result<GridMap, GenError> {
    let mut map = GridMap::empty(spec.width, spec.height);
    if let MapKind::Rectangles {
        count,
        length,
        thickness,
    } = spec.map
    {
        for _ in 0..count {
            let (w, h) = if rng.gen_bool(0.5) { (length, thickness) } else { (thickness, length) };
            if w > spec.width || h > spec.height {
                return Err(GenError::ObstacleTooLarge {
                    length,
                    thickness,
                    width: spec.width,
                    height: spec.height,
                });
            }
            let x0 = rng.gen_range(0..=spec.width - w);
            let y0 = rng.gen_range(0..=spec.height - h);
            for j in y0..y0 + h {
                for i in x0..x0 + w {
                    map.set_blocked(CellCoord::new(i as i32, j as i32), true);
                }
            }
        }
    }
    Ok(map)
}

fn place(
    map: &GridMap,
    placed: &[(f64, f64, f64)],
    radius: f64,
    robot: usize,
    what: &'static str,
    rng: &mut ChaCha8Rng,
) -> Result<Configuration, GenError> {
    for _ in 0..MAX_PLACEMENT_TRIES {
        let c = CellCoord::new(
            rng.gen_range(0..map.width()) as i32,
            rng.gen_range(0..map.height()) as i32,
        );
        let p = c.center();
        if !map.disk_fits(p, radius) {
            continue;
        }
        if placed
            .iter()
            .any(|&(x, y, r)| ((x - p.x).powi(2) + (y - p.y).powi(2)).sqrt() < r + radius)
        {
            continue;
        }
        let theta = rng.gen_range(0..360) as f64;
        return Ok(Configuration::new(p.x, p.y, theta));
    }
    Err(GenError::Placement {
        robot,
        what,
        radius,
        tries: MAX_PLACEMENT_TRIES,
    })
}

/// Deterministic in `(spec, seed)`.
pub fn generate(spec: &GeneratorSpec, seed: u64) -> Result<MetaInstance, GenError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let map = random_map(spec, &mut rng)?;

    let mut remaining: Vec<usize> = spec.robots.iter().map(|&(_, n)| n).collect();
    let mut types = Vec::new();
    while remaining.iter().any(|&n| n > 0) {
        for (t, n) in remaining.iter_mut().enumerate() {
            if *n > 0 {
                *n -= 1;
                types.push(t);
            }
        }
    }

    let mut starts = Vec::new();
    let mut goals = Vec::new();
    let mut robots = Vec::with_capacity(types.len());
    for (idx, &t) in types.iter().enumerate() {
        let ty = spec.robots[t].0;
        let start = place(&map, &starts, ty.radius, idx, "start", &mut rng)?;
        let goal = place(&map, &goals, ty.radius, idx, "goal", &mut rng)?;
        starts.push((start.x, start.y, ty.radius));
        goals.push((goal.x, goal.y, ty.radius));
        robots.push(RobotSpec {
            radius: ty.radius,
            v_translate: ty.v_translate,
            omega_rotate: ty.omega_rotate,
            start,
            goal,
        });
    }
    Ok(MetaInstance {
        instance: Instance::new(map, robots),
        robot_types: types,
        seed,
    })
}
