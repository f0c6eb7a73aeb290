//! Continuous-time, any-angle prioritized planning for disk robots of
//! different sizes and speeds on grid maps.
//!
//! The single-robot search ([`sipp`]) runs over (cell, safe interval) nodes
//! and inserts waits only when a departure would collide. [`prioritized`]
//! chains it across robots with temporary start blocking and promotion of
//! failed robots. [`validate`] certifies results independently and
//! [`robustness`] perturbs their execution.

// Parameter guards are written `!(x > 0.0)` so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod benchmark;
pub mod config;
pub mod generator;
pub mod geometry;
pub mod grid;
pub mod io;
pub mod model;
pub mod obstacles;
pub mod par;
pub mod prioritized;
pub mod robustness;
pub mod sipp;
pub mod validate;

pub use config::{PlannerConfig, PriorityScheme};
pub use geometry::{Point2, TimeInterval};
pub use grid::{CellCoord, GridMap};
pub use model::{Configuration, Primitive, RobotSpec, Trajectory};
pub use prioritized::{plan_all, FailureKind, Instance, PlanFailure, Solution};
pub use sipp::{plan_single, PlanError};
pub use validate::{validate_solution, CheckMode, ConflictReport};
