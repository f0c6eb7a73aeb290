//! Robots, configurations and timed trajectories.

use serde::{Deserialize, Serialize};

use crate::geometry::{heading_delta, normalize_heading, MotionSegment, Point2, INFINITY};

/// Position (cell units) plus heading in degrees, `[0, 360)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Configuration {
    pub x: f64,
    pub y: f64,
    pub theta: f64,
}

impl Configuration {
    pub fn new(x: f64, y: f64, theta: f64) -> Self {
        Self {
            x,
            y,
            theta: normalize_heading(theta),
        }
    }

    pub fn position(&self) -> Point2 {
        Point2::new(self.x, self.y)
    }
}

/// Geometry and kinematics of one disk robot.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RobotSpec {
    pub radius: f64,
    /// Cells per time unit.
    pub v_translate: f64,
    /// Degrees per time unit; `inf` means rotations are instantaneous.
    #[serde(with = "crate::io::float_or_inf")]
    pub omega_rotate: f64,
    pub start: Configuration,
    pub goal: Configuration,
}

impl RobotSpec {
    pub fn rotation_time(&self, from_deg: f64, to_deg: f64) -> f64 {
        let delta = heading_delta(from_deg, to_deg);
        if delta == 0.0 {
            0.0
        } else {
            delta / self.omega_rotate
        }
    }

    pub fn travel_time(&self, from: Point2, to: Point2) -> f64 {
        from.distance(to) / self.v_translate
    }

    pub fn straight_line_distance(&self) -> f64 {
        self.start.position().distance(self.goal.position())
    }
}

/// One timed action. Consecutive primitives share their boundary times.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Primitive {
    Wait {
        at: Point2,
        heading: f64,
        t_start: f64,
        t_end: f64,
    },
    Rotate {
        at: Point2,
        from_heading: f64,
        to_heading: f64,
        t_start: f64,
        t_end: f64,
    },
    Translate {
        from: Point2,
        to: Point2,
        heading: f64,
        t_start: f64,
        t_end: f64,
    },
}

impl Primitive {
    pub fn t_start(&self) -> f64 {
        match *self {
            Primitive::Wait { t_start, .. }
            | Primitive::Rotate { t_start, .. }
            | Primitive::Translate { t_start, .. } => t_start,
        }
    }

    pub fn t_end(&self) -> f64 {
        match *self {
            Primitive::Wait { t_end, .. } | Primitive::Rotate { t_end, .. } | Primitive::Translate { t_end, .. } => {
                t_end
            }
        }
    }

    pub fn duration(&self) -> f64 {
        self.t_end() - self.t_start()
    }

    pub fn start_position(&self) -> Point2 {
        match *self {
            Primitive::Wait { at, .. } | Primitive::Rotate { at, .. } => at,
            Primitive::Translate { from, .. } => from,
        }
    }

    pub fn end_position(&self) -> Point2 {
        match *self {
            Primitive::Wait { at, .. } | Primitive::Rotate { at, .. } => at,
            Primitive::Translate { to, .. } => to,
        }
    }

    pub fn is_translation(&self) -> bool {
        matches!(self, Primitive::Translate { .. })
    }

    /// Same motion, with a new time window.
    pub fn retimed(&self, t_start: f64, t_end: f64) -> Primitive {
        let mut p = *self;
        match &mut p {
            Primitive::Wait { t_start: s, t_end: e, .. }
            | Primitive::Rotate { t_start: s, t_end: e, .. }
            | Primitive::Translate { t_start: s, t_end: e, .. } => {
                *s = t_start;
                *e = t_end;
            }
        }
        p
    }

    pub fn to_segment(&self) -> MotionSegment {
        match *self {
            Primitive::Wait { at, t_start, t_end, .. } | Primitive::Rotate { at, t_start, t_end, .. } => {
                MotionSegment::stationary(at, t_start, t_end)
            }
            Primitive::Translate {
                from, to, t_start, t_end, ..
            } => MotionSegment::between(from, to, t_start, t_end),
        }
    }
}

/// A complete plan for one robot: time-contiguous primitives from `t = 0`,
/// after which the robot rests at its goal forever.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub start: Configuration,
    pub primitives: Vec<Primitive>,
    /// End of the last primitive (0 when the robot never moves).
    pub arrival_time: f64,
}

impl Trajectory {
    pub fn new(start: Configuration, primitives: Vec<Primitive>) -> Self {
        let arrival_time = primitives.last().map_or(0.0, Primitive::t_end);
        Self {
            start,
            primitives,
            arrival_time,
        }
    }

    pub fn final_position(&self) -> Point2 {
        self.primitives
            .last()
            .map_or(self.start.position(), Primitive::end_position)
    }

    pub fn final_heading(&self) -> f64 {
        match self.primitives.last() {
            Some(&Primitive::Rotate { to_heading, .. }) => to_heading,
            Some(&Primitive::Translate { heading, .. } | &Primitive::Wait { heading, .. }) => heading,
            None => self.start.theta,
        }
    }

    pub fn translation_count(&self) -> usize {
        self.primitives.iter().filter(|p| p.is_translation()).count()
    }

    /// Lowers the plan to motion segments, ending with an unbounded rest at
    /// the goal.
    pub fn segments(&self) -> Vec<MotionSegment> {
        let mut segs: Vec<MotionSegment> = self
            .primitives
            .iter()
            .filter(|p| p.duration() > 0.0)
            .map(Primitive::to_segment)
            .collect();
        segs.push(MotionSegment::stationary(self.final_position(), self.arrival_time, INFINITY));
        segs
    }

    pub fn position_at(&self, t: f64) -> Point2 {
        if t >= self.arrival_time {
            return self.final_position();
        }
        let idx = self.primitives.partition_point(|p| p.t_end() <= t);
        match self.primitives.get(idx) {
            Some(p) if p.t_start() <= t => p.to_segment().position_at(t),
            Some(p) => p.start_position(),
            None => self.final_position(),
        }
    }
}
