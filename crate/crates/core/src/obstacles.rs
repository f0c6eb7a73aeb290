//! Dynamic obstacles seen by a single-robot search: the lowered trajectories
//! of higher-priority robots plus temporary start blockers.
//!
//! Segments are bucketed on a coarse spatial grid so that the search only
//! looks at motions that can come near the region it is querying.

use crate::geometry::{MotionSegment, Point2, INFINITY};
use crate::model::Trajectory;

const BUCKET_CELLS: f64 = 4.0;

#[derive(Debug, Clone)]
pub struct DynamicObstacle {
    pub radius: f64,
    pub segments: Vec<MotionSegment>,
}

impl DynamicObstacle {
    pub fn from_trajectory(traj: &Trajectory, radius: f64) -> Self {
        Self {
            radius,
            segments: traj.segments(),
        }
    }

    /// A disk resting at `at` during `[0, until]`.
    pub fn blocker(at: Point2, radius: f64, until: f64) -> Self {
        Self {
            radius,
            segments: vec![MotionSegment::stationary(at, 0.0, until)],
        }
    }
}

/// A segment together with the radius of the disk that follows it.
#[derive(Debug, Clone, Copy)]
pub struct ObstacleSegment {
    pub segment: MotionSegment,
    pub radius: f64,
    pub owner: usize,
}

impl ObstacleSegment {
    /// Rest that never ends, i.e. a robot parked at its goal.
    pub fn is_parked(&self) -> bool {
        self.segment.t_end == INFINITY
    }
}

#[derive(Debug, Clone)]
pub struct ObstacleSet {
    segments: Vec<ObstacleSegment>,
    active: Vec<bool>,
    owners: usize,
    buckets: Vec<Vec<u32>>,
    cols: usize,
    rows: usize,
}

impl ObstacleSet {
    /// An empty set covering a `width x height` map.
    pub fn new(width: usize, height: usize) -> Self {
        let cols = ((width as f64 / BUCKET_CELLS).ceil() as usize).max(1);
        let rows = ((height as f64 / BUCKET_CELLS).ceil() as usize).max(1);
        Self {
            segments: Vec::new(),
            active: Vec::new(),
            owners: 0,
            buckets: vec![Vec::new(); cols * rows],
            cols,
            rows,
        }
    }

    pub fn from_obstacles(width: usize, height: usize, obstacles: impl IntoIterator<Item = DynamicObstacle>) -> Self {
        let mut set = Self::new(width, height);
        for o in obstacles {
            set.add(o);
        }
        set
    }

    /// Adds an obstacle and returns its handle.
    pub fn add(&mut self, obstacle: DynamicObstacle) -> usize {
        let owner = self.owners;
        self.owners += 1;
        self.active.push(true);
        for segment in obstacle.segments {
            let id = self.segments.len() as u32;
            let (lo, hi) = segment_bbox(&segment);
            let (c0, r0, c1, r1) = self.bucket_range(lo, hi, obstacle.radius);
            for r in r0..=r1 {
                for c in c0..=c1 {
                    self.buckets[r * self.cols + c].push(id);
                }
            }
            self.segments.push(ObstacleSegment {
                segment,
                radius: obstacle.radius,
                owner,
            });
        }
        owner
    }

    pub fn set_active(&mut self, owner: usize, active: bool) {
        self.active[owner] = active;
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    fn bucket_range(&self, lo: Point2, hi: Point2, pad: f64) -> (usize, usize, usize, usize) {
        let clamp_c = |x: f64| ((x / BUCKET_CELLS).floor().max(0.0) as usize).min(self.cols - 1);
        let clamp_r = |y: f64| ((y / BUCKET_CELLS).floor().max(0.0) as usize).min(self.rows - 1);
        (clamp_c(lo.x - pad), clamp_r(lo.y - pad), clamp_c(hi.x + pad), clamp_r(hi.y + pad))
    }

    /// Active segments that may come within `reach` (plus their own radius)
    /// of the segment `[from, to]` at some time in `[t_lo, t_hi]`.
    /// Returned in insertion order.
    pub fn query(&self, from: Point2, to: Point2, reach: f64, t_lo: f64, t_hi: f64) -> Vec<ObstacleSegment> {
        let lo = Point2::new(from.x.min(to.x), from.y.min(to.y));
        let hi = Point2::new(from.x.max(to.x), from.y.max(to.y));
        let (c0, r0, c1, r1) = self.bucket_range(lo, hi, reach);
        let mut ids: Vec<u32> = Vec::new();
        for r in r0..=r1 {
            for c in c0..=c1 {
                ids.extend_from_slice(&self.buckets[r * self.cols + c]);
            }
        }
        ids.sort_unstable();
        ids.dedup();
        ids.into_iter()
            .map(|id| self.segments[id as usize])
            .filter(|s| self.active[s.owner] && s.segment.t_end >= t_lo && s.segment.t_start <= t_hi)
            .filter(|s| {
                let (slo, shi) = segment_bbox(&s.segment);
                let pad = reach + s.radius;
                slo.x - pad <= hi.x && shi.x + pad >= lo.x && slo.y - pad <= hi.y && shi.y + pad >= lo.y
            })
            .collect()
    }
}

fn segment_bbox(seg: &MotionSegment) -> (Point2, Point2) {
    let a = seg.origin;
    let b = if seg.is_stationary() {
        a
    } else {
        seg.position_at(seg.t_end)
    };
    (Point2::new(a.x.min(b.x), a.y.min(b.y)), Point2::new(a.x.max(b.x), a.y.max(b.y)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn query_filters_by_space_time_and_activity() {
        let mut set = ObstacleSet::new(32, 32);
        let near = set.add(DynamicObstacle {
            radius: 0.5,
            segments: vec![MotionSegment::between(Point2::new(1.5, 1.5), Point2::new(5.5, 1.5), 0.0, 4.0)],
        });
        set.add(DynamicObstacle::blocker(Point2::new(30.5, 30.5), 0.5, 3.0));

        let p = Point2::new(3.5, 2.5);
        assert_eq!(set.query(p, p, 0.5, 0.0, INFINITY).len(), 1);
        assert_eq!(set.query(p, p, 0.5, 5.0, INFINITY).len(), 0);
        let far = Point2::new(30.5, 29.5);
        assert_eq!(set.query(far, far, 0.5, 0.0, 1.0).len(), 1);
        assert_eq!(set.query(far, far, 0.5, 3.5, 9.0).len(), 0);

        set.set_active(near, false);
        assert!(set.query(p, p, 0.5, 0.0, INFINITY).is_empty());
    }
}
