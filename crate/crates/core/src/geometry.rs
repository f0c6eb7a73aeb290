//! Closed-form continuous-time collision primitives for disks moving with
//! piecewise-constant velocity.
//!
//! Disks are open: two disks whose centers are exactly `r_a + r_b` apart are
//! touching, not colliding. Tangency is classified with a fixed absolute
//! tolerance [`EPS_GEOM`] on squared distances.

use std::ops::{Add, Mul, Sub};

use serde::{Deserialize, Serialize};

/// Absolute tolerance (squared cells) used to classify tangential contact.
pub const EPS_GEOM: f64 = 1e-9;

/// Sentinel for an unbounded end time.
pub const INFINITY: f64 = f64::INFINITY;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn dot(self, other: Point2) -> f64 {
        self.x * other.x + self.y * other.y
    }

    pub fn norm_sq(self) -> f64 {
        self.dot(self)
    }

    pub fn norm(self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn distance(self, other: Point2) -> f64 {
        (self - other).norm()
    }
}

impl Add for Point2 {
    type Output = Point2;
    fn add(self, rhs: Point2) -> Point2 {
        Point2::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for Point2 {
    type Output = Point2;
    fn sub(self, rhs: Point2) -> Point2 {
        Point2::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Mul<f64> for Point2 {
    type Output = Point2;
    fn mul(self, k: f64) -> Point2 {
        Point2::new(self.x * k, self.y * k)
    }
}

/// A closed time window `[start, end]`; `end` may be [`INFINITY`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimeInterval {
    pub start: f64,
    pub end: f64,
}

impl TimeInterval {
    pub fn new(start: f64, end: f64) -> Self {
        debug_assert!(start <= end, "interval [{start}, {end}] is reversed");
        Self { start, end }
    }

    pub fn unbounded_from(start: f64) -> Self {
        Self::new(start, INFINITY)
    }

    pub fn is_unbounded(&self) -> bool {
        self.end == INFINITY
    }

    pub fn contains(&self, t: f64) -> bool {
        self.start <= t && t <= self.end
    }

    pub fn shifted(&self, dt: f64) -> Self {
        Self::new(self.start + dt, self.end + dt)
    }
}

/// Uniform motion of a point: position `origin + velocity * (t - t_start)`
/// for `t` in `[t_start, t_end]`. Zero velocity models waits and rotations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MotionSegment {
    pub origin: Point2,
    pub velocity: Point2,
    pub t_start: f64,
    pub t_end: f64,
}

impl MotionSegment {
    pub fn new(origin: Point2, velocity: Point2, t_start: f64, t_end: f64) -> Self {
        debug_assert!(t_start <= t_end);
        Self {
            origin,
            velocity,
            t_start,
            t_end,
        }
    }

    pub fn stationary(at: Point2, t_start: f64, t_end: f64) -> Self {
        Self::new(at, Point2::default(), t_start, t_end)
    }

    /// Motion from `from` at `t_start` to `to` at `t_end` (finite, `t_end > t_start`).
    pub fn between(from: Point2, to: Point2, t_start: f64, t_end: f64) -> Self {
        let duration = t_end - t_start;
        let velocity = if duration > 0.0 {
            (to - from) * (1.0 / duration)
        } else {
            Point2::default()
        };
        Self::new(from, velocity, t_start, t_end)
    }

    pub fn position_at(&self, t: f64) -> Point2 {
        self.origin + self.velocity * (t - self.t_start)
    }

    pub fn window(&self) -> TimeInterval {
        TimeInterval::new(self.t_start, self.t_end)
    }

    pub fn is_stationary(&self) -> bool {
        self.velocity.x == 0.0 && self.velocity.y == 0.0
    }

    pub fn shifted(&self, dt: f64) -> Self {
        Self::new(self.origin, self.velocity, self.t_start + dt, self.t_end + dt)
    }
}

/// The two segments never coexist in time.
#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("segments have no temporal overlap")]
pub struct NoTemporalOverlap;

/// Euclidean distance from `p` to the closed segment `[a, b]`.
pub fn point_segment_distance(p: Point2, a: Point2, b: Point2) -> f64 {
    let ab = b - a;
    let len_sq = ab.norm_sq();
    if len_sq == 0.0 {
        return p.distance(a);
    }
    let s = ((p - a).dot(ab) / len_sq).clamp(0.0, 1.0);
    p.distance(a + ab * s)
}

/// Minimum of `|d + w s|^2` over `s` in `[0, len]` (`len` may be infinite).
fn min_dist_sq_on_ray(d: Point2, w: Point2, len: f64) -> f64 {
    let ww = w.norm_sq();
    if ww == 0.0 {
        return d.norm_sq();
    }
    let s = (-d.dot(w) / ww).clamp(0.0, len);
    (d + w * s).norm_sq()
}

/// Time window inside `[seg.t_start, seg.t_end]` during which the moving point
/// lies strictly inside the circle, or `None` if it never enters it.
pub fn circle_entry_exit_times(
    seg: &MotionSegment,
    center: Point2,
    radius: f64,
) -> Option<TimeInterval> {
    debug_assert!(radius > 0.0);
    let r_sq = radius * radius;
    let d = seg.origin - center;
    let w = seg.velocity;
    let len = seg.t_end - seg.t_start;

    // Same classification rule as `translating_disks_collide`, so the two
    // agree on whether an interior intersection exists.
    if r_sq - min_dist_sq_on_ray(d, w, len) <= EPS_GEOM {
        return None;
    }

    let ww = w.norm_sq();
    if ww == 0.0 {
        return Some(seg.window());
    }
    // Roots of |d + w s|^2 = r^2, written around the closest approach for
    // stability.
    let s_mid = -d.dot(w) / ww;
    let closest_sq = (d + w * s_mid).norm_sq();
    let half = ((r_sq - closest_sq).max(0.0) / ww).sqrt();
    let enter = (s_mid - half).max(0.0);
    let exit = (s_mid + half).min(len);
    if enter > exit {
        return None;
    }
    Some(TimeInterval::new(seg.t_start + enter, seg.t_start + exit))
}

/// Whether two disks translating along `a` and `b` overlap at some instant of
/// their common time window.
///
/// Returns `Err(NoTemporalOverlap)` when the windows are disjoint; callers
/// treat that as "no conflict" but it is reported separately.
pub fn translating_disks_collide(
    a: &MotionSegment,
    r_a: f64,
    b: &MotionSegment,
    r_b: f64,
) -> Result<bool, NoTemporalOverlap> {
    let t0 = a.t_start.max(b.t_start);
    let t1 = a.t_end.min(b.t_end);
    if t0 > t1 {
        return Err(NoTemporalOverlap);
    }
    let d = a.position_at(t0) - b.position_at(t0);
    let w = a.velocity - b.velocity;
    let reach = r_a + r_b;
    Ok(reach * reach - min_dist_sq_on_ray(d, w, t1 - t0) > EPS_GEOM)
}

/// Smallest absolute difference between two headings, in degrees `[0, 180]`.
pub fn heading_delta(from_deg: f64, to_deg: f64) -> f64 {
    let diff = (to_deg - from_deg).rem_euclid(360.0);
    diff.min(360.0 - diff)
}

/// Normalizes a heading to `[0, 360)`.
pub fn normalize_heading(deg: f64) -> f64 {
    let h = deg.rem_euclid(360.0);
    if h >= 360.0 {
        0.0
    } else {
        h
    }
}

/// Heading of the direction `from -> to`, in degrees `[0, 360)`.
pub fn heading_of(from: Point2, to: Point2) -> f64 {
    let d = to - from;
    normalize_heading(d.y.atan2(d.x).to_degrees())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: f64, y: f64) -> Point2 {
        Point2::new(x, y)
    }

    #[test]
    fn point_segment_distance_basic() {
        assert_eq!(point_segment_distance(p(0.0, 1.0), p(-1.0, 0.0), p(1.0, 0.0)), 1.0);
        assert_eq!(point_segment_distance(p(3.0, 0.0), p(-1.0, 0.0), p(1.0, 0.0)), 2.0);
        assert_eq!(point_segment_distance(p(3.0, 4.0), p(0.0, 0.0), p(0.0, 0.0)), 5.0);
    }

    #[test]
    fn point_segment_distance_matches_dense_sampling() {
        let (q, a, b) = (p(0.7, 0.3), p(0.0, 0.0), p(2.0, 1.0));
        let n = 1_000_000;
        let sampled = (0..=n)
            .map(|k| {
                let s = k as f64 / n as f64;
                q.distance(a + (b - a) * s)
            })
            .fold(f64::INFINITY, f64::min);
        assert!((point_segment_distance(q, a, b) - sampled).abs() < 1e-6);
    }

    #[test]
    fn collinear_pass_through() {
        let seg = MotionSegment::new(p(0.0, 0.0), p(1.0, 0.0), 0.0, INFINITY);
        let w = circle_entry_exit_times(&seg, p(5.0, 0.0), 0.8).unwrap();
        assert!((w.start - 4.2).abs() < 1e-12);
        assert!((w.end - 5.8).abs() < 1e-12);
        assert!(circle_entry_exit_times(&seg, p(0.0, 5.0), 0.8).is_none());
    }

    #[test]
    fn stationary_inside_circle_spans_whole_window() {
        let seg = MotionSegment::stationary(p(1.0, 1.0), 2.0, INFINITY);
        let w = circle_entry_exit_times(&seg, p(1.5, 1.0), 1.0).unwrap();
        assert_eq!(w, TimeInterval::new(2.0, INFINITY));
    }

    #[test]
    fn tangent_pass_is_not_an_entry() {
        let seg = MotionSegment::new(p(0.0, 1.0), p(1.0, 0.0), 0.0, 10.0);
        assert!(circle_entry_exit_times(&seg, p(5.0, 0.0), 1.0).is_none());
    }

    #[test]
    fn disks_static_and_head_on() {
        let a = MotionSegment::stationary(p(0.0, 0.0), 0.0, 10.0);
        let b = MotionSegment::stationary(p(3.0, 0.0), 0.0, 10.0);
        assert_eq!(translating_disks_collide(&a, 1.0, &b, 1.0), Ok(false));

        let a = MotionSegment::new(p(0.0, 0.0), p(1.0, 0.0), 0.0, 10.0);
        let b = MotionSegment::new(p(10.0, 0.0), p(-1.0, 0.0), 0.0, 10.0);
        assert_eq!(translating_disks_collide(&a, 1.0, &b, 1.0), Ok(true));
    }

    #[test]
    fn disjoint_windows_report_no_overlap() {
        let a = MotionSegment::stationary(p(0.0, 0.0), 0.0, 1.0);
        let b = MotionSegment::stationary(p(0.0, 0.0), 2.0, 3.0);
        assert_eq!(translating_disks_collide(&a, 1.0, &b, 1.0), Err(NoTemporalOverlap));
    }

    #[test]
    fn touching_disks_do_not_collide() {
        let a = MotionSegment::stationary(p(0.0, 0.0), 0.0, 1.0);
        let b = MotionSegment::stationary(p(2.0, 0.0), 0.0, 1.0);
        assert_eq!(translating_disks_collide(&a, 1.0, &b, 1.0), Ok(false));
    }

    #[test]
    fn headings() {
        assert_eq!(heading_delta(0.0, 90.0), 90.0);
        assert_eq!(heading_delta(350.0, 10.0), 20.0);
        assert_eq!(heading_delta(10.0, 350.0), 20.0);
        assert_eq!(heading_delta(0.0, 180.0), 180.0);
        assert_eq!(heading_of(p(0.5, 0.5), p(0.5, 1.5)), 90.0);
        assert_eq!(heading_of(p(0.5, 0.5), p(1.5, 0.5)), 0.0);
        assert_eq!(heading_of(p(1.5, 0.5), p(0.5, 0.5)), 180.0);
        assert_eq!(heading_of(p(0.5, 1.5), p(0.5, 0.5)), 270.0);
        assert_eq!(normalize_heading(-0.0), 0.0);
        assert_eq!(normalize_heading(-1e-20), 0.0);
    }
}
