//! Independent certification of solutions.
//!
//! Nothing here calls into the planner's collision code: trajectories are
//! re-lowered to position knots, pairwise separation is minimised over merged
//! knot intervals, and static clearance is measured with segment-to-edge
//! distances. A sampled mode evaluates positions on a fixed time grid.

use serde::{Deserialize, Serialize};

use crate::geometry::{heading_delta, Point2};
use crate::model::{Primitive, Trajectory};
use crate::par::par_map;
use crate::prioritized::{Instance, Solution};

/// Squared-distance slack for analytic checks (cells^2).
pub const ANALYTIC_TOLERANCE: f64 = 1e-7;
/// Distance slack for sampled checks (cells).
pub const SAMPLED_TOLERANCE: f64 = 1e-6;
pub const DEFAULT_DT: f64 = 1e-3;
/// Sampling continues this long past the makespan.
pub const SAMPLE_MARGIN: f64 = 1.0;

const TIME_TOL: f64 = 1e-9;
const HEADING_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum CheckMode {
    Analytic,
    Sampled { dt: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ConflictKind {
    Pair { a: usize, b: usize },
    Static { robot: usize, i: i32, j: i32 },
    OutOfBounds { robot: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Conflict {
    #[serde(flatten)]
    pub kind: ConflictKind,
    /// First time the violation is observed.
    pub time: f64,
    pub min_separation: f64,
    pub required: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ConflictReport {
    pub conflicts: Vec<Conflict>,
}

impl ConflictReport {
    pub fn is_clean(&self) -> bool {
        self.conflicts.is_empty()
    }

    pub fn pair_conflicts(&self) -> usize {
        self.conflicts
            .iter()
            .filter(|c| matches!(c.kind, ConflictKind::Pair { .. }))
            .count()
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("robot {robot}, primitive {primitive}: {reason}")]
pub struct StructuralError {
    pub robot: usize,
    pub primitive: usize,
    pub reason: String,
}

/// Sum and maximum of the arrival times.
pub fn compute_metrics(trajectories: &[Trajectory]) -> (f64, f64) {
    let arrivals = trajectories.iter().map(|t| t.arrival_time);
    (arrivals.clone().sum(), arrivals.fold(0.0, f64::max))
}

/// Structural, static and pairwise checks of `solution` against `instance`.
pub fn validate_solution(
    solution: &Solution,
    instance: &Instance,
    mode: CheckMode,
) -> Result<ConflictReport, StructuralError> {
    validate_trajectories(&solution.trajectories, instance, mode)
}

pub fn validate_trajectories(
    trajectories: &[Trajectory],
    instance: &Instance,
    mode: CheckMode,
) -> Result<ConflictReport, StructuralError> {
    if trajectories.len() != instance.robots.len() {
        return Err(StructuralError {
            robot: trajectories.len().min(instance.robots.len()),
            primitive: 0,
            reason: format!(
                "{} trajectories for {} robots",
                trajectories.len(),
                instance.robots.len()
            ),
        });
    }
    for (r, t) in trajectories.iter().enumerate() {
        check_structure(r, t, instance)?;
    }
    let mut conflicts = Vec::new();
    for (r, t) in trajectories.iter().enumerate() {
        conflicts.extend(static_conflicts(r, t, instance));
    }
    let radii: Vec<f64> = instance.robots.iter().map(|r| r.radius).collect();
    conflicts.extend(dynamic_conflicts(trajectories, &radii, mode));
    Ok(ConflictReport { conflicts })
}

fn structural(robot: usize, primitive: usize, reason: impl Into<String>) -> StructuralError {
    StructuralError {
        robot,
        primitive,
        reason: reason.into(),
    }
}

fn near(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * (1.0 + a.abs().max(b.abs()))
}

fn same_point(a: Point2, b: Point2) -> bool {
    near(a.x, b.x, TIME_TOL) && near(a.y, b.y, TIME_TOL)
}

fn at_cell_center(p: Point2) -> bool {
    let off = |v: f64| (v - 0.5 - (v - 0.5).round()).abs() <= 1e-9;
    off(p.x) && off(p.y)
}

fn check_structure(r: usize, traj: &Trajectory, instance: &Instance) -> Result<(), StructuralError> {
    let spec = &instance.robots[r];
    if !same_point(traj.start.position(), spec.start.position())
        || heading_delta(traj.start.theta, spec.start.theta) > HEADING_TOL
    {
        return Err(structural(r, 0, "trajectory does not begin at the start configuration"));
    }
    let mut t = 0.0;
    let mut pos = spec.start.position();
    let mut heading = spec.start.theta;
    for (k, p) in traj.primitives.iter().enumerate() {
        if !near(p.t_start(), t, TIME_TOL) {
            return Err(structural(r, k, format!("starts at {} but previous ends at {}", p.t_start(), t)));
        }
        if !(p.t_end() >= p.t_start()) {
            return Err(structural(r, k, "negative duration"));
        }
        if !same_point(p.start_position(), pos) {
            return Err(structural(r, k, "position jump"));
        }
        match *p {
            Primitive::Wait { at, heading: h, .. } => {
                if !at_cell_center(at) {
                    return Err(structural(r, k, "wait away from a cell center"));
                }
                if heading_delta(h, heading) > HEADING_TOL {
                    return Err(structural(r, k, "heading jump"));
                }
            }
            Primitive::Rotate {
                at,
                from_heading,
                to_heading,
                ..
            } => {
                if !at_cell_center(at) {
                    return Err(structural(r, k, "rotation away from a cell center"));
                }
                if heading_delta(from_heading, heading) > HEADING_TOL {
                    return Err(structural(r, k, "heading jump"));
                }
                let expected = heading_delta(from_heading, to_heading) / spec.omega_rotate;
                if !near(p.duration(), expected, TIME_TOL) {
                    return Err(structural(r, k, format!("rotation lasts {} instead of {}", p.duration(), expected)));
                }
                heading = to_heading;
            }
            Primitive::Translate {
                from, to, heading: h, ..
            } => {
                if heading_delta(h, heading) > HEADING_TOL {
                    return Err(structural(r, k, "translation without facing its direction"));
                }
                let dir = (to.y - from.y).atan2(to.x - from.x).to_degrees();
                if heading_delta(dir, h) > HEADING_TOL {
                    return Err(structural(r, k, "translation heading does not match its direction"));
                }
                let len = ((to.x - from.x).powi(2) + (to.y - from.y).powi(2)).sqrt();
                let expected = len / spec.v_translate;
                if !near(p.duration(), expected, TIME_TOL) {
                    return Err(structural(r, k, format!("translation lasts {} instead of {}", p.duration(), expected)));
                }
            }
        }
        t = p.t_end();
        pos = p.end_position();
    }
    let last = traj.primitives.len();
    if !same_point(pos, spec.goal.position()) {
        return Err(structural(r, last, "trajectory does not end at the goal"));
    }
    if heading_delta(heading, spec.goal.theta) > HEADING_TOL {
        return Err(structural(r, last, "final heading differs from the goal heading"));
    }
    if !near(traj.arrival_time, t, TIME_TOL) {
        return Err(structural(r, last, "arrival time does not match the last primitive"));
    }
    Ok(())
}

// ---- static clearance -------------------------------------------------------

fn orient(a: Point2, b: Point2, c: Point2) -> f64 {
    (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x)
}

fn point_to_segment(p: Point2, a: Point2, b: Point2) -> f64 {
    let (ux, uy) = (b.x - a.x, b.y - a.y);
    let (wx, wy) = (p.x - a.x, p.y - a.y);
    let len2 = ux * ux + uy * uy;
    let s = if len2 > 0.0 { ((wx * ux + wy * uy) / len2).clamp(0.0, 1.0) } else { 0.0 };
    ((wx - s * ux).powi(2) + (wy - s * uy).powi(2)).sqrt()
}

fn segments_cross(p1: Point2, q1: Point2, p2: Point2, q2: Point2) -> bool {
    let d1 = orient(p2, q2, p1);
    let d2 = orient(p2, q2, q1);
    let d3 = orient(p1, q1, p2);
    let d4 = orient(p1, q1, q2);
    ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0)) && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
}

fn segment_segment_distance(p1: Point2, q1: Point2, p2: Point2, q2: Point2) -> f64 {
    if segments_cross(p1, q1, p2, q2) {
        return 0.0;
    }
    point_to_segment(p1, p2, q2)
        .min(point_to_segment(q1, p2, q2))
        .min(point_to_segment(p2, p1, q1))
        .min(point_to_segment(q2, p1, q1))
}

fn inside_square(p: Point2, x0: f64, y0: f64) -> bool {
    p.x >= x0 && p.x <= x0 + 1.0 && p.y >= y0 && p.y <= y0 + 1.0
}

/// Distance from segment `[a, b]` to the unit square with lower corner `(x0, y0)`.
fn segment_square_distance(a: Point2, b: Point2, x0: f64, y0: f64) -> f64 {
    if inside_square(a, x0, y0) || inside_square(b, x0, y0) {
        return 0.0;
    }
    let c = [
        Point2::new(x0, y0),
        Point2::new(x0 + 1.0, y0),
        Point2::new(x0 + 1.0, y0 + 1.0),
        Point2::new(x0, y0 + 1.0),
    ];
    (0..4)
        .map(|k| segment_segment_distance(a, b, c[k], c[(k + 1) % 4]))
        .fold(f64::INFINITY, f64::min)
}

/// Open-disk test with the analytic slack, so exact tangencies pass.
fn penetrates(distance: f64, r: f64) -> bool {
    distance < r && r * r - distance * distance > ANALYTIC_TOLERANCE
}

fn static_conflicts(robot: usize, traj: &Trajectory, instance: &Instance) -> Vec<Conflict> {
    let r = instance.robots[robot].radius;
    let map = &instance.map;
    let (w, h) = (map.width() as f64, map.height() as f64);
    let mut pieces: Vec<(Point2, Point2, f64)> = traj
        .primitives
        .iter()
        .filter_map(|p| match *p {
            Primitive::Translate { from, to, t_start, .. } => Some((from, to, t_start)),
            _ => None,
        })
        .collect();
    if pieces.is_empty() {
        let p = traj.start.position();
        pieces.push((p, p, 0.0));
    }

    let mut out = Vec::new();
    for (a, b, t) in pieces {
        let (lo_x, hi_x) = (a.x.min(b.x), a.x.max(b.x));
        let (lo_y, hi_y) = (a.y.min(b.y), a.y.max(b.y));
        let margin = lo_x.min(lo_y).min(w - hi_x).min(h - hi_y);
        if penetrates(margin, r) {
            out.push(Conflict {
                kind: ConflictKind::OutOfBounds { robot },
                time: t,
                min_separation: margin,
                required: r,
            });
        }
        let i0 = ((lo_x - r).floor() as i64).max(0);
        let i1 = ((hi_x + r).floor() as i64).min(map.width() as i64 - 1);
        let j0 = ((lo_y - r).floor() as i64).max(0);
        let j1 = ((hi_y + r).floor() as i64).min(map.height() as i64 - 1);
        for j in j0..=j1 {
            for i in i0..=i1 {
                let cell = crate::grid::CellCoord::new(i as i32, j as i32);
                if !map.is_blocked(cell) {
                    continue;
                }
                let d = segment_square_distance(a, b, i as f64, j as f64);
                if penetrates(d, r) {
                    out.push(Conflict {
                        kind: ConflictKind::Static {
                            robot,
                            i: i as i32,
                            j: j as i32,
                        },
                        time: t,
                        min_separation: d,
                        required: r,
                    });
                }
            }
        }
    }
    out
}

// ---- pairwise separation ------------------------------------------------------

/// Position knots `(t, x, y)`; linear between knots, constant after the last.
#[derive(Debug, Clone)]
struct Track {
    knots: Vec<(f64, f64, f64)>,
}

impl Track {
    fn from_trajectory(traj: &Trajectory) -> Self {
        let s = traj.start.position();
        let mut knots = vec![(0.0, s.x, s.y)];
        for p in &traj.primitives {
            let (a, b) = (p.start_position(), p.end_position());
            let last = *knots.last().unwrap();
            if p.t_start() != last.0 || a.x != last.1 || a.y != last.2 {
                knots.push((p.t_start(), a.x, a.y));
            }
            knots.push((p.t_end(), b.x, b.y));
        }
        Self { knots }
    }

    fn end_time(&self) -> f64 {
        self.knots.last().unwrap().0
    }

    fn at(&self, t: f64) -> (f64, f64) {
        let k = self.knots.partition_point(|kn| kn.0 <= t);
        if k == 0 {
            let f = self.knots[0];
            return (f.1, f.2);
        }
        if k == self.knots.len() {
            let l = self.knots[k - 1];
            return (l.1, l.2);
        }
        let (t0, x0, y0) = self.knots[k - 1];
        let (t1, x1, y1) = self.knots[k];
        if t1 <= t0 {
            return (x1, y1);
        }
        let u = (t - t0) / (t1 - t0);
        (x0 + (x1 - x0) * u, y0 + (y1 - y0) * u)
    }

    fn bbox(&self, pad: f64) -> (f64, f64, f64, f64) {
        self.knots.iter().fold(
            (f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY),
            |(a, b, c, d), &(_, x, y)| (a.min(x - pad), b.min(y - pad), c.max(x + pad), d.max(y + pad)),
        )
    }
}

fn boxes_overlap(a: (f64, f64, f64, f64), b: (f64, f64, f64, f64)) -> bool {
    a.0 <= b.2 && b.0 <= a.2 && a.1 <= b.3 && b.1 <= a.3
}

/// Earliest violation between two tracks, minimising the squared relative
/// distance in closed form on each interval where both move linearly.
fn analytic_pair(ta: &Track, tb: &Track, reach: f64) -> Option<(f64, f64)> {
    let mut times: Vec<f64> = ta.knots.iter().chain(tb.knots.iter()).map(|k| k.0).collect();
    times.sort_by(f64::total_cmp);
    times.dedup();
    let reach2 = reach * reach;
    let rel = |t: f64| {
        let (ax, ay) = ta.at(t);
        let (bx, by) = tb.at(t);
        (ax - bx, ay - by)
    };
    let mut worst: Option<(f64, f64)> = None;
    let mut check = |t0: f64, t1: f64| {
        let (dx0, dy0) = rel(t0);
        let (dx1, dy1) = if t1 > t0 { rel(t1) } else { (dx0, dy0) };
        let (ex, ey) = (dx1 - dx0, dy1 - dy0);
        let ee = ex * ex + ey * ey;
        let u = if ee > 0.0 { (-(dx0 * ex + dy0 * ey) / ee).clamp(0.0, 1.0) } else { 0.0 };
        let m2 = (dx0 + ex * u).powi(2) + (dy0 + ey * u).powi(2);
        if reach2 - m2 > ANALYTIC_TOLERANCE {
            // First instant inside: smaller root of |d0 + e u|^2 = reach^2.
            let c = dx0 * dx0 + dy0 * dy0 - reach2;
            let first_u = if c < 0.0 || ee == 0.0 {
                0.0
            } else {
                let b = dx0 * ex + dy0 * ey;
                ((-b - (b * b - ee * c).max(0.0).sqrt()) / ee).clamp(0.0, 1.0)
            };
            let time = t0 + (t1 - t0) * first_u;
            if worst.is_none() {
                worst = Some((time, m2.sqrt()));
            } else if let Some(w) = worst.as_mut() {
                w.1 = w.1.min(m2.sqrt());
            }
        }
    };
    for w in times.windows(2) {
        check(w[0], w[1]);
    }
    let last = *times.last().unwrap();
    check(last, last);
    worst
}

/// Forward-only position lookup for monotonically increasing times.
struct Cursor<'a> {
    track: &'a Track,
    next: usize,
}

impl<'a> Cursor<'a> {
    fn new(track: &'a Track) -> Self {
        Self { track, next: 0 }
    }

    fn at(&mut self, t: f64) -> (f64, f64) {
        let k = &self.track.knots;
        while self.next < k.len() && k[self.next].0 <= t {
            self.next += 1;
        }
        if self.next == 0 {
            return (k[0].1, k[0].2);
        }
        if self.next == k.len() {
            let l = k[k.len() - 1];
            return (l.1, l.2);
        }
        let (t0, x0, y0) = k[self.next - 1];
        let (t1, x1, y1) = k[self.next];
        let u = (t - t0) / (t1 - t0);
        (x0 + (x1 - x0) * u, y0 + (y1 - y0) * u)
    }
}

/// Samples `t = 0, dt, 2 dt, ...` until both tracks have been at rest for
/// [`SAMPLE_MARGIN`]; positions cannot change after that.
fn sampled_pair(ta: &Track, tb: &Track, reach: f64, dt: f64) -> Option<(f64, f64)> {
    let horizon = ta.end_time().max(tb.end_time()) + SAMPLE_MARGIN;
    let steps = (horizon / dt).ceil() as u64;
    let (mut ca, mut cb) = (Cursor::new(ta), Cursor::new(tb));
    let mut first: Option<(f64, f64)> = None;
    for k in 0..=steps {
        let t = k as f64 * dt;
        let (ax, ay) = ca.at(t);
        let (bx, by) = cb.at(t);
        let d = ((ax - bx).powi(2) + (ay - by).powi(2)).sqrt();
        if reach - d > SAMPLED_TOLERANCE {
            match first.as_mut() {
                None => first = Some((t, d)),
                Some(f) => f.1 = f.1.min(d),
            }
        }
    }
    first
}

/// Pairwise separation checks only; timings are taken as given, so this also
/// serves realized (delayed) executions.
pub fn dynamic_conflicts(trajectories: &[Trajectory], radii: &[f64], mode: CheckMode) -> Vec<Conflict> {
    let tracks: Vec<Track> = trajectories.iter().map(Track::from_trajectory).collect();
    let boxes: Vec<_> = tracks.iter().zip(radii).map(|(t, &r)| t.bbox(r)).collect();
    let mut pairs = Vec::new();
    for a in 0..tracks.len() {
        for b in a + 1..tracks.len() {
            if boxes_overlap(boxes[a], boxes[b]) {
                pairs.push((a, b));
            }
        }
    }
    par_map(&pairs, |&(a, b)| {
        let reach = radii[a] + radii[b];
        let hit = match mode {
            CheckMode::Analytic => analytic_pair(&tracks[a], &tracks[b], reach),
            CheckMode::Sampled { dt } => sampled_pair(&tracks[a], &tracks[b], reach, dt),
        };
        hit.map(|(time, sep)| Conflict {
            kind: ConflictKind::Pair { a, b },
            time,
            min_separation: sep,
            required: reach,
        })
    })
    .into_iter()
    .flatten()
    .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::GridMap;
    use crate::model::{Configuration, RobotSpec};
    use std::time::Duration;

    fn spec(s: (f64, f64, f64), g: (f64, f64, f64), r: f64) -> RobotSpec {
        RobotSpec {
            radius: r,
            v_translate: 1.0,
            omega_rotate: 180.0,
            start: Configuration::new(s.0, s.1, s.2),
            goal: Configuration::new(g.0, g.1, g.2),
        }
    }

    fn straight(from: (f64, f64), to: (f64, f64), heading: f64, t0: f64) -> Trajectory {
        let (a, b) = (Point2::new(from.0, from.1), Point2::new(to.0, to.1));
        let mut prims = Vec::new();
        if t0 > 0.0 {
            prims.push(Primitive::Wait {
                at: a,
                heading,
                t_start: 0.0,
                t_end: t0,
            });
        }
        prims.push(Primitive::Translate {
            from: a,
            to: b,
            heading,
            t_start: t0,
            t_end: t0 + a.distance(b),
        });
        Trajectory::new(Configuration::new(from.0, from.1, heading), prims)
    }

    fn solution(trajs: Vec<Trajectory>) -> Solution {
        let n = trajs.len();
        Solution::from_trajectories(trajs, 1, (0..n).collect(), Duration::ZERO)
    }

    #[test]
    fn far_apart_robots_are_clean() {
        let inst = Instance::new(
            GridMap::empty(12, 12),
            vec![
                spec((1.5, 1.5, 0.0), (1.5, 1.5, 0.0), 1.0),
                spec((6.5, 1.5, 0.0), (6.5, 1.5, 0.0), 1.0),
            ],
        );
        let sol = solution(vec![
            Trajectory::new(inst.robots[0].start, vec![]),
            Trajectory::new(inst.robots[1].start, vec![]),
        ]);
        for mode in [CheckMode::Analytic, CheckMode::Sampled { dt: DEFAULT_DT }] {
            assert!(validate_solution(&sol, &inst, mode).unwrap().is_clean());
        }
    }

    #[test]
    fn crossing_robots_conflict_once() {
        let inst = Instance::new(
            GridMap::empty(12, 12),
            vec![
                spec((0.5, 5.5, 0.0), (10.5, 5.5, 0.0), 0.5),
                spec((5.5, 0.5, 90.0), (5.5, 10.5, 90.0), 0.5),
            ],
        );
        let sol = solution(vec![
            straight((0.5, 5.5), (10.5, 5.5), 0.0, 0.0),
            straight((5.5, 0.5), (5.5, 10.5), 90.0, 0.0),
        ]);
        for mode in [CheckMode::Analytic, CheckMode::Sampled { dt: DEFAULT_DT }] {
            let rep = validate_solution(&sol, &inst, mode).unwrap();
            assert_eq!(rep.conflicts.len(), 1, "{mode:?}");
            let c = rep.conflicts[0];
            assert_eq!(c.kind, ConflictKind::Pair { a: 0, b: 1 });
            assert!(c.min_separation < 1e-2);
            // Centers are sqrt(2) * |5 - t| apart; contact at t = 5 - 1/sqrt(2).
            assert!((c.time - (5.0 - 0.5f64.sqrt())).abs() < 2e-3);
        }
    }

    #[test]
    fn static_and_bounds_violations() {
        let map = GridMap::from_rows(&["......", "..@...", "......"], 1.0).unwrap();
        let inst = Instance::new(map, vec![spec((0.5, 1.5, 0.0), (5.5, 1.5, 0.0), 0.5)]);
        let sol = solution(vec![straight((0.5, 1.5), (5.5, 1.5), 0.0, 0.0)]);
        let rep = validate_solution(&sol, &inst, CheckMode::Analytic).unwrap();
        assert_eq!(rep.conflicts.len(), 1);
        assert!(matches!(rep.conflicts[0].kind, ConflictKind::Static { i: 2, j: 1, .. }));

        let inst = Instance::new(GridMap::empty(6, 3), vec![spec((0.5, 1.5, 0.0), (5.5, 1.5, 0.0), 0.6)]);
        let rep = validate_solution(&sol, &inst, CheckMode::Analytic).unwrap();
        assert!(rep.conflicts.iter().any(|c| matches!(c.kind, ConflictKind::OutOfBounds { .. })));
    }

    #[test]
    fn rounding_at_tangency_is_not_penetration() {
        assert!(!penetrates(0.2999999999999999, 0.3));
        assert!(!penetrates(0.3, 0.3));
        assert!(penetrates(0.2999, 0.3));
    }

    #[test]
    fn structural_errors_come_first() {
        let inst = Instance::new(GridMap::empty(12, 12), vec![spec((0.5, 5.5, 0.0), (10.5, 5.5, 0.0), 0.5)]);
        let mut t = straight((0.5, 5.5), (10.5, 5.5), 0.0, 1.0);
        // Open a gap between the wait and the translation.
        if let Primitive::Wait { t_end, .. } = &mut t.primitives[0] {
            *t_end = 0.5;
        }
        let err = validate_solution(&solution(vec![t]), &inst, CheckMode::Analytic).unwrap_err();
        assert_eq!(err.primitive, 1);

        let too_fast = Trajectory::new(
            Configuration::new(0.5, 5.5, 0.0),
            vec![Primitive::Translate {
                from: Point2::new(0.5, 5.5),
                to: Point2::new(10.5, 5.5),
                heading: 0.0,
                t_start: 0.0,
                t_end: 5.0,
            }],
        );
        assert!(validate_solution(&solution(vec![too_fast]), &inst, CheckMode::Analytic).is_err());
    }

    #[test]
    fn metrics() {
        let mk = |t: f64| straight((0.5, 0.5), (t + 0.5, 0.5), 0.0, 0.0);
        assert_eq!(compute_metrics(&[mk(3.0), mk(5.0), mk(2.0)]), (10.0, 5.0));
        assert_eq!(compute_metrics(&[mk(4.0)]), (4.0, 4.0));
    }
}
