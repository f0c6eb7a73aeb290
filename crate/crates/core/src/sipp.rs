//! Single-robot any-angle safe interval planning.
//!
//! Search nodes are `(cell, safe interval)` pairs. Each node keeps the
//! earliest known arrival time inside its interval and the heading the robot
//! had on arrival. Rotations and waits keep the robot at a cell center, so the
//! safe interval alone certifies them; translations are checked against every
//! nearby obstacle motion in closed form, delaying the departure by `delta`
//! until the move is clear.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::time::Instant;

use crate::config::PlannerConfig;
use crate::geometry::{
    circle_entry_exit_times, heading_of, translating_disks_collide, MotionSegment, TimeInterval, INFINITY,
};
use crate::grid::{move_feasible_static, CellCoord, GridMap};
use crate::model::{Primitive, RobotSpec, Trajectory};
use crate::obstacles::ObstacleSet;

/// Collision windows closer than this are merged.
const MERGE_EPS: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SafeInterval {
    pub cell: CellCoord,
    pub window: TimeInterval,
    pub index: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum PlanError {
    #[error("start is not a valid cell-center configuration for this robot")]
    InvalidStart,
    #[error("goal is not a valid cell-center configuration for this robot")]
    InvalidGoal,
    #[error("start cell is not safe at t = 0")]
    StartUnsafe,
    #[error("search space exhausted")]
    Exhausted,
    #[error("time budget exceeded")]
    Timeout,
}

/// Maximal windows during which a disk of radius `r_cur` resting at the
/// center of `cell` collides with none of `obstacles`.
pub fn compute_safe_intervals(cell: CellCoord, r_cur: f64, obstacles: &ObstacleSet) -> Vec<SafeInterval> {
    safe_windows(cell, r_cur, obstacles)
        .into_iter()
        .enumerate()
        .map(|(index, window)| SafeInterval { cell, window, index })
        .collect()
}

fn safe_windows(cell: CellCoord, r_cur: f64, obstacles: &ObstacleSet) -> Vec<TimeInterval> {
    let center = cell.center();
    let mut hits: Vec<TimeInterval> = obstacles
        .query(center, center, r_cur, 0.0, INFINITY)
        .iter()
        .filter_map(|o| circle_entry_exit_times(&o.segment, center, r_cur + o.radius))
        .collect();
    hits.sort_by(|a, b| a.start.total_cmp(&b.start).then(a.end.total_cmp(&b.end)));

    let mut safe = Vec::with_capacity(hits.len() + 1);
    let mut free_from = 0.0f64;
    let mut iter = hits.into_iter().peekable();
    while let Some(first) = iter.next() {
        let mut busy = first;
        while let Some(next) = iter.peek() {
            if next.start <= busy.end + MERGE_EPS {
                busy.end = busy.end.max(next.end);
                iter.next();
            } else {
                break;
            }
        }
        if busy.start > free_from {
            safe.push(TimeInterval::new(free_from, busy.start));
        }
        free_from = free_from.max(busy.end);
        if free_from == INFINITY {
            return safe;
        }
    }
    safe.push(TimeInterval::unbounded_from(free_from));
    safe
}

/// Where a robot currently is in the search: resting at `cell` within
/// `window`, having arrived at `g` facing `heading`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NodeState {
    pub cell: CellCoord,
    pub window: TimeInterval,
    pub g: f64,
    pub heading: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Arrival {
    pub depart: f64,
    pub arrive: f64,
    pub heading: f64,
}

/// Earliest departure `g + rotation + wait_floor + k * delta` whose straight
/// translation to `to_cell` is clear of every obstacle and lands inside
/// `to_window`, or `None` when the departure would leave the source window,
/// the arrival would overshoot the target window, or a parked robot blocks
/// the move for good.
pub fn earliest_arrival(
    from: &NodeState,
    to_cell: CellCoord,
    to_window: TimeInterval,
    robot: &RobotSpec,
    obstacles: &ObstacleSet,
    delta: f64,
    wait_floor: f64,
) -> Option<Arrival> {
    let (a, b) = (from.cell.center(), to_cell.center());
    let heading = heading_of(a, b);
    let ready = from.g + robot.rotation_time(from.heading, heading) + wait_floor;
    let duration = robot.travel_time(a, b);
    let nearby = obstacles.query(a, b, robot.radius, from.g, INFINITY);

    // Departures before this one arrive before the target window opens.
    let mut k = if to_window.start - duration > ready {
        ((to_window.start - duration - ready) / delta).ceil()
    } else {
        0.0
    };
    loop {
        let depart = ready + k * delta;
        if depart > from.window.end {
            return None;
        }
        let arrive = depart + duration;
        if arrive > to_window.end {
            return None;
        }
        if arrive >= to_window.start {
            let motion = MotionSegment::between(a, b, depart, arrive);
            let mut clear = true;
            for o in &nearby {
                if let Ok(true) = translating_disks_collide(&motion, robot.radius, &o.segment, o.radius) {
                    if o.is_parked() {
                        // Later departures meet the parked disk as well.
                        return None;
                    }
                    clear = false;
                    break;
                }
            }
            if clear {
                return Some(Arrival { depart, arrive, heading });
            }
        }
        k += 1.0;
    }
}

/// Grid offsets of the `2^(order+1)`-connected neighborhood, in a fixed order.
pub fn neighborhood(order: u32) -> Vec<(i32, i32)> {
    let mut quadrant = vec![(1, 0), (0, 1)];
    for _ in 1..order {
        let mut refined = Vec::with_capacity(quadrant.len() * 2);
        for w in quadrant.windows(2) {
            refined.push(w[0]);
            refined.push((w[0].0 + w[1].0, w[0].1 + w[1].1));
        }
        refined.push(*quadrant.last().unwrap());
        quadrant = refined;
    }
    let first = &quadrant[..quadrant.len() - 1];
    let mut dirs = Vec::with_capacity(first.len() * 4);
    for &(x, y) in first {
        dirs.push((x, y));
    }
    for &(x, y) in first {
        dirs.push((-y, x));
    }
    for &(x, y) in first {
        dirs.push((-x, -y));
    }
    for &(x, y) in first {
        dirs.push((y, -x));
    }
    dirs
}

#[derive(Debug, Clone, Copy)]
pub struct SearchNode {
    pub state: NodeState,
    pub interval_index: usize,
    pub h: f64,
    pub parent: Option<usize>,
    /// Departure from the parent along the incoming edge.
    pub depart: f64,
    closed: bool,
}

#[derive(Debug, Clone, Copy)]
struct OpenEntry {
    f: f64,
    g: f64,
    cell: CellCoord,
    interval: usize,
    node: usize,
    terminal: bool,
}

impl PartialEq for OpenEntry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for OpenEntry {}

impl Ord for OpenEntry {
    // BinaryHeap pops the greatest element: smaller f wins, then larger g,
    // then smaller (row, column, interval).
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .f
            .total_cmp(&self.f)
            .then(self.g.total_cmp(&other.g))
            .then(other.cell.j.cmp(&self.cell.j))
            .then(other.cell.i.cmp(&self.cell.i))
            .then(other.interval.cmp(&self.interval))
            .then(self.terminal.cmp(&other.terminal))
    }
}
impl PartialOrd for OpenEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

const UNSEEN: u32 = u32::MAX;
/// Arrival times closer than this count as equal when choosing a parent.
const TIE_EPS: f64 = 1e-9;

struct Search<'a> {
    map: &'a GridMap,
    robot: &'a RobotSpec,
    obstacles: &'a ObstacleSet,
    cfg: &'a PlannerConfig,
    goal_cell: CellCoord,
    dirs: Vec<(i32, i32)>,
    fits: Vec<u8>,
    intervals: Vec<Option<Vec<TimeInterval>>>,
    node_ids: Vec<Vec<u32>>,
    nodes: Vec<SearchNode>,
    open: BinaryHeap<OpenEntry>,
}

impl<'a> Search<'a> {
    fn cell_index(&self, c: CellCoord) -> usize {
        c.j as usize * self.map.width() + c.i as usize
    }

    fn fits(&mut self, c: CellCoord) -> bool {
        if !self.map.in_bounds(c) {
            return false;
        }
        let idx = self.cell_index(c);
        if self.fits[idx] == 0 {
            self.fits[idx] = if self.map.disk_fits(c.center(), self.robot.radius) { 1 } else { 2 };
        }
        self.fits[idx] == 1
    }

    fn ensure_intervals(&mut self, c: CellCoord) -> usize {
        let idx = self.cell_index(c);
        if self.intervals[idx].is_none() {
            let windows = safe_windows(c, self.robot.radius, self.obstacles);
            self.node_ids[idx] = vec![UNSEEN; windows.len()];
            self.intervals[idx] = Some(windows);
        }
        idx
    }

    fn heuristic(&self, c: CellCoord) -> f64 {
        self.robot.travel_time(c.center(), self.goal_cell.center())
    }

    fn push(&mut self, node: usize, terminal_cost: Option<f64>) {
        let n = &self.nodes[node];
        let f = match terminal_cost {
            Some(total) => total,
            None => n.state.g + n.h,
        };
        self.open.push(OpenEntry {
            f,
            g: n.state.g,
            cell: n.state.cell,
            interval: n.interval_index,
            node,
            terminal: terminal_cost.is_some(),
        });
    }

    fn arrival_from(&self, from: usize, to: CellCoord, window: TimeInterval) -> Option<Arrival> {
        earliest_arrival(
            &self.nodes[from].state,
            to,
            window,
            self.robot,
            self.obstacles,
            self.cfg.delta,
            self.cfg.wait_floor,
        )
    }

    fn expand(&mut self, n: usize) {
        let here = self.nodes[n].state;
        for d in 0..self.dirs.len() {
            let (di, dj) = self.dirs[d];
            let c = CellCoord::new(here.cell.i + di, here.cell.j + dj);
            if !self.fits(c) {
                continue;
            }
            let r = self.robot.radius;
            if !move_feasible_static(self.map, here.cell.center(), c.center(), r) {
                continue;
            }
            let cidx = self.ensure_intervals(c);
            let direct_time = self.robot.travel_time(here.cell.center(), c.center());
            let mut shortcut: Option<Option<usize>> = None;

            for k in 0..self.intervals[cidx].as_ref().unwrap().len() {
                let window = self.intervals[cidx].as_ref().unwrap()[k];
                if window.end < here.g + direct_time || window.start > here.window.end + direct_time {
                    continue;
                }
                let existing = self.node_ids[cidx][k];
                if existing != UNSEEN && self.nodes[existing as usize].closed {
                    continue;
                }

                let mut best = self.arrival_from(n, c, window).map(|a| (a, n));
                if self.cfg.any_angle {
                    let via = *shortcut.get_or_insert_with(|| {
                        self.nodes[n].parent.filter(|&p| {
                            let pc = self.nodes[p].state.cell;
                            pc != c && move_feasible_static(self.map, pc.center(), c.center(), r)
                        })
                    });
                    if let Some(p) = via {
                        if let Some(a) = self.arrival_from(p, c, window) {
                            // Collinear routes tie up to rounding; keep the shortcut.
                            if best.is_none_or(|(b, _)| a.arrive <= b.arrive + TIE_EPS) {
                                best = Some((a, p));
                            }
                        }
                    }
                }
                let Some((arr, parent)) = best else { continue };

                let state = NodeState {
                    cell: c,
                    window,
                    g: arr.arrive,
                    heading: arr.heading,
                };
                let id = if existing == UNSEEN {
                    let id = self.nodes.len();
                    let h = self.heuristic(c);
                    self.nodes.push(SearchNode {
                        state,
                        interval_index: k,
                        h,
                        parent: Some(parent),
                        depart: arr.depart,
                        closed: false,
                    });
                    self.node_ids[cidx][k] = id as u32;
                    id
                } else {
                    let id = existing as usize;
                    if self.nodes[id].state.g <= arr.arrive {
                        continue;
                    }
                    let node = &mut self.nodes[id];
                    node.state = state;
                    node.parent = Some(parent);
                    node.depart = arr.depart;
                    id
                };
                self.push(id, None);
            }
        }
    }

    fn reconstruct(&self, goal: usize) -> Trajectory {
        let mut chain = vec![goal];
        while let Some(p) = self.nodes[*chain.last().unwrap()].parent {
            chain.push(p);
        }
        chain.reverse();

        let start = self.robot.start;
        let mut prims = Vec::new();
        for pair in chain.windows(2) {
            let (from, to) = (&self.nodes[pair[0]], &self.nodes[pair[1]]);
            let (a, b) = (from.state.cell.center(), to.state.cell.center());
            let heading = to.state.heading;
            let rot_end = from.state.g + self.robot.rotation_time(from.state.heading, heading);
            if from.state.heading != heading {
                prims.push(Primitive::Rotate {
                    at: a,
                    from_heading: from.state.heading,
                    to_heading: heading,
                    t_start: from.state.g,
                    t_end: rot_end,
                });
            }
            if to.depart > rot_end {
                prims.push(Primitive::Wait {
                    at: a,
                    heading,
                    t_start: rot_end,
                    t_end: to.depart,
                });
            }
            prims.push(Primitive::Translate {
                from: a,
                to: b,
                heading,
                t_start: to.depart,
                t_end: to.state.g,
            });
        }

        let last = &self.nodes[goal].state;
        if last.heading != self.robot.goal.theta {
            prims.push(Primitive::Rotate {
                at: last.cell.center(),
                from_heading: last.heading,
                to_heading: self.robot.goal.theta,
                t_start: last.g,
                t_end: last.g + self.robot.rotation_time(last.heading, self.robot.goal.theta),
            });
        }
        Trajectory::new(start, prims)
    }
}

fn is_cell_center(x: f64, y: f64) -> bool {
    (x - 0.5).fract() == 0.0 && (y - 0.5).fract() == 0.0
}

/// Plans one robot around `obstacles` with no deadline.
pub fn plan_single(
    robot: &RobotSpec,
    map: &GridMap,
    obstacles: &ObstacleSet,
    cfg: &PlannerConfig,
) -> Result<Trajectory, PlanError> {
    plan_single_until(robot, map, obstacles, cfg, None)
}

pub fn plan_single_until(
    robot: &RobotSpec,
    map: &GridMap,
    obstacles: &ObstacleSet,
    cfg: &PlannerConfig,
    deadline: Option<Instant>,
) -> Result<Trajectory, PlanError> {
    let (s, g) = (robot.start, robot.goal);
    if !is_cell_center(s.x, s.y) || !map.disk_fits(s.position(), robot.radius) {
        return Err(PlanError::InvalidStart);
    }
    if !is_cell_center(g.x, g.y) || !map.disk_fits(g.position(), robot.radius) {
        return Err(PlanError::InvalidGoal);
    }

    let cells = map.width() * map.height();
    let mut search = Search {
        map,
        robot,
        obstacles,
        cfg,
        goal_cell: CellCoord::containing(g.position()),
        dirs: neighborhood(cfg.neighborhood),
        fits: vec![0; cells],
        intervals: vec![None; cells],
        node_ids: vec![Vec::new(); cells],
        nodes: Vec::new(),
        open: BinaryHeap::new(),
    };

    let start_cell = CellCoord::containing(s.position());
    let sidx = search.ensure_intervals(start_cell);
    let first = search.intervals[sidx].as_ref().unwrap().first().copied();
    let window = match first {
        Some(w) if w.start == 0.0 => w,
        _ => return Err(PlanError::StartUnsafe),
    };
    search.nodes.push(SearchNode {
        state: NodeState {
            cell: start_cell,
            window,
            g: 0.0,
            heading: s.theta,
        },
        interval_index: 0,
        h: search.heuristic(start_cell),
        parent: None,
        depart: 0.0,
        closed: false,
    });
    search.node_ids[sidx][0] = 0;
    search.push(0, None);

    let mut pops = 0u64;
    while let Some(entry) = search.open.pop() {
        pops += 1;
        if pops.is_multiple_of(256) && deadline.is_some_and(|d| Instant::now() >= d) {
            return Err(PlanError::Timeout);
        }
        if entry.terminal {
            return Ok(search.reconstruct(entry.node));
        }
        let node = &mut search.nodes[entry.node];
        if node.closed || node.state.g != entry.g {
            continue;
        }
        node.closed = true;
        let state = node.state;
        if state.cell == search.goal_cell && state.window.is_unbounded() {
            let turn = robot.rotation_time(state.heading, g.theta);
            if turn == 0.0 {
                return Ok(search.reconstruct(entry.node));
            }
            search.push(entry.node, Some(state.g + turn));
        }
        search.expand(entry.node);
    }
    Err(PlanError::Exhausted)
}
