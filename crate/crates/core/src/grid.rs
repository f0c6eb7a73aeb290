//! Grid maps and static feasibility for disks of arbitrary radius.
//!
//! Cell `(i, j)` covers the closed square `[i, i + 1] x [j, j + 1]` in cell
//! units; its center `(i + 0.5, j + 0.5)` is the only place a robot may wait
//! or rotate. A disk of radius `r` moving along a segment touches a cell when
//! the distance between the segment and the cell square is `< r`.

use crate::geometry::{point_segment_distance, Point2};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CellCoord {
    pub i: i32,
    pub j: i32,
}

impl CellCoord {
    pub const fn new(i: i32, j: i32) -> Self {
        Self { i, j }
    }

    pub fn center(self) -> Point2 {
        Point2::new(self.i as f64 + 0.5, self.j as f64 + 0.5)
    }

    /// The cell containing `p` (points on a shared edge go to the upper cell).
    pub fn containing(p: Point2) -> Self {
        Self::new(p.x.floor() as i32, p.y.floor() as i32)
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GridError {
    #[error("grid dimensions must be at least 1x1, got {width}x{height}")]
    EmptyGrid { width: usize, height: usize },
    #[error("expected {expected} cells, got {got}")]
    SizeMismatch { expected: usize, got: usize },
    #[error("row {row} has length {got}, expected {expected}")]
    RowLength { row: usize, got: usize, expected: usize },
    #[error("unexpected map character {0:?} (use '.' for free and '@' for blocked)")]
    BadCell(char),
}

/// Binary traversability grid. Out-of-bounds cells count as blocked.
#[derive(Debug, Clone, PartialEq)]
pub struct GridMap {
    width: usize,
    height: usize,
    /// Meters per cell. Metadata only: planning works in cell units.
    cell_size: f64,
    blocked: Vec<bool>,
}

impl GridMap {
    pub fn new(width: usize, height: usize, cell_size: f64, blocked: Vec<bool>) -> Result<Self, GridError> {
        if width == 0 || height == 0 {
            return Err(GridError::EmptyGrid { width, height });
        }
        if blocked.len() != width * height {
            return Err(GridError::SizeMismatch {
                expected: width * height,
                got: blocked.len(),
            });
        }
        Ok(Self {
            width,
            height,
            cell_size,
            blocked,
        })
    }

    pub fn empty(width: usize, height: usize) -> Self {
        Self::new(width, height, 1.0, vec![false; width * height]).expect("non-empty grid")
    }

    /// Parses rows of `.` (free) and `@` (blocked); row `j` is the `j`-th string.
    pub fn from_rows<S: AsRef<str>>(rows: &[S], cell_size: f64) -> Result<Self, GridError> {
        let height = rows.len();
        let width = rows.first().map_or(0, |r| r.as_ref().chars().count());
        let mut blocked = Vec::with_capacity(width * height);
        for (row, line) in rows.iter().enumerate() {
            let line = line.as_ref();
            let len = line.chars().count();
            if len != width {
                return Err(GridError::RowLength {
                    row,
                    got: len,
                    expected: width,
                });
            }
            for c in line.chars() {
                match c {
                    '.' => blocked.push(false),
                    '@' => blocked.push(true),
                    other => return Err(GridError::BadCell(other)),
                }
            }
        }
        Self::new(width, height, cell_size, blocked)
    }

    pub fn to_rows(&self) -> Vec<String> {
        (0..self.height)
            .map(|j| {
                (0..self.width)
                    .map(|i| if self.blocked[j * self.width + i] { '@' } else { '.' })
                    .collect()
            })
            .collect()
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn cell_size(&self) -> f64 {
        self.cell_size
    }

    pub fn in_bounds(&self, c: CellCoord) -> bool {
        c.i >= 0 && c.j >= 0 && (c.i as usize) < self.width && (c.j as usize) < self.height
    }

    pub fn is_blocked(&self, c: CellCoord) -> bool {
        !self.in_bounds(c) || self.blocked[c.j as usize * self.width + c.i as usize]
    }

    pub fn set_blocked(&mut self, c: CellCoord, blocked: bool) {
        assert!(self.in_bounds(c), "cell {c:?} out of bounds");
        self.blocked[c.j as usize * self.width + c.i as usize] = blocked;
    }

    pub fn cells(&self) -> impl Iterator<Item = CellCoord> + '_ {
        (0..self.height as i32).flat_map(move |j| (0..self.width as i32).map(move |i| CellCoord::new(i, j)))
    }

    /// True iff a disk of radius `r` resting at `center` touches no blocked
    /// or out-of-bounds cell.
    pub fn disk_fits(&self, center: Point2, r: f64) -> bool {
        move_feasible_static(self, center, center, r)
    }
}

fn point_square_distance(p: Point2, c: CellCoord) -> f64 {
    let (x0, y0) = (c.i as f64, c.j as f64);
    let dx = (x0 - p.x).max(0.0).max(p.x - (x0 + 1.0));
    let dy = (y0 - p.y).max(0.0).max(p.y - (y0 + 1.0));
    dx.hypot(dy)
}

/// Liang-Barsky clip: does the segment `[a, b]` meet the closed cell square?
fn segment_meets_square(a: Point2, b: Point2, c: CellCoord) -> bool {
    let (x0, y0) = (c.i as f64, c.j as f64);
    let d = b - a;
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for (p, q) in [
        (-d.x, a.x - x0),
        (d.x, x0 + 1.0 - a.x),
        (-d.y, a.y - y0),
        (d.y, y0 + 1.0 - a.y),
    ] {
        if p == 0.0 {
            if q < 0.0 {
                return false;
            }
        } else {
            let s = q / p;
            if p < 0.0 {
                lo = lo.max(s);
            } else {
                hi = hi.min(s);
            }
            if lo > hi {
                return false;
            }
        }
    }
    true
}

/// Distance between the segment `[a, b]` and the closed square of cell `c`.
pub(crate) fn segment_cell_distance(a: Point2, b: Point2, c: CellCoord) -> f64 {
    if segment_meets_square(a, b, c) {
        return 0.0;
    }
    let (x0, y0) = (c.i as f64, c.j as f64);
    let corners = [
        Point2::new(x0, y0),
        Point2::new(x0 + 1.0, y0),
        Point2::new(x0, y0 + 1.0),
        Point2::new(x0 + 1.0, y0 + 1.0),
    ];
    corners
        .iter()
        .map(|&k| point_segment_distance(k, a, b))
        .fold(point_square_distance(a, c).min(point_square_distance(b, c)), f64::min)
}

/// Column sweep over the capsule: yields each touched cell once, in
/// column-major order, and stops early when `visit` returns `false`. Cells
/// rejected by `consider` are skipped before the exact distance test.
fn sweep_capsule(
    from: Point2,
    to: Point2,
    r: f64,
    consider: impl Fn(CellCoord) -> bool,
    mut visit: impl FnMut(CellCoord) -> bool,
) {
    let x_lo = from.x.min(to.x);
    let x_hi = from.x.max(to.x);
    let d = to - from;
    for i in (x_lo - r).floor() as i32..=(x_hi + r).floor() as i32 {
        // y-extent of the segment portion that can reach this column.
        let (cx0, cx1) = (i as f64 - r, i as f64 + 1.0 + r);
        let (y_lo, y_hi) = if d.x == 0.0 {
            (from.y.min(to.y), from.y.max(to.y))
        } else {
            let s0 = ((cx0 - from.x) / d.x).clamp(0.0, 1.0);
            let s1 = ((cx1 - from.x) / d.x).clamp(0.0, 1.0);
            let (ya, yb) = (from.y + d.y * s0, from.y + d.y * s1);
            (ya.min(yb), ya.max(yb))
        };
        for j in (y_lo - r).floor() as i32..=(y_hi + r).floor() as i32 {
            let c = CellCoord::new(i, j);
            if consider(c) && segment_cell_distance(from, to, c) < r && !visit(c) {
                return;
            }
        }
    }
}

/// Cells whose closed square meets the open disk of radius `r` at `center`.
pub fn cells_overlapping_disk(center: Point2, r: f64) -> Vec<CellCoord> {
    cells_swept_by_move(center, center, r)
}

/// Cells whose closed square is at distance `< r` from the segment
/// `[from, to]`, i.e. the cells touched by a disk of radius `r` sliding along it.
pub fn cells_swept_by_move(from: Point2, to: Point2, r: f64) -> Vec<CellCoord> {
    debug_assert!(r > 0.0);
    let mut out = Vec::new();
    sweep_capsule(
        from,
        to,
        r,
        |_| true,
        |c| {
            out.push(c);
            true
        },
    );
    out
}

/// True iff every cell swept by the move is in bounds and free.
pub fn move_feasible_static(map: &GridMap, from: Point2, to: Point2, r: f64) -> bool {
    let mut ok = true;
    sweep_capsule(from, to, r, |c| map.is_blocked(c), |_| {
        ok = false;
        false
    });
    ok
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn set(v: Vec<CellCoord>) -> BTreeSet<(i32, i32)> {
        v.into_iter().map(|c| (c.i, c.j)).collect()
    }

    #[test]
    fn inscribed_disk_is_one_cell() {
        let s = set(cells_overlapping_disk(Point2::new(2.5, 3.5), 0.5));
        assert_eq!(s, BTreeSet::from([(2, 3)]));
    }

    #[test]
    fn unit_disk_covers_three_by_three() {
        // Corner neighbors are 0.707 away, so they are touched as well.
        let s = set(cells_overlapping_disk(Point2::new(2.5, 2.5), 1.0));
        let expected: BTreeSet<_> = (1..=3).flat_map(|i| (1..=3).map(move |j| (i, j))).collect();
        assert_eq!(s, expected);
    }

    #[test]
    fn disk_on_corner_touches_four_cells() {
        let s = set(cells_overlapping_disk(Point2::new(2.0, 2.0), 0.3));
        assert_eq!(s, BTreeSet::from([(1, 1), (1, 2), (2, 1), (2, 2)]));
    }

    #[test]
    fn axis_aligned_inscribed_sweep() {
        let s = set(cells_swept_by_move(Point2::new(1.5, 1.5), Point2::new(3.5, 1.5), 0.5));
        assert_eq!(s, BTreeSet::from([(1, 1), (2, 1), (3, 1)]));
        let s = set(cells_swept_by_move(Point2::new(2.5, 2.5), Point2::new(2.5, 2.5), 0.5));
        assert_eq!(s, BTreeSet::from([(2, 2)]));
    }

    #[test]
    fn corridor_too_narrow_for_wide_robot() {
        // One free row between two walls.
        let map = GridMap::from_rows(&["@@@@@@", "......", "@@@@@@"], 1.0).unwrap();
        let (a, b) = (Point2::new(0.5, 1.5), Point2::new(5.5, 1.5));
        assert!(move_feasible_static(&map, a, b, 0.5));
        assert!(!move_feasible_static(&map, a, b, 0.6));
    }

    #[test]
    fn out_of_bounds_is_blocked() {
        let map = GridMap::empty(3, 3);
        assert!(map.disk_fits(Point2::new(0.5, 0.5), 0.5));
        assert!(!map.disk_fits(Point2::new(0.5, 0.5), 0.51));
        assert!(map.disk_fits(Point2::new(1.5, 1.5), 1.0));
        assert!(map.is_blocked(CellCoord::new(-1, 0)));
        assert!(map.is_blocked(CellCoord::new(0, 3)));
    }

    #[test]
    fn rows_round_trip() {
        let rows = ["..@", "@..", "..."];
        let map = GridMap::from_rows(&rows, 0.05).unwrap();
        assert!(map.is_blocked(CellCoord::new(2, 0)));
        assert!(map.is_blocked(CellCoord::new(0, 1)));
        assert_eq!(map.to_rows(), rows);
        assert!(matches!(GridMap::from_rows(&["..", "."], 1.0), Err(GridError::RowLength { .. })));
        assert!(matches!(GridMap::from_rows(&[".x"], 1.0), Err(GridError::BadCell('x'))));
    }
}
