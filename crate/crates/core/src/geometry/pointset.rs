use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::point::{Point, Window, MAX_DIM};

/// Finite sample of a Delone set: sorted distinct points inside a window,
/// with a margin that designates the interior subset.
#[derive(Clone, Debug, PartialEq)]
pub struct PointSet {
    points: Vec<Point>,
    window: Window,
    interior_margin: f64,
}

impl PointSet {
    pub fn new(mut points: Vec<Point>, window: Window, interior_margin: f64) -> Result<Self> {
        if !(interior_margin >= 0.0) {
            return Err(Error::Invalid(alloc::format!("negative interior margin {interior_margin}")));
        }
        if let Some(p) = points.iter().find(|p| !window.contains(p)) {
            return Err(Error::Invalid(alloc::format!("point {p} outside window {window}")));
        }
        points.sort_unstable();
        points.dedup();
        Ok(PointSet { points, window, interior_margin })
    }

    /// Builds the set with the default margin `2 R`, `R` the covering
    /// radius estimate of the sample.
    pub fn with_default_margin(points: Vec<Point>, window: Window) -> Result<Self> {
        let mut set = PointSet::new(points, window, 0.0)?;
        let est = super::covering_estimate(&set)?;
        set.interior_margin = 2.0 * est.radius();
        Ok(set)
    }

    /// All points of `Z^d` in the window, as a Delone set.
    pub fn lattice(window: Window) -> Result<Self> {
        Self::with_default_margin(window.points().collect(), window)
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn window(&self) -> &Window {
        &self.window
    }

    pub fn dim(&self) -> usize {
        self.window.dim()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn interior_margin(&self) -> f64 {
        self.interior_margin
    }

    pub fn contains(&self, p: &Point) -> bool {
        self.points.binary_search(p).is_ok()
    }

    pub fn is_interior(&self, p: &Point) -> bool {
        self.window.boundary_distance(p) as f64 >= self.interior_margin
    }

    pub fn interior_points(&self) -> impl Iterator<Item = &Point> + '_ {
        self.points.iter().filter(move |p| self.is_interior(p))
    }

    pub fn with_margin(&self, interior_margin: f64) -> PointSet {
        PointSet { points: self.points.clone(), window: self.window, interior_margin }
    }

    /// The points inside `window`, re-windowed.
    pub fn restrict(&self, window: &Window) -> Result<PointSet> {
        let pts = self.points.iter().copied().filter(|p| window.contains(p)).collect();
        PointSet::new(pts, *window, self.interior_margin)
    }

    pub fn is_subset_of(&self, other: &PointSet) -> bool {
        self.points.iter().all(|p| other.contains(p))
    }
}

/// Bucket grid over a window for radius queries with exact integer
/// distances.
pub struct SpatialIndex<'a> {
    points: &'a [Point],
    window: Window,
    cell: i64,
    grid: [usize; MAX_DIM],
    starts: Vec<u32>,
    items: Vec<u32>,
}

impl<'a> SpatialIndex<'a> {
    pub fn new(points: &'a [Point], window: Window, cell: i64) -> Self {
        let cell = cell.max(1);
        let d = window.dim();
        let mut grid = [1usize; MAX_DIM];
        for (i, g) in grid.iter_mut().enumerate().take(d) {
            *g = (window.side(i) as i64 + cell - 1) as usize / cell as usize;
        }
        let n_cells: usize = grid.iter().product();
        let mut counts = alloc::vec![0u32; n_cells + 1];
        let bucket = |p: &Point| -> usize {
            let mut idx = 0usize;
            for i in 0..MAX_DIM {
                let c = if i < d { ((p.coord(i) - window.lo().coord(i)) / cell) as usize } else { 0 };
                idx = idx * grid[i] + c;
            }
            idx
        };
        for p in points {
            counts[bucket(p) + 1] += 1;
        }
        for i in 1..counts.len() {
            counts[i] += counts[i - 1];
        }
        let mut fill = counts.clone();
        let mut items = alloc::vec![0u32; points.len()];
        for (k, p) in points.iter().enumerate() {
            let b = bucket(p);
            items[fill[b] as usize] = k as u32;
            fill[b] += 1;
        }
        SpatialIndex { points, window, cell, grid, starts: counts, items }
    }

    /// Calls `f` on every indexed point `z` with `|z - center|^2 <= radius_sq`.
    pub fn for_each_within(&self, center: &Point, radius_sq: i64, mut f: impl FnMut(&Point)) {
        let d = self.window.dim();
        let r = isqrt_ceil(radius_sq);
        let mut lo = [0usize; MAX_DIM];
        let mut hi = [0usize; MAX_DIM];
        for i in 0..d {
            let base = self.window.lo().coord(i);
            let a = (center.coord(i) - r - base).max(0);
            let b = (center.coord(i) + r - base).min(self.window.side(i) as i64 - 1);
            if a > b {
                return;
            }
            lo[i] = (a / self.cell) as usize;
            hi[i] = (b / self.cell) as usize;
        }
        let mut cur = lo;
        loop {
            let mut idx = 0usize;
            for i in 0..MAX_DIM {
                idx = idx * self.grid[i] + cur[i];
            }
            for &k in &self.items[self.starts[idx] as usize..self.starts[idx + 1] as usize] {
                let z = &self.points[k as usize];
                if z.dist_sq(center) <= radius_sq {
                    f(z);
                }
            }
            // odometer over the bucket box
            let mut axis = d;
            loop {
                if axis == 0 {
                    return;
                }
                axis -= 1;
                if cur[axis] < hi[axis] {
                    cur[axis] += 1;
                    break;
                }
                cur[axis] = lo[axis];
            }
        }
    }

    pub fn within(&self, center: &Point, radius_sq: i64) -> Vec<Point> {
        let mut out = Vec::new();
        self.for_each_within(center, radius_sq, |z| out.push(*z));
        out
    }

    /// Nearest indexed points within `radius_sq`; ties are all returned,
    /// in lexicographic order.
    pub fn nearest_within(&self, center: &Point, radius_sq: i64) -> (i64, Vec<Point>) {
        let mut best = i64::MAX;
        let mut out = Vec::new();
        self.for_each_within(center, radius_sq, |z| {
            let d = z.dist_sq(center);
            if d < best {
                best = d;
                out.clear();
                out.push(*z);
            } else if d == best {
                out.push(*z);
            }
        });
        out.sort_unstable();
        (best, out)
    }
}

pub(crate) fn isqrt_ceil(v: i64) -> i64 {
    if v <= 0 {
        return 0;
    }
    let mut r = libm::sqrt(v as f64) as i64;
    while r * r > v {
        r -= 1;
    }
    while r * r < v {
        r += 1;
    }
    r
}

/// Integer bound `floor(x^2)` padded against rounding, for radius queries
/// that must include every point at real distance `<= x`.
pub(crate) fn radius_sq_bound(x: f64) -> i64 {
    libm::floor(x * x + 1e-9) as i64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_matches_brute_force() {
        let w = Window::cube(2, 7).unwrap();
        let pts: Vec<Point> = w.points().filter(|p| (p.coord(0) * 3 + p.coord(1) * 5).rem_euclid(7) < 3).collect();
        let idx = SpatialIndex::new(&pts, w, 3);
        for c in [Point::from2(0, 0), Point::from2(-7, 7), Point::from2(5, -2)] {
            for r2 in [0, 1, 2, 5, 13, 40] {
                let mut got = idx.within(&c, r2);
                got.sort();
                let want: Vec<Point> = pts.iter().copied().filter(|z| z.dist_sq(&c) <= r2).collect();
                assert_eq!(got, want);
            }
        }
    }

    #[test]
    fn interior_and_restrict() {
        let w = Window::cube(1, 10).unwrap();
        let set = PointSet::new(w.points().collect(), w, 2.5).unwrap();
        assert_eq!(set.interior_points().count(), 15);
        let sub = set.restrict(&Window::cube(1, 3).unwrap()).unwrap();
        assert_eq!(sub.len(), 7);
        assert!(sub.is_subset_of(&set));
    }

    #[test]
    fn rejects_outside_points() {
        let w = Window::cube(1, 2).unwrap();
        assert!(PointSet::new(alloc::vec![Point::from1(3)], w, 0.0).is_err());
    }
}
