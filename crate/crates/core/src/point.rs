//! Integer lattice points and axis-aligned windows in Z^d, d <= 3.

use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Index, Neg, Sub};

use crate::error::{Error, Result};

/// Largest supported dimension.
pub const MAX_DIM: usize = 3;

/// A point of Z^d. Coordinates beyond `dim` are kept at zero so that the
/// derived ordering is lexicographic on the active coordinates.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Point {
    dim: u8,
    c: [i32; MAX_DIM],
}

fn narrow(v: i64) -> Result<i32> {
    i32::try_from(v).map_err(|_| Error::Overflow)
}

impl Point {
    pub fn new(coords: &[i64]) -> Result<Self> {
        check_dim(coords.len())?;
        let mut c = [0i32; MAX_DIM];
        for (slot, &v) in c.iter_mut().zip(coords) {
            *slot = narrow(v)?;
        }
        Ok(Point { dim: coords.len() as u8, c })
    }

    pub fn zero(dim: usize) -> Self {
        assert!((1..=MAX_DIM).contains(&dim), "dimension out of range");
        Point { dim: dim as u8, c: [0; MAX_DIM] }
    }

    /// Builds a 1-d point.
    pub fn from1(x: i64) -> Self {
        Point::new(&[x]).expect("coordinate out of range")
    }

    pub fn from2(x: i64, y: i64) -> Self {
        Point::new(&[x, y]).expect("coordinate out of range")
    }

    pub fn from3(x: i64, y: i64, z: i64) -> Self {
        Point::new(&[x, y, z]).expect("coordinate out of range")
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim as usize
    }

    #[inline]
    pub fn coord(&self, i: usize) -> i64 {
        debug_assert!(i < self.dim());
        self.c[i] as i64
    }

    pub fn coords(&self) -> Vec<i64> {
        self.c[..self.dim()].iter().map(|&v| v as i64).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|&v| v == 0)
    }

    pub fn norm_sq(&self) -> i64 {
        self.c.iter().map(|&v| (v as i64) * (v as i64)).sum()
    }

    pub fn norm(&self) -> f64 {
        libm::sqrt(self.norm_sq() as f64)
    }

    pub fn dist_sq(&self, other: &Point) -> i64 {
        (*self - *other).norm_sq()
    }

    pub fn dot(&self, other: &Point) -> i64 {
        self.c.iter().zip(other.c.iter()).map(|(&a, &b)| a as i64 * b as i64).sum()
    }

    /// Returns a copy with coordinate `i` replaced.
    pub fn with(&self, i: usize, v: i64) -> Result<Self> {
        let mut p = *self;
        p.c[i] = narrow(v)?;
        Ok(p)
    }

    /// Coordinatewise product with an integer vector (the bracket [n, q]).
    pub fn scale_axes(&self, factors: &[i64]) -> Result<Self> {
        let mut p = *self;
        for (i, f) in factors.iter().enumerate().take(self.dim()) {
            p.c[i] = narrow(self.c[i] as i64 * f)?;
        }
        Ok(p)
    }

    pub fn check_dim(&self, expected: usize) -> Result<()> {
        if self.dim() == expected {
            Ok(())
        } else {
            Err(Error::DimensionMismatch { expected, found: self.dim() })
        }
    }
}

pub(crate) fn check_dim(d: usize) -> Result<()> {
    if (1..=MAX_DIM).contains(&d) {
        Ok(())
    } else {
        Err(Error::UnsupportedDimension(d))
    }
}

impl Index<usize> for Point {
    type Output = i32;
    fn index(&self, i: usize) -> &i32 {
        &self.c[..self.dim()][i]
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, o: Point) -> Point {
        debug_assert_eq!(self.dim, o.dim);
        let mut c = [0; MAX_DIM];
        for i in 0..MAX_DIM {
            c[i] = self.c[i] + o.c[i];
        }
        Point { dim: self.dim, c }
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, o: Point) -> Point {
        debug_assert_eq!(self.dim, o.dim);
        let mut c = [0; MAX_DIM];
        for i in 0..MAX_DIM {
            c[i] = self.c[i] - o.c[i];
        }
        Point { dim: self.dim, c }
    }
}

impl Neg for Point {
    type Output = Point;
    fn neg(self) -> Point {
        let mut c = self.c;
        for v in c.iter_mut() {
            *v = -*v;
        }
        Point { dim: self.dim, c }
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for i in 0..self.dim() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{}", self.c[i])?;
        }
        f.write_str(")")
    }
}

/// Inclusive axis-aligned box `[lo, hi]` of lattice points.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Window {
    lo: Point,
    hi: Point,
}

impl Window {
    pub fn new(lo: Point, hi: Point) -> Result<Self> {
        lo.check_dim(hi.dim())?;
        if (0..lo.dim()).any(|i| lo.coord(i) > hi.coord(i)) {
            return Err(Error::Invalid(alloc::format!("empty window {lo}..{hi}")));
        }
        Ok(Window { lo, hi })
    }

    /// The cube `[-r, r]^d`.
    pub fn cube(dim: usize, r: i64) -> Result<Self> {
        check_dim(dim)?;
        let lo = Point::new(&alloc::vec![-r; dim])?;
        let hi = Point::new(&alloc::vec![r; dim])?;
        Window::new(lo, hi)
    }

    pub fn lo(&self) -> Point {
        self.lo
    }

    pub fn hi(&self) -> Point {
        self.hi
    }

    pub fn dim(&self) -> usize {
        self.lo.dim()
    }

    pub fn side(&self, i: usize) -> usize {
        (self.hi.coord(i) - self.lo.coord(i) + 1) as usize
    }

    pub fn shape(&self) -> Vec<usize> {
        (0..self.dim()).map(|i| self.side(i)).collect()
    }

    pub fn volume(&self) -> usize {
        (0..self.dim()).map(|i| self.side(i)).product()
    }

    pub fn contains(&self, p: &Point) -> bool {
        p.dim() == self.dim()
            && (0..self.dim()).all(|i| self.lo.coord(i) <= p.coord(i) && p.coord(i) <= self.hi.coord(i))
    }

    pub fn contains_window(&self, w: &Window) -> bool {
        self.contains(&w.lo) && self.contains(&w.hi)
    }

    /// Lattice distance from `p` to the complement of the box, i.e. the
    /// smallest slack over all faces. Negative when `p` lies outside.
    pub fn boundary_distance(&self, p: &Point) -> i64 {
        (0..self.dim())
            .map(|i| (p.coord(i) - self.lo.coord(i)).min(self.hi.coord(i) - p.coord(i)))
            .min()
            .unwrap_or(0)
    }

    pub fn intersect(&self, other: &Window) -> Option<Window> {
        let d = self.dim();
        let mut lo = alloc::vec![0; d];
        let mut hi = alloc::vec![0; d];
        for i in 0..d {
            lo[i] = self.lo.coord(i).max(other.lo.coord(i));
            hi[i] = self.hi.coord(i).min(other.hi.coord(i));
        }
        Window::new(Point::new(&lo).ok()?, Point::new(&hi).ok()?).ok()
    }

    /// Shrinks every face inward by `by` lattice units.
    pub fn shrink(&self, by: i64) -> Option<Window> {
        let d = self.dim();
        let lo: Vec<i64> = (0..d).map(|i| self.lo.coord(i) + by).collect();
        let hi: Vec<i64> = (0..d).map(|i| self.hi.coord(i) - by).collect();
        Window::new(Point::new(&lo).ok()?, Point::new(&hi).ok()?).ok()
    }

    pub fn translate(&self, v: Point) -> Window {
        Window { lo: self.lo + v, hi: self.hi + v }
    }

    /// Row-major index with axis 0 most significant, so index order agrees
    /// with the lexicographic order of points.
    pub fn index_of(&self, p: &Point) -> Option<usize> {
        if !self.contains(p) {
            return None;
        }
        let mut idx = 0usize;
        for i in 0..self.dim() {
            idx = idx * self.side(i) + (p.coord(i) - self.lo.coord(i)) as usize;
        }
        Some(idx)
    }

    pub fn point_at(&self, mut idx: usize) -> Point {
        let d = self.dim();
        let mut c = [0i64; MAX_DIM];
        for i in (0..d).rev() {
            let s = self.side(i);
            c[i] = self.lo.coord(i) + (idx % s) as i64;
            idx /= s;
        }
        Point::new(&c[..d]).expect("window point")
    }

    /// All lattice points in lexicographic order.
    pub fn points(&self) -> impl Iterator<Item = Point> + '_ {
        (0..self.volume()).map(move |i| self.point_at(i))
    }
}

impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{} .. {}]", self.lo, self.hi)
    }
}
