use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::point::{check_dim, Point, Window};

pub type Symbol = u32;

/// Finite window of a point of a subshift: a d-dimensional symbol array
/// whose index 0 sits at `offset` in Z^d. Arrays are row-major with axis 0
/// most significant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Configuration {
    shape: Vec<usize>,
    offset: Point,
    cells: Vec<Symbol>,
}

impl Configuration {
    pub fn new(shape: Vec<usize>, offset: Point, cells: Vec<Symbol>) -> Result<Self> {
        check_dim(shape.len())?;
        offset.check_dim(shape.len())?;
        if shape.iter().any(|&s| s == 0) {
            return Err(Error::Invalid("configuration with empty side".into()));
        }
        if cells.len() != shape.iter().product::<usize>() {
            return Err(Error::Invalid(alloc::format!(
                "configuration has {} cells, shape {:?} needs {}",
                cells.len(),
                shape,
                shape.iter().product::<usize>()
            )));
        }
        let cfg = Configuration { shape, offset, cells };
        if !cfg.window().contains(&Point::zero(cfg.dim())) {
            return Err(Error::Invalid("configuration does not cover the origin".into()));
        }
        Ok(cfg)
    }

    pub fn dim(&self) -> usize {
        self.shape.len()
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn offset(&self) -> Point {
        self.offset
    }

    pub fn cells(&self) -> &[Symbol] {
        &self.cells
    }

    /// The support in Z^d.
    pub fn window(&self) -> Window {
        let hi: Vec<i64> = (0..self.dim()).map(|i| self.offset.coord(i) + self.shape[i] as i64 - 1).collect();
        Window::new(self.offset, Point::new(&hi).expect("support corner")).expect("nonempty support")
    }

    pub fn get(&self, p: &Point) -> Option<Symbol> {
        self.window().index_of(p).map(|i| self.cells[i])
    }

    fn strides(&self) -> Vec<i64> {
        let d = self.dim();
        let mut st = alloc::vec![1i64; d];
        for i in (0..d.saturating_sub(1)).rev() {
            st[i] = st[i + 1] * self.shape[i + 1] as i64;
        }
        st
    }

    /// Flat index of the first cell of every row of `pattern`.
    fn row_starts(&self, pattern: &Window) -> Vec<usize> {
        let support = self.window();
        let d = self.dim();
        let mut lo = pattern.lo().coords();
        let mut hi = pattern.hi().coords();
        lo[d - 1] = pattern.lo().coord(d - 1);
        hi[d - 1] = lo[d - 1];
        let rows = Window::new(Point::new(&lo).expect("dim"), Point::new(&hi).expect("dim")).expect("rows");
        rows.points().map(|r| support.index_of(&r).expect("pattern inside support")).collect()
    }

    fn matches_rows(&self, rows: &[usize], len: usize, shift: i64) -> bool {
        rows.iter().all(|&r| {
            let t = (r as i64 + shift) as usize;
            self.cells[r..r + len] == self.cells[t..t + len]
        })
    }

    /// Whether the pattern of `self` on `pattern` reappears translated by `p`.
    /// Both `pattern` and `pattern + p` must lie in the support.
    pub fn matches_at(&self, p: &Point, pattern: &Window) -> bool {
        let st = self.strides();
        let shift = (0..self.dim()).map(|i| p.coord(i) * st[i]).sum();
        self.matches_rows(&self.row_starts(pattern), pattern.side(self.dim() - 1), shift)
    }

    /// All `p` in `within` with `self[p + b] = self[b]` for `b` in `pattern`.
    /// `pattern + within` must lie in the support.
    pub fn occurrences(&self, pattern: &Window, within: &Window) -> Vec<Point> {
        let st = self.strides();
        let rows = self.row_starts(pattern);
        let len = pattern.side(self.dim() - 1);
        within
            .points()
            .filter(|p| {
                let shift = (0..self.dim()).map(|i| p.coord(i) * st[i]).sum();
                self.matches_rows(&rows, len, shift)
            })
            .collect()
    }

    /// Tensor product of 1-d configurations; the product symbol of
    /// `(s_1, .., s_d)` is the mixed-radix number with radices `alphabet_sizes`.
    pub fn tensor(factors: &[Configuration], alphabet_sizes: &[usize]) -> Result<Configuration> {
        check_dim(factors.len())?;
        if factors.iter().any(|f| f.dim() != 1) || alphabet_sizes.len() != factors.len() {
            return Err(Error::Invalid("tensor product needs 1-d factors with alphabet sizes".into()));
        }
        let shape: Vec<usize> = factors.iter().map(|f| f.shape[0]).collect();
        let offset = Point::new(&factors.iter().map(|f| f.offset.coord(0)).collect::<Vec<_>>())?;
        let support = Window::new(Point::zero(shape.len()), Point::new(&shape.iter().map(|&s| s as i64 - 1).collect::<Vec<_>>())?)?;
        let cells = support
            .points()
            .map(|ix| {
                let mut sym = 0u32;
                for (i, f) in factors.iter().enumerate() {
                    sym = sym * alphabet_sizes[i] as u32 + f.cells[ix.coord(i) as usize];
                }
                sym
            })
            .collect();
        Configuration::new(shape, offset, cells)
    }
}
