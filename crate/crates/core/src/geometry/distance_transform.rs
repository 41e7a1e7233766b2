//! Exact squared Euclidean distance transform on the half-integer grid.
//!
//! Coordinates are doubled so the grid `lo + g/2` becomes integral; the
//! lower envelope of parabolas is built with rational breakpoints compared
//! by cross-multiplication, so every output is an exact integer.

use alloc::vec::Vec;

use crate::point::{Point, Window, MAX_DIM};

pub(crate) const INF: i64 = i64::MAX / 4;

/// Squared distances (in quarter lattice units) from every half-grid point
/// of a window to the nearest site.
pub struct HalfGridField {
    shape: [usize; MAX_DIM],
    dim: usize,
    data: Vec<i64>,
}

impl HalfGridField {
    pub fn compute(points: &[Point], window: &Window) -> Self {
        let dim = window.dim();
        let mut shape = [1usize; MAX_DIM];
        for (i, s) in shape.iter_mut().enumerate().take(dim) {
            *s = 2 * window.side(i) - 1;
        }
        let total: usize = shape.iter().product();
        let mut data = alloc::vec![INF; total];
        for p in points {
            let mut idx = 0usize;
            for i in 0..MAX_DIM {
                let g = if i < dim { 2 * (p.coord(i) - window.lo().coord(i)) as usize } else { 0 };
                idx = idx * shape[i] + g;
            }
            data[idx] = 0;
        }
        let mut field = HalfGridField { shape, dim, data };
        for axis in 0..dim {
            field.transform_axis(axis);
        }
        field
    }

    fn transform_axis(&mut self, axis: usize) {
        let n = self.shape[axis];
        let stride: usize = self.shape[axis + 1..].iter().product();
        let outer: usize = self.shape[..axis].iter().product();
        let mut line = alloc::vec![0i64; n];
        let mut out = alloc::vec![0i64; n];
        let mut v = Vec::with_capacity(n);
        let mut z = Vec::with_capacity(n + 1);
        for o in 0..outer {
            for s in 0..stride {
                let base = o * n * stride + s;
                for (q, slot) in line.iter_mut().enumerate() {
                    *slot = self.data[base + q * stride];
                }
                lower_envelope(&line, &mut out, &mut v, &mut z);
                for (q, val) in out.iter().enumerate() {
                    self.data[base + q * stride] = *val;
                }
            }
        }
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape[..self.dim]
    }

    /// Largest value over the grid points whose every doubled coordinate
    /// `g_i` satisfies `erosion <= g_i <= shape_i - 1 - erosion`; `None`
    /// when that region is empty.
    pub fn max_in_eroded(&self, erosion: i64) -> Option<i64> {
        let mut lo = [0usize; MAX_DIM];
        let mut hi = [0usize; MAX_DIM];
        for i in 0..self.dim {
            let top = self.shape[i] as i64 - 1 - erosion;
            if erosion > top {
                return None;
            }
            lo[i] = erosion as usize;
            hi[i] = top as usize;
        }
        let mut best = i64::MIN;
        let mut cur = lo;
        loop {
            let mut idx = 0usize;
            for i in 0..MAX_DIM {
                idx = idx * self.shape[i] + cur[i];
            }
            best = best.max(self.data[idx]);
            let mut axis = self.dim;
            loop {
                if axis == 0 {
                    return Some(best);
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
}

/// Breakpoint `num / den` with `den > 0`, or minus infinity.
#[derive(Clone, Copy)]
enum Break {
    NegInf,
    At(i128, i128),
}

fn break_le(a: (i128, i128), b: Break) -> bool {
    match b {
        Break::NegInf => false,
        Break::At(n, d) => a.0 * d <= n * a.1,
    }
}

/// One-dimensional transform `out[q] = min_p (q - p)^2 + f[p]`.
fn lower_envelope(f: &[i64], out: &mut [i64], v: &mut Vec<usize>, z: &mut Vec<Break>) {
    v.clear();
    z.clear();
    for (q, &fq) in f.iter().enumerate() {
        if fq >= INF {
            continue;
        }
        let mut s = (0i128, 1i128);
        loop {
            let Some(&p) = v.last() else { break };
            let (pi, qi) = (p as i128, q as i128);
            let num = (fq as i128 + qi * qi) - (f[p] as i128 + pi * pi);
            s = (num, 2 * (qi - pi));
            if break_le(s, *z.last().unwrap()) {
                v.pop();
                z.pop();
            } else {
                break;
            }
        }
        if v.is_empty() {
            z.push(Break::NegInf);
        } else {
            z.push(Break::At(s.0, s.1));
        }
        v.push(q);
    }
    if v.is_empty() {
        out.iter_mut().for_each(|o| *o = INF);
        return;
    }
    let mut k = 0usize;
    for (q, slot) in out.iter_mut().enumerate() {
        while k + 1 < v.len() {
            match z[k + 1] {
                Break::At(n, d) if n < (q as i128) * d => k += 1,
                _ => break,
            }
        }
        let dq = q as i64 - v[k] as i64;
        *slot = dq * dq + f[v[k]];
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute(points: &[Point], window: &Window) -> Vec<i64> {
        let d = window.dim();
        let mut shape = [1usize; MAX_DIM];
        for i in 0..d {
            shape[i] = 2 * window.side(i) - 1;
        }
        let total: usize = shape.iter().product();
        let mut out = Vec::with_capacity(total);
        for idx in 0..total {
            let mut rem = idx;
            let mut g = [0i64; MAX_DIM];
            for i in (0..MAX_DIM).rev() {
                g[i] = (rem % shape[i]) as i64;
                rem /= shape[i];
            }
            let best = points
                .iter()
                .map(|p| {
                    (0..d)
                        .map(|i| {
                            let t = 2 * (p.coord(i) - window.lo().coord(i)) - g[i];
                            t * t
                        })
                        .sum::<i64>()
                })
                .min()
                .unwrap_or(INF);
            out.push(best);
        }
        out
    }

    #[test]
    fn matches_brute_force() {
        let w = Window::new(Point::from2(-3, -2), Point::from2(4, 5)).unwrap();
        let pts: Vec<Point> = w.points().filter(|p| (p.coord(0) * 7 + p.coord(1) * 3).rem_euclid(11) == 0).collect();
        let field = HalfGridField::compute(&pts, &w);
        assert_eq!(field.data, brute(&pts, &w));

        let w3 = Window::cube(3, 2).unwrap();
        let pts3 = alloc::vec![Point::from3(0, 0, 0), Point::from3(2, -2, 1), Point::from3(-1, 1, -2)];
        assert_eq!(HalfGridField::compute(&pts3, &w3).data, brute(&pts3, &w3));

        let w1 = Window::cube(1, 9).unwrap();
        let pts1 = alloc::vec![Point::from1(-9), Point::from1(-2), Point::from1(5)];
        assert_eq!(HalfGridField::compute(&pts1, &w1).data, brute(&pts1, &w1));
    }

    #[test]
    fn empty_set_is_infinite() {
        let w = Window::cube(1, 2).unwrap();
        let field = HalfGridField::compute(&[], &w);
        assert_eq!(field.max_in_eroded(0), Some(INF));
    }
}
