//! Word length with respect to a finite generating set of Z^d, by
//! breadth-first search inside a Euclidean ball.

use alloc::collections::VecDeque;
use alloc::vec::Vec;

use super::voronoi::FirstReturnSet;
use crate::error::{Error, Result};
use crate::point::{Point, MAX_DIM};

const UNSEEN: u32 = u32::MAX;

/// Shortest words from 0 to each target, searching lattice points within
/// `radius` of the origin. Unreached targets stay `None`.
pub fn word_distances(targets: &[Point], gens: &[Point], radius: f64) -> Vec<Option<u32>> {
    let Some(first) = targets.first() else { return Vec::new() };
    let dim = first.dim();
    let r = libm::floor(radius).max(0.0) as i64;
    let r_sq = radius * radius + 1e-9;
    let side = (2 * r + 1) as usize;
    let mut strides = [0usize; MAX_DIM];
    let mut acc = 1usize;
    for i in (0..dim).rev() {
        strides[i] = acc;
        acc *= side;
    }
    let slot = |p: &Point| -> Option<usize> {
        if p.norm_sq() as f64 > r_sq {
            return None;
        }
        let mut idx = 0;
        for i in 0..dim {
            idx += (p.coord(i) + r) as usize * strides[i];
        }
        Some(idx)
    };
    let mut dist = alloc::vec![UNSEEN; acc];
    let mut remaining = targets.iter().filter(|t| slot(t).is_some()).count();
    let origin = Point::zero(dim);
    let mut queue = VecDeque::new();
    if let Some(s) = slot(&origin) {
        dist[s] = 0;
        queue.push_back(origin);
        if targets.contains(&origin) {
            remaining = remaining.saturating_sub(targets.iter().filter(|t| t.is_zero()).count());
        }
    }
    while remaining > 0 {
        let Some(p) = queue.pop_front() else { break };
        let dp = dist[slot(&p).expect("queued point in ball")];
        for g in gens {
            let q = p + *g;
            if let Some(s) = slot(&q) {
                if dist[s] == UNSEEN {
                    dist[s] = dp + 1;
                    remaining -= targets.iter().filter(|t| **t == q).count();
                    queue.push_back(q);
                }
            }
        }
    }
    targets.iter().map(|t| slot(t).and_then(|s| (dist[s] != UNSEEN).then_some(dist[s]))).collect()
}

/// Length of the shortest word in `gens` summing to `u`.
pub fn word_distance(u: &Point, gens: &[Point], radius: Option<f64>) -> Result<u32> {
    let max_gen = gens.iter().map(Point::norm).fold(0.0, f64::max);
    let radius = radius.unwrap_or(u.norm() + max_gen);
    word_distances(core::slice::from_ref(u), gens, radius)[0].ok_or(Error::NotGenerated(*u))
}

/// F-distance: minimal number of first-return vectors summing to `u`. The
/// default search ball has radius `|u| + max |F|`.
pub fn f_distance(u: &Point, f: &FirstReturnSet, radius: Option<f64>) -> Result<u32> {
    word_distance(u, &f.to_vec(), radius)
}

/// Largest F-distance between two points of `patch`.
pub fn f_diameter(patch: &[Point], f: &FirstReturnSet) -> Result<u32> {
    if patch.is_empty() {
        return Err(Error::Invalid("empty patch".into()));
    }
    let gens = f.to_vec();
    let max_gen = f.max_norm();
    let mut best = 0;
    for (i, p) in patch.iter().enumerate() {
        let targets: Vec<Point> = patch[i + 1..].iter().map(|q| *q - *p).collect();
        if targets.is_empty() {
            continue;
        }
        let reach = targets.iter().map(Point::norm).fold(0.0, f64::max) + max_gen;
        for (t, d) in targets.iter().zip(word_distances(&targets, &gens, reach)) {
            best = best.max(d.ok_or(Error::NotGenerated(*t))?);
        }
    }
    Ok(best)
}
