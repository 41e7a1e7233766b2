//! Exact Voronoi neighbour relation on integer point sets and the derived
//! first-return vectors.
//!
//! Two sites are neighbours when their closed cells intersect, corner
//! contacts included. For a pair `(x, x')` the intersection is the set of
//! `y` on the bisector with `|y - x| <= |y - z|` for every other site `z`;
//! only sites within `2R` of `x` or `x'` can bind on a cell of radius at
//! most `R`, so the system stays small and is decided exactly.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use super::feasibility::LinearSystem;
use super::pointset::{radius_sq_bound, PointSet, SpatialIndex};
use super::radii::{packing_covering_radii, DeloneRadii};
use crate::error::{Error, Result};
use crate::point::Point;

#[derive(Clone, Debug, Default, PartialEq)]
pub struct NeighborDiagnostics {
    /// Points whose neighbourhoods were computed.
    pub eligible: usize,
    /// Interior points skipped because the window cuts their pruning ball.
    pub excluded_interior: usize,
    pub prune_radius: f64,
    /// Distinct local configurations actually solved.
    pub distinct_neighborhoods: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct NeighborGraph {
    /// Unordered pairs stored as `(min, max)`.
    pub pairs: BTreeSet<(Point, Point)>,
    pub diagnostics: NeighborDiagnostics,
}

impl NeighborGraph {
    pub fn neighbors_of(&self, p: &Point) -> Vec<Point> {
        let mut out: Vec<Point> =
            self.pairs.iter().filter_map(|&(a, b)| if a == *p { Some(b) } else if b == *p { Some(a) } else { None }).collect();
        out.sort_unstable();
        out
    }
}

/// Symmetric set of first-return vectors with one witness pair each
/// (`vector = to - from`).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FirstReturnSet {
    witnesses: BTreeMap<Point, (Point, Point)>,
}

impl FirstReturnSet {
    /// Builds a set from bare vectors, symmetrized; witnesses are `(0, v)`.
    pub fn from_vectors(vs: impl IntoIterator<Item = Point>) -> Result<Self> {
        let mut set = FirstReturnSet::default();
        for v in vs {
            if v.is_zero() {
                return Err(Error::Invalid("zero vector in first-return set".into()));
            }
            let o = Point::zero(v.dim());
            set.witnesses.entry(v).or_insert((o, v));
            set.witnesses.entry(-v).or_insert((v, o));
        }
        Ok(set)
    }

    fn insert_pair(&mut self, from: Point, to: Point) {
        let (a, b) = if from < to { (from, to) } else { (to, from) };
        self.witnesses.entry(b - a).or_insert((a, b));
        self.witnesses.entry(a - b).or_insert((b, a));
    }

    pub fn vectors(&self) -> impl Iterator<Item = &Point> + '_ {
        self.witnesses.keys()
    }

    pub fn to_vec(&self) -> Vec<Point> {
        self.witnesses.keys().copied().collect()
    }

    pub fn witness(&self, v: &Point) -> Option<(Point, Point)> {
        self.witnesses.get(v).copied()
    }

    pub fn contains(&self, v: &Point) -> bool {
        self.witnesses.contains_key(v)
    }

    pub fn len(&self) -> usize {
        self.witnesses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.witnesses.is_empty()
    }

    pub fn is_symmetric(&self) -> bool {
        self.witnesses.keys().all(|v| self.witnesses.contains_key(&-*v)) && !self.witnesses.keys().any(Point::is_zero)
    }

    pub fn max_norm(&self) -> f64 {
        self.witnesses.keys().map(Point::norm).fold(0.0, f64::max)
    }

    pub fn is_subset_of(&self, other: &FirstReturnSet) -> bool {
        self.witnesses.keys().all(|v| other.contains(v))
    }
}

/// Feasibility of the closed cell intersection of the origin and
/// `other`, given the surrounding sites as offsets from the origin.
fn cells_touch(dim: usize, other: &Point, sites: &[Point], prune_sq: i64) -> Result<bool> {
    let mut sys = LinearSystem::new(dim);
    let wide = |p: &Point| -> [i128; crate::point::MAX_DIM] {
        let mut n = [0i128; crate::point::MAX_DIM];
        for (i, slot) in n.iter_mut().enumerate().take(dim) {
            *slot = 2 * p.coord(i) as i128;
        }
        n
    };
    // bisector: 2 x'.y = |x'|^2
    sys.add_eq(&wide(other)[..dim], other.norm_sq() as i128);
    for z in sites {
        if z.is_zero() || z == other {
            continue;
        }
        if z.norm_sq() <= prune_sq || z.dist_sq(other) <= prune_sq {
            sys.add_le(&wide(z)[..dim], z.norm_sq() as i128);
        }
    }
    sys.is_feasible()
}

/// Visits every eligible point with the offsets of all its Voronoi
/// neighbours (eligible or not); returns diagnostics.
fn visit_neighborhoods(
    set: &PointSet,
    radii: &DeloneRadii,
    mut visit: impl FnMut(&Point, &[Point]),
) -> Result<NeighborDiagnostics> {
    let dim = set.dim();
    let cover = radii.covering_upper();
    let prune = 2.0 * cover;
    let prune_sq = radius_sq_bound(prune);
    let cand_sq = radius_sq_bound(2.0 * cover);
    let key_sq = radius_sq_bound(prune + 2.0 * cover);
    let window = *set.window();
    let eligible = |p: &Point| set.is_interior(p) && window.boundary_distance(p) as f64 >= prune;

    let index = SpatialIndex::new(set.points(), window, libm::ceil(cover).max(1.0) as i64);
    let mut cache: BTreeMap<Vec<Point>, Vec<Point>> = BTreeMap::new();
    let mut diag = NeighborDiagnostics { prune_radius: prune, ..Default::default() };
    let mut key = Vec::new();
    for x in set.points() {
        if !eligible(x) {
            if set.is_interior(x) {
                diag.excluded_interior += 1;
            }
            continue;
        }
        diag.eligible += 1;
        key.clear();
        index.for_each_within(x, key_sq, |z| key.push(*z - *x));
        key.sort_unstable();
        if !cache.contains_key(&key) {
            let mut found = Vec::new();
            for o in key.iter().filter(|o| !o.is_zero() && o.norm_sq() <= cand_sq) {
                if cells_touch(dim, o, &key, prune_sq)? {
                    found.push(*o);
                }
            }
            cache.insert(key.clone(), found);
        }
        visit(x, &cache[&key]);
    }
    diag.distinct_neighborhoods = cache.len();
    Ok(diag)
}

pub fn voronoi_neighbors(set: &PointSet) -> Result<NeighborGraph> {
    let radii = packing_covering_radii(set)?;
    voronoi_neighbors_with(set, &radii)
}

/// Neighbour pairs with both members eligible: interior for the set's
/// margin and far enough from the boundary for the pruning ball.
pub fn voronoi_neighbors_with(set: &PointSet, radii: &DeloneRadii) -> Result<NeighborGraph> {
    let prune = 2.0 * radii.covering_upper();
    let window = *set.window();
    let eligible = |p: &Point| set.is_interior(p) && window.boundary_distance(p) as f64 >= prune;
    let mut pairs = BTreeSet::new();
    let diagnostics = visit_neighborhoods(set, radii, |x, offsets| {
        for o in offsets {
            let y = *x + *o;
            if eligible(&y) {
                pairs.insert(if *x < y { (*x, y) } else { (y, *x) });
            }
        }
    })?;
    Ok(NeighborGraph { pairs, diagnostics })
}

pub fn first_return_vectors(set: &PointSet) -> Result<(FirstReturnSet, NeighborDiagnostics)> {
    let radii = packing_covering_radii(set)?;
    first_return_vectors_with(set, &radii)
}

/// Differences over neighbour pairs, without materializing the graph.
pub fn first_return_vectors_with(
    set: &PointSet,
    radii: &DeloneRadii,
) -> Result<(FirstReturnSet, NeighborDiagnostics)> {
    let prune = 2.0 * radii.covering_upper();
    let window = *set.window();
    let eligible = |p: &Point| set.is_interior(p) && window.boundary_distance(p) as f64 >= prune;
    let mut frs = FirstReturnSet::default();
    let diag = visit_neighborhoods(set, radii, |x, offsets| {
        for o in offsets {
            let y = *x + *o;
            if eligible(&y) {
                frs.insert_pair(*x, y);
            }
        }
    })?;
    Ok((frs, diag))
}
