use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::generators::ReturnSet;
use crate::geometry::SpatialIndex;
use crate::point::Point;

/// Rule for points equidistant from several owners.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum TieBreak {
    #[default]
    LexSmallest,
    /// Deliberately different rule, for fault injection in oracle tests.
    LexLargest,
}

/// Voronoi patches of the interior of `R_n` around the points of `R_{n+1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct Partition {
    patches: BTreeMap<Point, Vec<Point>>,
    /// `(point, owner)` sorted by point.
    owner: Vec<(Point, Point)>,
    complete: Vec<Point>,
    /// Interior margin used for `R_n`.
    pub margin: f64,
    /// Upper bound on the covering radius of the owners.
    pub owner_radius: f64,
    /// Owners whose patch may be cut by the window.
    pub clipped: usize,
}

impl Partition {
    pub fn owners(&self) -> impl Iterator<Item = &Point> + '_ {
        self.patches.keys()
    }

    pub fn patches(&self) -> impl Iterator<Item = (&Point, &Vec<Point>)> + '_ {
        self.patches.iter()
    }

    pub fn patch(&self, owner: &Point) -> Option<&[Point]> {
        self.patches.get(owner).map(Vec::as_slice)
    }

    pub fn owner_of(&self, p: &Point) -> Option<Point> {
        self.owner.binary_search_by(|(q, _)| q.cmp(p)).ok().map(|i| self.owner[i].1)
    }

    /// Points covered by the partition, in order.
    pub fn points(&self) -> impl Iterator<Item = &Point> + '_ {
        self.owner.iter().map(|(p, _)| p)
    }

    pub fn is_complete(&self, owner: &Point) -> bool {
        self.complete.binary_search(owner).is_ok()
    }

    /// Owners whose whole cell lies inside the sampled interior.
    pub fn complete_owners(&self) -> &[Point] {
        &self.complete
    }

    /// The patch of a complete owner; an error names the owner otherwise.
    pub fn complete_patch(&self, owner: &Point) -> Result<&[Point]> {
        if !self.is_complete(owner) {
            return Err(Error::WindowTooSmall(format!("patch of {owner} is not inside the window interior")));
        }
        self.patch(owner).ok_or_else(|| Error::Invariant(format!("complete owner {owner} has no patch")))
    }
}

pub fn voronoi_partition(fine: &ReturnSet, coarse: &ReturnSet) -> Result<Partition> {
    voronoi_partition_with(fine, coarse, TieBreak::LexSmallest)
}

/// Assigns every point of `fine` at distance `>= 2 R` from the window
/// boundary to its nearest point of `coarse`, `R` an upper bound on the
/// covering radius of `coarse`. Owners at distance `>= 3 R` from the
/// boundary have complete patches.
pub fn voronoi_partition_with(fine: &ReturnSet, coarse: &ReturnSet, tie: TieBreak) -> Result<Partition> {
    if fine.window() != coarse.window() {
        return Err(Error::Invalid(format!("windows {} and {} differ", fine.window(), coarse.window())));
    }
    let radius = coarse.require_radii()?.covering_upper();
    let margin = 2.0 * radius;
    let window = *fine.window();
    let index = SpatialIndex::new(coarse.points(), window, libm::ceil(radius).max(1.0) as i64);
    let reach_sq = libm::floor(radius * radius + 1e-9) as i64;
    let mut patches: BTreeMap<Point, Vec<Point>> = BTreeMap::new();
    let mut owner = Vec::new();
    for p in fine.points() {
        if (window.boundary_distance(p) as f64) < margin {
            continue;
        }
        let (_, ties) = index.nearest_within(p, reach_sq);
        let m = match tie {
            TieBreak::LexSmallest => ties.first(),
            TieBreak::LexLargest => ties.last(),
        }
        .copied()
        .ok_or_else(|| {
            Error::WindowTooSmall(format!(
                "no level-{} point within {:.3} of {p}; the covering radius estimate does not hold in {}",
                coarse.level(),
                radius,
                window
            ))
        })?;
        if !fine.contains(&m) {
            return Err(Error::Invariant(format!("owner {m} is not in the finer return set")));
        }
        patches.entry(m).or_default().push(*p);
        owner.push((*p, m));
    }
    let complete: Vec<Point> =
        patches.keys().copied().filter(|m| window.boundary_distance(m) as f64 >= 3.0 * radius).collect();
    let clipped = patches.len() - complete.len();
    Ok(Partition { patches, owner, complete, margin, owner_radius: radius, clipped })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{realize, GeneratorSpec, RealizeOptions};
    use alloc::vec;

    fn lattice(q: Vec<i64>, sets: usize) -> Vec<ReturnSet> {
        realize(&GeneratorSpec::lattice(q).unwrap(), &RealizeOptions::new(sets)).unwrap().sets
    }

    #[test]
    fn integers_over_even_integers() {
        let sets = lattice(vec![2], 3);
        let part = voronoi_partition(&sets[0], &sets[1]).unwrap();
        for m in part.complete_owners() {
            assert_eq!(part.patch(m).unwrap(), &[*m, *m + Point::from1(1)]);
        }
        assert!(!part.complete_owners().is_empty());
        let rev = voronoi_partition_with(&sets[0], &sets[1], TieBreak::LexLargest).unwrap();
        let m = Point::from1(0);
        assert_eq!(rev.patch(&m).unwrap(), &[Point::from1(-1), m]);
    }

    #[test]
    fn identical_sets_give_singletons() {
        let sets = lattice(vec![2], 3);
        let part = voronoi_partition(&sets[1], &sets[1]).unwrap();
        assert!(part.patches().all(|(m, p)| p == &vec![*m]));
    }

    #[test]
    fn square_lattice_patches() {
        let sets = lattice(vec![2, 2], 3);
        let part = voronoi_partition(&sets[0], &sets[1]).unwrap();
        let unit: Vec<Point> = vec![Point::from2(0, 0), Point::from2(0, 1), Point::from2(1, 0), Point::from2(1, 1)];
        for m in part.complete_owners() {
            let expect: Vec<Point> = unit.iter().map(|u| *u + *m).collect();
            assert_eq!(part.patch(m).unwrap(), &expect[..]);
        }
        // disjoint cover of the covered points, each owner in its own patch
        let total: usize = part.patches().map(|(_, p)| p.len()).sum();
        assert_eq!(total, part.points().count());
        for (m, p) in part.patches() {
            assert_eq!(p.iter().filter(|x| sets[1].contains(x)).collect::<Vec<_>>(), vec![m]);
        }
    }
}
