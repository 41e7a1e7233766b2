//! Brute-force recomputations of the hierarchy, diffed against the main
//! pipeline. Each check works near the origin, on probe points that see
//! their whole neighbourhood inside the window.
//!
//! - neighbours: nearest sites of every half-integer point around a probe,
//!   with ties compared in exact integer arithmetic;
//! - f_distance: plain breadth-first search on `Z^d`, no search ball;
//! - partition: nearest owner by direct scan, smallest owner on ties;
//! - address: every descending path below the origin, enumerated.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use rotfactor_core::generators::ReturnSet;
use rotfactor_core::geometry::{f_distance, voronoi_neighbors_with};
use rotfactor_core::hierarchy::{address, CombinatorialData};
use rotfactor_core::{Error as CoreError, Point};
use serde::Serialize;

use crate::error::Result;

#[derive(Clone, Debug, PartialEq)]
pub struct OracleOptions {
    /// Probe points per level for the neighbour, distance and partition
    /// checks.
    pub probes: usize,
    /// Addresses are checked for every `p` with `|p|_inf <= address_radius`.
    pub address_radius: i64,
    pub bfs_depth: u32,
}

impl OracleOptions {
    pub fn for_dim(d: usize) -> Self {
        let address_radius = match d {
            1 => 64,
            2 => 16,
            _ => 6,
        };
        OracleOptions { probes: 40, address_radius, bfs_depth: 64 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OracleRow {
    pub check: String,
    pub level: Option<usize>,
    pub items: usize,
    pub mismatches: usize,
    pub first_mismatch: Option<String>,
}

impl OracleRow {
    fn new(check: &str, level: Option<usize>) -> Self {
        OracleRow { check: check.to_string(), level, items: 0, mismatches: 0, first_mismatch: None }
    }

    fn record(&mut self, ok: bool, detail: impl FnOnce() -> String) {
        self.items += 1;
        if !ok {
            self.mismatches += 1;
            if self.first_mismatch.is_none() {
                self.first_mismatch = Some(detail());
            }
        }
    }

    pub fn pass(&self) -> bool {
        self.mismatches == 0
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OracleTable {
    pub pass: bool,
    pub rows: Vec<OracleRow>,
}

impl OracleTable {
    pub fn first_failure(&self) -> Option<&OracleRow> {
        self.rows.iter().find(|r| !r.pass())
    }

    pub fn mismatches(&self) -> usize {
        self.rows.iter().map(|r| r.mismatches).sum()
    }
}

/// Sorted sites with box queries through the first coordinate.
struct Sites<'a> {
    pts: &'a [Point],
}

impl<'a> Sites<'a> {
    fn in_box(&self, c: &Point, r: i64) -> impl Iterator<Item = &'a Point> + '_ {
        let c0 = c.coord(0);
        let lo = self.pts.partition_point(|p| p.coord(0) < c0 - r);
        let hi = self.pts.partition_point(|p| p.coord(0) <= c0 + r);
        let c = *c;
        self.pts[lo..hi].iter().filter(move |p| (1..c.dim()).all(|i| (p.coord(i) - c.coord(i)).abs() <= r))
    }
}

fn ceil_i(x: f64) -> i64 {
    x.ceil() as i64
}

/// Lattice points of the cube `c + [-r, r]^d`.
fn cube(c: &Point, r: i64) -> Vec<Point> {
    let d = c.dim();
    let mut out = Vec::new();
    let mut off = vec![-r; d];
    loop {
        let v: Vec<i64> = (0..d).map(|i| c.coord(i) + off[i]).collect();
        out.push(Point::new(&v).expect("dimension"));
        let mut axis = d;
        loop {
            if axis == 0 {
                return out;
            }
            axis -= 1;
            if off[axis] < r {
                off[axis] += 1;
                break;
            }
            off[axis] = -r;
        }
    }
}

/// Plain breadth-first search from the origin. Distances of the targets
/// found within `max_depth` steps.
pub fn bfs_distances(targets: &[Point], gens: &[Point], max_depth: u32) -> Vec<Option<u32>> {
    let mut out: Vec<Option<u32>> = vec![None; targets.len()];
    let Some(first) = targets.first() else { return out };
    let origin = Point::zero(first.dim());
    let mut pending: HashMap<Point, Vec<usize>> = HashMap::new();
    for (i, t) in targets.iter().enumerate() {
        pending.entry(*t).or_default().push(i);
    }
    let mut seen: HashSet<Point> = HashSet::from([origin]);
    let mut frontier = vec![origin];
    let mut depth = 0;
    loop {
        for p in &frontier {
            if let Some(idx) = pending.remove(p) {
                for i in idx {
                    out[i] = Some(depth);
                }
            }
        }
        if pending.is_empty() || depth == max_depth || frontier.is_empty() {
            return out;
        }
        let mut next = Vec::new();
        for p in &frontier {
            for g in gens {
                let q = *p + *g;
                if seen.insert(q) {
                    next.push(q);
                }
            }
        }
        frontier = next;
        depth += 1;
    }
}

pub fn bfs_distance(u: &Point, gens: &[Point], max_depth: u32) -> Option<u32> {
    bfs_distances(std::slice::from_ref(u), gens, max_depth)[0]
}

struct LevelView<'a> {
    fine: &'a ReturnSet,
    coarse: Sites<'a>,
    /// Covering bound of the owners.
    radius: f64,
    owners: HashMap<Point, Option<Point>>,
}

impl<'a> LevelView<'a> {
    fn new(fine: &'a ReturnSet, coarse: &'a ReturnSet) -> Result<Self> {
        let radius = coarse.require_radii()?.covering_upper();
        Ok(LevelView { fine, coarse: Sites { pts: coarse.points() }, radius, owners: HashMap::new() })
    }

    fn in_domain(&self, p: &Point) -> bool {
        self.fine.window().boundary_distance(p) as f64 >= 2.0 * self.radius
    }

    fn complete(&self, m: &Point) -> bool {
        self.fine.window().boundary_distance(m) as f64 >= 3.0 * self.radius
    }

    /// Nearest owner, smallest on ties; `None` when no owner lies within
    /// the covering bound.
    fn owner(&mut self, p: &Point) -> Option<Point> {
        if let Some(o) = self.owners.get(p) {
            return *o;
        }
        let mut best: Option<(i64, Point)> = None;
        for m in self.coarse.in_box(p, ceil_i(self.radius)) {
            let d = m.dist_sq(p);
            if best.is_none_or(|(b, _)| d < b) {
                best = Some((d, *m));
            }
        }
        let owner = best.filter(|(d, _)| *d as f64 <= self.radius * self.radius + 1e-9).map(|(_, m)| m);
        self.owners.insert(*p, owner);
        owner
    }

    /// `P(m)` by direct membership: the points of the domain whose nearest
    /// owner is `m`.
    fn patch(&mut self, m: &Point) -> Vec<Point> {
        let fine = Sites { pts: self.fine.points() };
        let r2 = self.radius * self.radius + 1e-9;
        let cands: Vec<Point> =
            fine.in_box(m, ceil_i(self.radius)).filter(|p| p.dist_sq(m) as f64 <= r2).copied().collect();
        cands.into_iter().filter(|p| self.in_domain(p) && self.owner(p) == Some(*m)).collect()
    }
}

/// Probe points: eligible points closest to the origin.
fn probes<'a>(pts: impl Iterator<Item = &'a Point>, count: usize) -> Vec<Point> {
    let mut v: Vec<Point> = pts.copied().collect();
    v.sort_by_key(|p| (p.norm_sq(), *p));
    v.truncate(count);
    v
}

fn check_neighbors(data: &CombinatorialData, n: usize, opts: &OracleOptions) -> Result<(OracleRow, OracleRow)> {
    let level = data.level(n)?;
    let set = level.returns.base();
    let radii = level.returns.require_radii()?;
    let r_up = radii.covering_upper();
    let window = *set.window();
    let eligible = |p: &Point| set.is_interior(p) && window.boundary_distance(p) as f64 >= 2.0 * r_up;
    let graph = voronoi_neighbors_with(set, radii)?;
    let sites = Sites { pts: set.points() };
    let mut row = OracleRow::new("neighbors", Some(n));
    let mut fret = OracleRow::new("first_returns", Some(n));
    // doubled coordinates: half-integer points become integers
    let reach2 = 2.0 * r_up;
    let reach2_sq = reach2 * reach2 + 1e-9;
    let probe_pts = probes(set.points().iter().filter(|p| eligible(p)), opts.probes);
    let mut adjacency: BTreeMap<Point, Vec<Point>> = probe_pts.iter().map(|p| (*p, Vec::new())).collect();
    for (a, b) in &graph.pairs {
        if let Some(v) = adjacency.get_mut(a) {
            v.push(*b);
        }
        if let Some(v) = adjacency.get_mut(b) {
            v.push(*a);
        }
    }
    for x in probe_pts {
        let local: Vec<Point> = sites.in_box(&x, ceil_i(2.0 * r_up) + 1).copied().collect();
        let x2 = x + x;
        let mut found: BTreeSet<Point> = BTreeSet::new();
        let mut uncovered = None;
        for y in cube(&x2, ceil_i(reach2)) {
            if y.dist_sq(&x2) as f64 > reach2_sq {
                continue;
            }
            let mut best = i64::MAX;
            let mut ties: Vec<Point> = Vec::new();
            for s in &local {
                let d = y.dist_sq(&(*s + *s));
                if d < best {
                    best = d;
                    ties.clear();
                    ties.push(*s);
                } else if d == best {
                    ties.push(*s);
                }
            }
            if best as f64 > reach2_sq {
                uncovered.get_or_insert(y);
            }
            if ties.contains(&x) {
                found.extend(ties.into_iter().filter(|s| *s != x));
            }
        }
        let want: Vec<Point> = found.into_iter().filter(|p| eligible(p)).collect();
        let mut got = adjacency.remove(&x).unwrap_or_default();
        got.sort_unstable();
        row.record(want == got && uncovered.is_none(), || match uncovered {
            Some(y) => format!("half-grid point {y}/2 near {x} is farther than {r_up:.3} from every point"),
            None => format!("neighbours of {x}: oracle {want:?}, pipeline {got:?}"),
        });
        for o in &want {
            let v = *o - x;
            fret.record(level.first_returns.contains(&v), || format!("{v} from {x} missing in F_{n}"));
        }
    }
    Ok((row, fret))
}

fn check_distances(data: &CombinatorialData, n: usize, opts: &OracleOptions) -> Result<OracleRow> {
    let level = data.level(n)?;
    let f = &level.first_returns;
    let gens = f.to_vec();
    let mut row = OracleRow::new("f_distance", Some(n));
    let part = &level.partition;
    for m in probes(part.complete_owners().iter(), opts.probes) {
        let patch = part.complete_patch(&m)?;
        let diffs: BTreeSet<Point> = patch.iter().flat_map(|a| patch.iter().map(move |b| *b - *a)).collect();
        let diffs: Vec<Point> = diffs.into_iter().collect();
        let want = bfs_distances(&diffs, &gens, opts.bfs_depth);
        for (u, w) in diffs.iter().zip(&want) {
            let got = f_distance(u, f, None).ok();
            row.record(got == *w, || format!("|{u}|_F at level {n}: oracle {w:?}, pipeline {got:?}"));
        }
        if let Some(k) = level.k {
            let diam = want.iter().flatten().max().copied().unwrap_or(0);
            row.record(diam <= k, || format!("patch of {m} has F-diameter {diam} > k({n}) = {k}"));
        }
    }
    Ok(row)
}

fn check_partition(view: &mut LevelView, data: &CombinatorialData, n: usize, opts: &OracleOptions) -> Result<OracleRow> {
    let part = &data.level(n)?.partition;
    let mut row = OracleRow::new("partition", Some(n));
    for p in probes(part.points(), 4 * opts.probes) {
        let want = view.owner(&p);
        let got = part.owner_of(&p);
        row.record(want == got, || format!("owner of {p} at level {n}: oracle {want:?}, pipeline {got:?}"));
    }
    Ok(row)
}

/// Outcome of enumerating every path below the origin.
#[derive(Clone, Debug, PartialEq)]
enum Enumerated {
    Found { m0: usize, path: Vec<Point>, paths: usize },
    NotFound,
}

/// Leaves of all descending paths from the origin at level `m` down to
/// `n0`, each with its number of paths and the first path found. `None`
/// when some patch on the way is cut by the window.
fn enumerate(views: &mut [LevelView], n0: usize, m: usize) -> Option<BTreeMap<Point, (usize, Vec<Point>)>> {
    fn walk(
        views: &mut [LevelView],
        n0: usize,
        j: usize,
        path: &mut Vec<Point>,
        leaves: &mut BTreeMap<Point, (usize, Vec<Point>)>,
    ) -> bool {
        let here = *path.last().expect("nonempty");
        if j == n0 {
            let e = leaves.entry(here).or_insert_with(|| (0, path.clone()));
            e.0 += 1;
            return true;
        }
        let view = &mut views[j - 1];
        if !view.complete(&here) {
            return false;
        }
        for c in view.patch(&here) {
            path.push(c);
            let ok = walk(views, n0, j - 1, path, leaves);
            path.pop();
            if !ok {
                return false;
            }
        }
        true
    }
    let d = views[0].fine.window().dim();
    let mut leaves = BTreeMap::new();
    let mut path = vec![Point::zero(d)];
    walk(views, n0, m, &mut path, &mut leaves).then_some(leaves)
}

fn check_addresses(views: &mut [LevelView], data: &CombinatorialData, opts: &OracleOptions) -> Result<Vec<OracleRow>> {
    let mut rows = Vec::new();
    for n0 in 0..data.len() {
        let mut row = OracleRow::new("address", Some(n0));
        let targets: Vec<Point> = data
            .returns(n0)?
            .points()
            .iter()
            .filter(|p| (0..p.dim()).all(|i| p.coord(i).abs() <= opts.address_radius))
            .copied()
            .collect();
        let mut results: BTreeMap<Point, Enumerated> = targets.iter().map(|p| (*p, Enumerated::NotFound)).collect();
        for m in n0..=data.len() {
            let Some(leaves) = enumerate(views, n0, m) else { break };
            for (p, slot) in results.iter_mut() {
                if let (Enumerated::NotFound, Some((paths, path))) = (&slot, leaves.get(p)) {
                    *slot = Enumerated::Found { m0: m, path: path.clone(), paths: *paths };
                }
            }
        }
        for (p, want) in &results {
            let got = address(data, p, n0);
            let ok = match (want, &got) {
                (Enumerated::Found { m0, path, paths }, Ok(a)) => *paths == 1 && a.m0 == *m0 && a.path == *path,
                (Enumerated::NotFound, Err(CoreError::Unreachable(_) | CoreError::WindowTooSmall(_))) => true,
                _ => false,
            };
            row.record(ok, || format!("address of {p} from level {n0}: oracle {want:?}, pipeline {got:?}"));
        }
        rows.push(row);
    }
    Ok(rows)
}

/// Runs every check on `data` and collects one row per check and level.
pub fn oracle_check_data(data: &CombinatorialData, opts: &OracleOptions) -> Result<OracleTable> {
    let mut rows = Vec::new();
    let mut views = Vec::new();
    for n in 0..data.len() {
        views.push(LevelView::new(data.returns(n)?, data.returns(n + 1)?)?);
    }
    for n in 0..data.len() {
        let (nb, fr) = check_neighbors(data, n, opts)?;
        rows.push(nb);
        rows.push(fr);
        rows.push(check_distances(data, n, opts)?);
        rows.push(check_partition(&mut views[n], data, n, opts)?);
    }
    rows.extend(check_addresses(&mut views, data, opts)?);
    let pass = rows.iter().all(OracleRow::pass);
    Ok(OracleTable { pass, rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rotfactor_core::generators::{realize, GeneratorSpec, RealizeOptions};
    use rotfactor_core::hierarchy::{build_data, HierarchyOptions, TieBreak};

    fn lattice(q: Vec<i64>, levels: usize, tie: TieBreak) -> CombinatorialData {
        let sets = realize(&GeneratorSpec::lattice(q).unwrap(), &RealizeOptions::new(levels + 3)).unwrap().sets;
        build_data(&sets, HierarchyOptions { tie, strict_iv: false }).unwrap()
    }

    #[test]
    fn bfs_on_the_line_and_plane() {
        let gens = [Point::from1(2), Point::from1(-2), Point::from1(3), Point::from1(-3)];
        assert_eq!(bfs_distance(&Point::from1(1), &gens, 10), Some(2));
        assert_eq!(bfs_distance(&Point::from1(0), &gens, 10), Some(0));
        let even = [Point::from1(2), Point::from1(-2)];
        assert_eq!(bfs_distance(&Point::from1(1), &even, 10), None);
        let king: Vec<Point> = cube(&Point::from2(0, 0), 1).into_iter().filter(|p| !p.is_zero()).collect();
        assert_eq!(bfs_distance(&Point::from2(3, -2), &king, 10), Some(3));
    }

    #[test]
    fn lattice_passes() {
        let data = lattice(vec![2], 4, TieBreak::LexSmallest);
        let table = oracle_check_data(&data, &OracleOptions::for_dim(1)).unwrap();
        assert!(table.pass, "{:?}", table.first_failure());
        let addr: usize = table.rows.iter().filter(|r| r.check == "address").map(|r| r.items).sum();
        assert!(addr > 100);
    }

    #[test]
    fn corrupted_tie_break_is_caught() {
        let data = lattice(vec![2], 4, TieBreak::LexLargest);
        let table = oracle_check_data(&data, &OracleOptions::for_dim(1)).unwrap();
        assert!(!table.pass);
        assert!(table.rows.iter().any(|r| r.check == "address" && r.mismatches > 0));
    }
}
