use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::vec::Vec;

use super::partition::{voronoi_partition_with, Partition, TieBreak};
use crate::error::{Error, Result};
use crate::generators::ReturnSet;
use crate::geometry::{f_diameter, first_return_vectors_with, FirstReturnSet, NeighborDiagnostics};
use crate::point::Point;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct HierarchyOptions {
    pub tie: TieBreak,
    /// Check translation-identity of patches over all owners in `R_{n+1}`
    /// instead of those in `R_{n+2}`.
    pub strict_iv: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Level {
    pub n: usize,
    pub returns: ReturnSet,
    pub first_returns: FirstReturnSet,
    pub neighbor_diagnostics: NeighborDiagnostics,
    /// Patches around the points of `R_{n+1}`.
    pub partition: Partition,
    /// Largest F-diameter of a complete patch; `None` without complete patches.
    pub k: Option<u32>,
}

impl Level {
    /// Index of `R_n` in the schedule it was scanned from.
    pub fn source(&self) -> usize {
        self.returns.level()
    }
}

/// Levels `0..=N` with their partitions, plus the return sets `R_{N+1}` and
/// `R_{N+2}` that the last levels refer to.
#[derive(Clone, Debug, PartialEq)]
pub struct CombinatorialData {
    levels: Vec<Level>,
    lookahead: Vec<ReturnSet>,
    options: HierarchyOptions,
}

impl CombinatorialData {
    pub fn levels(&self) -> &[Level] {
        &self.levels
    }

    pub fn level(&self, n: usize) -> Result<&Level> {
        self.levels.get(n).ok_or(Error::TooFewLevels { needed: n + 1, have: self.levels.len() })
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.levels[0].returns.window().dim()
    }

    pub fn options(&self) -> HierarchyOptions {
        self.options
    }

    /// The point `x` all return sets are taken relative to.
    pub fn base_point(&self) -> Point {
        Point::zero(self.dim())
    }

    /// `R_j` for `j <= N + 2`.
    pub fn returns(&self, j: usize) -> Result<&ReturnSet> {
        let n = self.levels.len();
        if j < n {
            Ok(&self.levels[j].returns)
        } else {
            self.lookahead.get(j - n).ok_or(Error::TooFewLevels { needed: j + 1, have: n + self.lookahead.len() })
        }
    }

    /// All return sets, levels first.
    pub fn sets(&self) -> Vec<&ReturnSet> {
        self.levels.iter().map(|l| &l.returns).chain(&self.lookahead).collect()
    }

    pub fn k_sequence(&self) -> Vec<Option<u32>> {
        self.levels.iter().map(|l| l.k).collect()
    }
}

/// Memoized first returns and partitions over a fixed list of return sets.
struct Builder<'a> {
    sets: &'a [ReturnSet],
    tie: TieBreak,
    first: BTreeMap<usize, (FirstReturnSet, NeighborDiagnostics)>,
    parts: BTreeMap<(usize, usize), Partition>,
}

impl<'a> Builder<'a> {
    fn new(sets: &'a [ReturnSet], tie: TieBreak) -> Self {
        Builder { sets, tie, first: BTreeMap::new(), parts: BTreeMap::new() }
    }

    fn first_returns(&mut self, i: usize) -> Result<&(FirstReturnSet, NeighborDiagnostics)> {
        if !self.first.contains_key(&i) {
            let set = &self.sets[i];
            let fr = first_return_vectors_with(set.base(), set.require_radii()?)?;
            if fr.0.is_empty() {
                return Err(Error::WindowTooSmall(format!(
                    "no neighbour pair of level {} lies inside {}",
                    set.level(),
                    set.window()
                )));
            }
            self.first.insert(i, fr);
        }
        Ok(&self.first[&i])
    }

    fn partition(&mut self, i: usize, j: usize) -> Result<&Partition> {
        if !self.parts.contains_key(&(i, j)) {
            let p = voronoi_partition_with(&self.sets[i], &self.sets[j], self.tie)?;
            self.parts.insert((i, j), p);
        }
        Ok(&self.parts[&(i, j)])
    }

    fn level(&mut self, n: usize, i: usize, j: usize) -> Result<Level> {
        let (first_returns, neighbor_diagnostics) = self.first_returns(i)?.clone();
        let partition = self.partition(i, j)?.clone();
        let k = k_constant(&partition, &first_returns)?;
        Ok(Level { n, returns: self.sets[i].clone(), first_returns, neighbor_diagnostics, partition, k })
    }

    /// Data on the selected set indices; the last two become lookahead.
    fn data(&mut self, selected: &[usize], options: HierarchyOptions) -> Result<CombinatorialData> {
        if selected.len() < 3 {
            return Err(Error::TooFewLevels { needed: 3, have: selected.len() });
        }
        let split = selected.len() - 2;
        let levels = (0..split).map(|n| self.level(n, selected[n], selected[n + 1])).collect::<Result<Vec<_>>>()?;
        let lookahead = selected[split..].iter().map(|&i| self.sets[i].clone()).collect();
        Ok(CombinatorialData { levels, lookahead, options })
    }
}

/// Builds levels `0..=sets.len()-3` from nested return sets.
pub fn build_data(sets: &[ReturnSet], options: HierarchyOptions) -> Result<CombinatorialData> {
    for w in sets.windows(2) {
        if !w[1].base().is_subset_of(w[0].base()) {
            return Err(Error::Invariant(format!("return sets {} and {} are not nested", w[0].level(), w[1].level())));
        }
    }
    let all: Vec<usize> = (0..sets.len()).collect();
    Builder::new(sets, options.tie).data(&all, options)
}

/// Largest F-diameter over complete patches, patches compared up to
/// translation.
pub fn k_constant(partition: &Partition, f: &FirstReturnSet) -> Result<Option<u32>> {
    let mut seen: BTreeMap<Vec<Point>, u32> = BTreeMap::new();
    let mut best = None;
    for m in partition.complete_owners() {
        let patch = partition.patch(m).expect("complete owner has a patch");
        let key: Vec<Point> = patch.iter().map(|p| *p - *m).collect();
        let k = match seen.get(&key) {
            Some(&k) => k,
            None => {
                let k = f_diameter(&key, f)?;
                seen.insert(key, k);
                k
            }
        };
        best = Some(best.map_or(k, |b: u32| b.max(k)));
    }
    Ok(best)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WellDistributedLevel {
    pub n: usize,
    /// Every first-return vector is a difference of two points of every
    /// complete patch.
    pub iii: bool,
    pub iii_checked: usize,
    pub iii_violations: Vec<Point>,
    /// The complete patches of the selected owners are translates of one
    /// another.
    pub iv: bool,
    pub iv_checked: usize,
    pub iv_violations: Vec<Point>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WellDistributedReport {
    pub strict: bool,
    pub levels: Vec<WellDistributedLevel>,
}

impl WellDistributedReport {
    pub fn all_pass(&self) -> bool {
        self.levels.iter().all(|l| l.iii && l.iv)
    }
}

fn check_iii(part: &Partition, f: &FirstReturnSet) -> (usize, Vec<Point>) {
    let mut verdicts: BTreeMap<Vec<Point>, bool> = BTreeMap::new();
    let mut bad = Vec::new();
    for m in part.complete_owners() {
        let key: Vec<Point> = part.patch(m).expect("patch").iter().map(|p| *p - *m).collect();
        let ok = *verdicts.entry(key).or_insert_with_key(|key| {
            let diffs: BTreeSet<Point> = key.iter().flat_map(|a| key.iter().map(move |b| *a - *b)).collect();
            f.vectors().all(|v| diffs.contains(v))
        });
        if !ok {
            bad.push(*m);
        }
    }
    (part.complete_owners().len(), bad)
}

fn check_iv(part: &Partition, owners: &ReturnSet) -> (usize, Vec<Point>) {
    let selected: Vec<&Point> = part.complete_owners().iter().filter(|m| owners.contains(m)).collect();
    let translated = |m: &Point| -> Vec<Point> { part.patch(m).expect("patch").iter().map(|p| *p - *m).collect() };
    let model = match selected.iter().find(|m| m.is_zero()).or(selected.first()) {
        Some(m) => translated(m),
        None => return (0, Vec::new()),
    };
    let bad = selected.iter().filter(|m| translated(m) != model).map(|m| **m).collect();
    (selected.len(), bad)
}

/// Conditions (iii) and (iv) at every level, over complete patches only.
pub fn check_well_distributed(data: &CombinatorialData) -> Result<WellDistributedReport> {
    let strict = data.options.strict_iv;
    let mut levels = Vec::new();
    for (n, level) in data.levels.iter().enumerate() {
        let (iii_checked, iii_violations) = check_iii(&level.partition, &level.first_returns);
        let owners = data.returns(if strict { n + 1 } else { n + 2 })?;
        let (iv_checked, iv_violations) = check_iv(&level.partition, owners);
        levels.push(WellDistributedLevel {
            n,
            iii: iii_violations.is_empty(),
            iii_checked,
            iii_violations,
            iv: iv_violations.is_empty(),
            iv_checked,
            iv_violations,
        });
    }
    Ok(WellDistributedReport { strict, levels })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThinningReport {
    /// Positions of the kept return sets in the input sequence.
    pub kept: Vec<usize>,
    pub dropped: Vec<usize>,
    pub well_distributed: bool,
}

/// Greedily drops return sets until consecutive levels satisfy (iii) and
/// (iv). Without a well-distributed subsequence of at least three sets the
/// input is returned unchanged and the report says so.
pub fn thin_to_well_distributed(data: &CombinatorialData) -> Result<(CombinatorialData, ThinningReport)> {
    let sets: Vec<ReturnSet> = data.sets().into_iter().cloned().collect();
    if check_well_distributed(data)?.all_pass() {
        let report = ThinningReport { kept: (0..sets.len()).collect(), dropped: Vec::new(), well_distributed: true };
        return Ok((data.clone(), report));
    }
    let strict = data.options.strict_iv;
    let mut b = Builder::new(&sets, data.options.tie);
    let mut sel = alloc::vec![0usize];
    for j in 1..sets.len() {
        let i = *sel.last().expect("nonempty");
        let iii = match (b.first_returns(i).map(|f| f.0.clone()), b.partition(i, j)) {
            (Ok(f), Ok(part)) => check_iii(part, &f).1.is_empty(),
            (Err(Error::WindowTooSmall(_)), _) | (_, Err(Error::WindowTooSmall(_))) => false,
            (Err(e), _) | (_, Err(e)) => return Err(e),
        };
        let iv = if sel.len() >= 2 {
            let h = sel[sel.len() - 2];
            let owners = if strict { &sets[i] } else { &sets[j] };
            check_iv(b.partition(h, i)?, owners).1.is_empty()
        } else {
            true
        };
        if iii && iv {
            sel.push(j);
        }
    }
    let kept = sel.clone();
    let dropped = (0..sets.len()).filter(|i| !sel.contains(i)).collect();
    if sel.len() < 3 {
        return Ok((data.clone(), ThinningReport { kept, dropped, well_distributed: false }));
    }
    let thinned = b.data(&sel, data.options)?;
    let ok = check_well_distributed(&thinned)?.all_pass();
    Ok((thinned, ThinningReport { kept, dropped, well_distributed: ok }))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearRecurrenceReport {
    pub k: Vec<Option<u32>>,
    /// `max k(n)`, the estimate of the uniform bound.
    pub bound: Option<u32>,
    /// `k(n)` is defined and constant over the last half of the levels.
    pub flagged: bool,
}

pub fn linear_recurrence_report(data: &CombinatorialData) -> Result<LinearRecurrenceReport> {
    linear_recurrence_from(&data.k_sequence())
}

pub fn linear_recurrence_from(k: &[Option<u32>]) -> Result<LinearRecurrenceReport> {
    if k.len() < 2 {
        return Err(Error::TooFewLevels { needed: 2, have: k.len() });
    }
    let tail = &k[k.len() / 2..];
    let flagged = tail.iter().all(|v| v.is_some() && *v == tail[0]);
    let bound = k.iter().flatten().copied().max();
    Ok(LinearRecurrenceReport { k: k.to_vec(), bound, flagged })
}
