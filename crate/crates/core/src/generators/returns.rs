use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec::Vec;

use super::configuration::Configuration;
use crate::error::{Error, Result};
use crate::geometry::{covering_estimate, packing_covering_radii, DeloneRadii, PointSet};
use crate::point::{Point, Window};
use crate::scalar::Rational;

/// Return times of the base configuration to the cylinder of its pattern
/// on `cylinder`, sampled inside a window.
#[derive(Clone, Debug, PartialEq)]
pub struct ReturnSet {
    base: PointSet,
    cylinder: Window,
    level: usize,
    radii: Option<DeloneRadii>,
    reliable: bool,
}

impl ReturnSet {
    /// Packages occurrences as a Delone sample with the default interior
    /// margin. Samples whose covering estimate fails or does not settle are
    /// kept but marked unreliable.
    pub fn new(points: Vec<Point>, window: Window, cylinder: Window, level: usize) -> Result<Self> {
        let zero = Point::zero(window.dim());
        let mut base = PointSet::new(points, window, 0.0)?;
        if !base.contains(&zero) {
            return Err(Error::Invariant(format!("level {level} return set misses the origin")));
        }
        let (radii, reliable) = match covering_estimate(&base) {
            Ok(est) => {
                base = base.with_margin(2.0 * est.radius());
                match packing_covering_radii(&base) {
                    Ok(r) => (Some(r), est.converged),
                    Err(Error::WindowTooSmall(_)) => (None, false),
                    Err(e) => return Err(e),
                }
            }
            Err(Error::WindowTooSmall(_)) => (None, false),
            Err(e) => return Err(e),
        };
        Ok(ReturnSet { base, cylinder, level, radii, reliable })
    }

    pub fn base(&self) -> &PointSet {
        &self.base
    }

    pub fn points(&self) -> &[Point] {
        self.base.points()
    }

    pub fn window(&self) -> &Window {
        self.base.window()
    }

    pub fn cylinder_window(&self) -> &Window {
        &self.cylinder
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn radii(&self) -> Option<&DeloneRadii> {
        self.radii.as_ref()
    }

    /// Radii, or a window diagnostic when the sample is too small for them.
    pub fn require_radii(&self) -> Result<&DeloneRadii> {
        self.radii.as_ref().ok_or_else(|| {
            Error::WindowTooSmall(format!(
                "level {} return set ({} points in {}) is too sparse for its covering radius",
                self.level,
                self.base.len(),
                self.base.window()
            ))
        })
    }

    pub fn is_reliable(&self) -> bool {
        self.reliable
    }

    pub fn contains(&self, p: &Point) -> bool {
        self.base.contains(p)
    }
}

/// Translations `p` with `p + cylinder` inside `support`.
pub fn occurrence_window(support: &Window, cylinder: &Window) -> Option<Window> {
    if support.dim() != cylinder.dim() {
        return None;
    }
    Window::new(support.lo() - cylinder.lo(), support.hi() - cylinder.hi()).ok()
}

fn scan(config: &Configuration, cylinder: &Window, within: &Window) -> Vec<Point> {
    config.occurrences(cylinder, within)
}

fn check_fits(config: &Configuration, cylinder: &Window) -> Result<Window> {
    cylinder.lo().check_dim(config.dim())?;
    occurrence_window(&config.window(), cylinder)
        .filter(|w| w.contains(&Point::zero(config.dim())))
        .ok_or_else(|| Error::WindowTooSmall(format!("cylinder {} does not fit in configuration {}", cylinder, config.window())))
}

/// All `p` in the configuration with `config[p + B] = config[B]`.
pub fn return_set(config: &Configuration, level: usize, cylinder: &Window) -> Result<ReturnSet> {
    let w = check_fits(config, cylinder)?;
    ReturnSet::new(scan(config, cylinder, &w), w, *cylinder, level)
}

/// Return sets of a strictly increasing cylinder sequence, all sampled in
/// the occurrence window of the largest cylinder.
pub fn nested_return_sets(config: &Configuration, cylinders: &[Window]) -> Result<Vec<ReturnSet>> {
    let last = cylinders.last().ok_or_else(|| Error::Invalid("empty cylinder schedule".into()))?;
    for pair in cylinders.windows(2) {
        if !pair[1].contains_window(&pair[0]) || pair[0] == pair[1] {
            return Err(Error::Invalid(format!("cylinder {} does not strictly contain {}", pair[1], pair[0])));
        }
    }
    let common = check_fits(config, last)?;
    let mut sets: Vec<ReturnSet> = Vec::with_capacity(cylinders.len());
    for (n, b) in cylinders.iter().enumerate() {
        let set = ReturnSet::new(scan(config, b, &common), common, *b, n)?;
        if let Some(prev) = sets.last() {
            if !set.base().is_subset_of(prev.base()) {
                return Err(Error::Invariant(format!("return set {} is not contained in return set {}", n, n - 1)));
            }
        }
        sets.push(set);
    }
    Ok(sets)
}

/// Evidence that a return set is relatively dense with a window-independent
/// radius: the covering estimate on the full window and on the central
/// half-size window.
#[derive(Clone, Debug, PartialEq)]
pub struct RepetitivityEvidence {
    pub level: usize,
    pub full_sq: Rational,
    pub half_sq: Option<Rational>,
    pub stable: bool,
}

pub fn repetitivity_evidence(set: &ReturnSet) -> Result<RepetitivityEvidence> {
    let full = covering_estimate(set.base())?.radius_sq();
    let w = set.window();
    let d = w.dim();
    let lo: Vec<i64> = (0..d).map(|i| w.lo().coord(i) + w.side(i) as i64 / 4).collect();
    let hi: Vec<i64> = (0..d).map(|i| w.hi().coord(i) - w.side(i) as i64 / 4).collect();
    let half = Window::new(Point::new(&lo)?, Point::new(&hi)?)
        .ok()
        .and_then(|hw| set.base().restrict(&hw).ok())
        .and_then(|s| covering_estimate(&s).ok())
        .map(|e| e.radius_sq());
    Ok(RepetitivityEvidence { level: set.level(), stable: half == Some(full), full_sq: full, half_sq: half })
}

/// Local patches of the finer set inside occurrences of the coarser
/// cylinder, compared up to translation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PatchAgreement {
    pub compared: usize,
    pub distinct: usize,
}

impl PatchAgreement {
    pub fn agree(&self) -> bool {
        self.distinct <= 1
    }
}

pub fn occurrence_patches(fine: &ReturnSet, coarse: &ReturnSet) -> Result<PatchAgreement> {
    let (bf, bc) = (fine.cylinder_window(), coarse.cylinder_window());
    let inner = Window::new(bc.lo() - bf.lo(), bc.hi() - bf.hi())
        .map_err(|_| Error::Invalid(format!("cylinder {bc} does not contain {bf}")))?;
    let mut patches: BTreeSet<Vec<Point>> = BTreeSet::new();
    let mut compared = 0;
    for m in coarse.points() {
        let region = inner.translate(*m);
        if !fine.window().contains_window(&region) {
            continue;
        }
        compared += 1;
        patches.insert(fine.points().iter().filter(|p| region.contains(p)).map(|p| *p - *m).collect());
    }
    Ok(PatchAgreement { compared, distinct: patches.len() })
}

#[cfg(test)]
mod tests {
    use super::super::substitution::BlockSubstitution;
    use super::*;
    use alloc::string::ToString;
    use alloc::vec;

    fn pd() -> BlockSubstitution {
        BlockSubstitution::new(vec!["a".to_string(), "b".to_string()], vec![2], vec![vec![0, 1], vec![0, 0]]).unwrap()
    }

    fn coords(s: &ReturnSet) -> Vec<i64> {
        s.points().iter().map(|p| p.coord(0)).collect()
    }

    #[test]
    fn letter_returns_in_abaaabab() {
        let c = pd().expand_fixed(0, 3).unwrap();
        let b = Window::new(Point::from1(0), Point::from1(0)).unwrap();
        let r = return_set(&c, 0, &b).unwrap();
        assert_eq!(coords(&r), vec![0, 2, 3, 4, 6]);
        let whole = c.window();
        assert_eq!(coords(&return_set(&c, 0, &whole).unwrap()), vec![0]);
    }

    #[test]
    fn nested_period_doubling() {
        let sub = pd();
        let c = sub.expand_fixed(0, 8).unwrap();
        let cyl: Vec<Window> = (0..4).map(|n| sub.supertile_window(n).unwrap()).collect();
        let sets = nested_return_sets(&c, &cyl).unwrap();
        // oracle: direct comparison of words
        let w: Vec<u32> = c.cells().to_vec();
        let common = 256 - 8;
        for (n, s) in sets.iter().enumerate() {
            let len = 1usize << n;
            let expect: Vec<i64> = (0..=common).filter(|&p| w[p..p + len] == w[..len]).map(|p| p as i64).collect();
            assert_eq!(coords(s), expect);
            assert!(s.contains(&Point::from1(0)));
        }
        for pair in sets.windows(2) {
            assert!(pair[1].base().is_subset_of(pair[0].base()));
            assert!(occurrence_patches(&pair[0], &pair[1]).unwrap().agree());
        }
        assert!(repetitivity_evidence(&sets[1]).unwrap().stable);
    }

    #[test]
    fn cylinder_must_fit() {
        let c = pd().expand_fixed(0, 2).unwrap();
        let b = Window::new(Point::from1(0), Point::from1(7)).unwrap();
        assert!(matches!(return_set(&c, 0, &b), Err(Error::WindowTooSmall(_))));
    }
}
