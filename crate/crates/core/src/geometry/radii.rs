//! Packing and covering radii of a finite Delone sample.

use alloc::format;

use super::distance_transform::{HalfGridField, INF};
use super::pointset::{isqrt_ceil, radius_sq_bound, PointSet, SpatialIndex};
use crate::error::{Error, Result};
use crate::point::Point;
use crate::scalar::{rat, Rational};

const MAX_FIXPOINT_ROUNDS: usize = 32;

/// Covering radius measured on the half-integer grid of an eroded window.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CoveringEstimate {
    /// Squared radius in quarter units (`R^2 = quarter_sq / 4`).
    quarter_sq: i64,
    /// Erosion applied in half units.
    pub erosion_half: i64,
    pub converged: bool,
    dim: usize,
}

impl CoveringEstimate {
    pub fn radius_sq(&self) -> Rational {
        rat(self.quarter_sq as i128, 4)
    }

    pub fn radius(&self) -> f64 {
        libm::sqrt(self.quarter_sq as f64) / 2.0
    }

    /// Upper bound on the true covering radius inside the eroded window:
    /// every real point lies within `sqrt(d)/4` of a half-grid point.
    pub fn upper(&self) -> f64 {
        self.radius() + libm::sqrt(self.dim as f64) / 4.0
    }
}

/// Fixpoint of: take the max distance-to-set over the half grid of the
/// window eroded by the current estimate. Values near the boundary are
/// inflated by missing outside points, so the first pass is an
/// overestimate and erosion removes the inflated region.
pub fn covering_estimate(set: &PointSet) -> Result<CoveringEstimate> {
    if set.is_empty() {
        return Err(Error::WindowTooSmall("empty point set".into()));
    }
    let field = HalfGridField::compute(set.points(), set.window());
    let mut cur = field.max_in_eroded(0).expect("nonempty window");
    let mut erosion = 0;
    let mut prev = None;
    let mut converged = false;
    for _ in 0..MAX_FIXPOINT_ROUNDS {
        let e = isqrt_ceil(cur);
        let next = field.max_in_eroded(e).ok_or_else(|| {
            Error::WindowTooSmall(format!("window {} vanishes under covering-radius erosion", set.window()))
        })?;
        if next >= INF {
            return Err(Error::WindowTooSmall(format!("eroded window of {} contains no point", set.window())));
        }
        erosion = e;
        if next == cur {
            converged = true;
            break;
        }
        if prev == Some(next) {
            // two-cycle: keep the larger value
            cur = cur.max(next);
            break;
        }
        prev = Some(cur);
        cur = next;
    }
    Ok(CoveringEstimate { quarter_sq: cur, erosion_half: erosion, converged, dim: set.dim() })
}

/// `(r, R)` of a sample: `r` is half the minimum distance between interior
/// points, `R` the covering radius estimate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DeloneRadii {
    /// `r^2`, exact.
    pub packing_sq: Rational,
    pub covering: CoveringEstimate,
}

impl DeloneRadii {
    pub fn packing(&self) -> f64 {
        libm::sqrt(crate::scalar::rational_to_f64(&self.packing_sq))
    }

    pub fn covering_sq(&self) -> Rational {
        self.covering.radius_sq()
    }

    pub fn covering(&self) -> f64 {
        self.covering.radius()
    }

    pub fn covering_upper(&self) -> f64 {
        self.covering.upper()
    }
}

pub fn packing_covering_radii(set: &PointSet) -> Result<DeloneRadii> {
    let covering = covering_estimate(set)?;
    let interior: alloc::vec::Vec<Point> = set.interior_points().copied().collect();
    if interior.len() < 2 {
        return Err(Error::WindowTooSmall(format!(
            "{} interior point(s) in {} with margin {}",
            interior.len(),
            set.window(),
            set.interior_margin()
        )));
    }
    let index = SpatialIndex::new(&interior, *set.window(), libm::ceil(covering.upper()) as i64);
    // the nearest neighbour of a point lies within twice the covering radius
    let mut reach = 2.0 * covering.upper();
    let diameter = (0..set.dim()).map(|i| set.window().side(i) as f64).sum::<f64>();
    loop {
        let r2 = radius_sq_bound(reach);
        let mut best = i64::MAX;
        for p in &interior {
            index.for_each_within(p, r2, |z| {
                if z != p {
                    best = best.min(z.dist_sq(p));
                }
            });
        }
        if best != i64::MAX {
            return Ok(DeloneRadii { packing_sq: rat(best as i128, 4), covering });
        }
        if reach > diameter {
            return Err(Error::Invariant("no pair of interior points found".into()));
        }
        reach *= 2.0;
    }
}
