use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::geometry::FirstReturnSet;
use crate::hierarchy::CombinatorialData;
use crate::point::Point;
use crate::scalar::Scalar;
use crate::torus::{c_map, torus_distance, Magnitude, ThetaVector, TorusKind, TorusPoint};

/// `max_{v in F} |||c^k(v)|||` with the first maximizing vector.
pub fn theta_length(f: &FirstReturnSet, theta: &ThetaVector, kind: TorusKind) -> Result<(Magnitude, Point)> {
    let mut best: Option<(Magnitude, Point)> = None;
    for v in f.vectors() {
        let m = torus_distance(&c_map(theta, v, kind)?);
        if best.as_ref().is_none_or(|(b, _)| m.cmp_value(b).is_gt()) {
            best = Some((m, *v));
        }
    }
    best.ok_or(Error::EmptyFirstReturns)
}

/// `h(A(n, x)) = c^k(n)`, the factor map on the orbit of the base point.
pub fn factor_map_eval(theta: &ThetaVector, n: &Point, kind: TorusKind) -> Result<TorusPoint> {
    c_map(theta, n, kind)
}

/// Per-level theta-lengths and their running sums.
#[derive(Clone, Debug, PartialEq)]
pub struct LengthSeries {
    pub kind: TorusKind,
    pub theta: ThetaVector,
    pub lengths: Vec<Magnitude>,
    pub witnesses: Vec<Point>,
    pub partial_sums: Vec<Scalar>,
}

impl LengthSeries {
    pub fn from_first_returns<'a>(
        first_returns: impl IntoIterator<Item = &'a FirstReturnSet>,
        theta: &ThetaVector,
        kind: TorusKind,
    ) -> Result<Self> {
        let mut lengths = Vec::new();
        let mut witnesses = Vec::new();
        let mut partial_sums = Vec::new();
        let mut acc = Scalar::ZERO;
        for f in first_returns {
            let (m, w) = theta_length(f, theta, kind)?;
            acc = acc.try_add(&m.value())?;
            lengths.push(m);
            witnesses.push(w);
            partial_sums.push(acc);
        }
        Ok(LengthSeries { kind, theta: theta.clone(), lengths, witnesses, partial_sums })
    }

    /// Lengths as numbers, exact where the root is rational.
    pub fn values(&self) -> Vec<Scalar> {
        self.lengths.iter().map(Magnitude::value).collect()
    }

    pub fn len(&self) -> usize {
        self.lengths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lengths.is_empty()
    }

    pub fn total(&self) -> Scalar {
        self.partial_sums.last().copied().unwrap_or(Scalar::ZERO)
    }

    /// `sum_{n >= n0} l_n` over the computed levels.
    pub fn suffix_sum(&self, n0: usize) -> Result<Scalar> {
        self.lengths[n0.min(self.len())..].iter().try_fold(Scalar::ZERO, |acc, m| acc.try_add(&m.value()))
    }
}

pub fn length_series(data: &CombinatorialData, theta: &ThetaVector, kind: TorusKind) -> Result<LengthSeries> {
    if data.len() < 2 {
        return Err(Error::TooFewLevels { needed: 2, have: data.len() });
    }
    if theta.dim() != data.dim() {
        return Err(Error::DimensionMismatch { expected: data.dim(), found: theta.dim() });
    }
    LengthSeries::from_first_returns(data.levels().iter().map(|l| &l.first_returns), theta, kind)
}
