use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use super::length::{length_series, LengthSeries};
use crate::error::{Error, Result};
use crate::hierarchy::CombinatorialData;
use crate::scalar::{rat, Rational, Scalar};
use crate::torus::{ThetaVector, TorusKind};

/// Largest denominator kept from a continued-fraction expansion.
const MAX_CONVERGENT_DENOMINATOR: i128 = 1 << 40;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum CandidateSource {
    Grid,
    Adapted,
    Convergent,
    UserReal,
}

impl CandidateSource {
    pub fn label(&self) -> &'static str {
        match self {
            CandidateSource::Grid => "grid",
            CandidateSource::Adapted => "adapted",
            CandidateSource::Convergent => "convergent",
            CandidateSource::UserReal => "real",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScanSpec {
    /// Grid `p/q` with `q <= q_max` per coordinate; 0 disables the grid.
    pub q_max: u32,
    /// Expansion factor per axis for denominators `q_i^m`.
    pub adapted_bases: Vec<Option<i64>>,
    /// Largest `m`; defaults to half the number of levels, at least 1.
    pub adapted_max_power: Option<u32>,
    /// Real vectors whose convergents are added.
    pub reals: Vec<Vec<f64>>,
    pub convergent_depth: usize,
}

impl ScanSpec {
    pub fn grid(q_max: u32) -> Self {
        ScanSpec { q_max, adapted_bases: Vec::new(), adapted_max_power: None, reals: Vec::new(), convergent_depth: 8 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Candidate {
    pub theta: ThetaVector,
    pub source: CandidateSource,
    /// `sum_n l_n` over the computed levels.
    pub score: Scalar,
    pub series: LengthSeries,
}

impl Candidate {
    /// Largest denominator, `None` for non-rational candidates.
    pub fn denominator(&self) -> Option<i128> {
        self.theta.max_denominator()
    }
}

fn grid_values(q_max: u32) -> Vec<Rational> {
    let mut out: BTreeSet<Rational> = BTreeSet::new();
    out.insert(rat(0, 1));
    for q in 1..=q_max as i128 {
        for p in 0..q {
            out.insert(rat(p, q));
        }
    }
    out.into_iter().collect()
}

fn adapted_values(base: i64, max_power: u32) -> Vec<Rational> {
    let mut out: BTreeSet<Rational> = BTreeSet::new();
    let mut q: i128 = 1;
    for _ in 0..=max_power {
        for p in 0..q {
            out.insert(rat(p, q));
        }
        q = match q.checked_mul(base as i128) {
            Some(v) if v <= 1 << 20 => v,
            _ => break,
        };
    }
    out.into_iter().collect()
}

/// Convergents `p_k/q_k` of `x`, up to `depth` terms.
pub fn convergents(x: f64, depth: usize) -> Vec<Rational> {
    let mut out = Vec::new();
    let (mut p0, mut q0, mut p1, mut q1) = (0i128, 1i128, 1i128, 0i128);
    let mut r = x;
    for _ in 0..depth {
        let a = libm::floor(r);
        if !a.is_finite() || a.abs() > 1e15 {
            break;
        }
        let a = a as i128;
        let (p2, q2) = match (a.checked_mul(p1).and_then(|v| v.checked_add(p0)), a.checked_mul(q1).and_then(|v| v.checked_add(q0))) {
            (Some(p), Some(q)) if q <= MAX_CONVERGENT_DENOMINATOR => (p, q),
            _ => break,
        };
        out.push(rat(p2, q2));
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
        let f = r - a as f64;
        if f.abs() < 1e-15 {
            break;
        }
        r = 1.0 / f;
    }
    out
}

fn product(per_axis: &[Vec<Scalar>]) -> Vec<Vec<Scalar>> {
    let mut out: Vec<Vec<Scalar>> = vec![Vec::new()];
    for values in per_axis {
        out = out.iter().flat_map(|prefix| values.iter().map(move |v| [prefix.as_slice(), &[*v]].concat())).collect();
    }
    out
}

fn exact(v: Vec<Rational>) -> Vec<Scalar> {
    v.into_iter().map(Scalar::Exact).collect()
}

/// Candidates ranked by `sum_n l_n`, ties broken by the smaller largest
/// denominator (non-rational last) and then by the components.
pub fn theta_scan(data: &CombinatorialData, kind: TorusKind, spec: &ScanSpec) -> Result<Vec<Candidate>> {
    let d = data.dim();
    let mut raw: Vec<(Vec<Scalar>, CandidateSource)> = Vec::new();
    if spec.q_max > 0 {
        let g = exact(grid_values(spec.q_max));
        raw.extend(product(&vec![g; d]).into_iter().map(|t| (t, CandidateSource::Grid)));
    }
    if spec.adapted_bases.iter().any(Option::is_some) {
        if spec.adapted_bases.len() != d {
            return Err(Error::DimensionMismatch { expected: d, found: spec.adapted_bases.len() });
        }
        let m = spec.adapted_max_power.unwrap_or(((data.len() / 2) as u32).max(1));
        let per_axis: Vec<Vec<Scalar>> = spec
            .adapted_bases
            .iter()
            .map(|b| match b {
                Some(q) => exact(adapted_values(*q, m)),
                None => vec![Scalar::ZERO],
            })
            .collect();
        raw.extend(product(&per_axis).into_iter().map(|t| (t, CandidateSource::Adapted)));
    }
    for x in &spec.reals {
        if x.len() != d {
            return Err(Error::DimensionMismatch { expected: d, found: x.len() });
        }
        let cf: Vec<Vec<Rational>> = x.iter().map(|&v| convergents(v, spec.convergent_depth)).collect();
        let depth = cf.iter().map(Vec::len).min().unwrap_or(0);
        for k in 0..depth {
            raw.push((cf.iter().map(|c| Scalar::Exact(c[k])).collect(), CandidateSource::Convergent));
        }
        raw.push((x.iter().map(|&v| Scalar::Float(v)).collect(), CandidateSource::UserReal));
    }
    let mut seen: BTreeSet<String> = BTreeSet::new();
    let mut out = Vec::new();
    for (t, source) in raw {
        let theta = ThetaVector::new(t)?.reduced();
        if !seen.insert(alloc::format!("{theta}")) {
            continue;
        }
        let series = length_series(data, &theta, kind)?;
        out.push(Candidate { score: series.total(), theta, source, series });
    }
    if out.is_empty() {
        return Err(Error::EmptyCandidates);
    }
    out.sort_by(rank);
    Ok(out)
}

fn rank(a: &Candidate, b: &Candidate) -> Ordering {
    a.score
        .cmp_value(&b.score)
        .then_with(|| match (a.denominator(), b.denominator()) {
            (Some(x), Some(y)) => x.cmp(&y),
            (Some(_), None) => Ordering::Less,
            (None, Some(_)) => Ordering::Greater,
            (None, None) => Ordering::Equal,
        })
        .then_with(|| {
            a.theta
                .components()
                .iter()
                .zip(b.theta.components())
                .map(|(x, y)| x.cmp_value(y))
                .find(|o| o.is_ne())
                .unwrap_or(Ordering::Equal)
        })
}
