use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;

use super::length::{length_series, LengthSeries};
use super::verdict::{series_verdict, Verdict, VerdictClass};
use crate::error::Result;
use crate::hierarchy::{check_well_distributed, linear_recurrence_report, CombinatorialData, LinearRecurrenceReport};
use crate::point::Point;
use crate::scalar::Scalar;
use crate::torus::{c_map, torus_distance, Magnitude, ThetaVector, TorusKind};

/// Pair budget for the continuity modulus.
pub const MAX_PAIRS: usize = 100_000;

#[derive(Clone, Debug, PartialEq)]
pub struct NecessaryReport {
    pub series: LengthSeries,
    pub verdict: Verdict,
    pub well_distributed: bool,
    /// Divergent lengths on well-distributed data.
    pub ruled_out: bool,
    /// The data failed the well-distributedness check.
    pub conditional: bool,
    pub message: String,
}

/// Divergence of the lengths on well-distributed data rules out a factor
/// map onto the rotation at this scale.
pub fn necessary_condition_check(data: &CombinatorialData, theta: &ThetaVector, kind: TorusKind) -> Result<NecessaryReport> {
    let series = length_series(data, theta, kind)?;
    let verdict = series_verdict(&series)?;
    let well_distributed = check_well_distributed(data)?.all_pass();
    let ruled_out = verdict.class == VerdictClass::DivergentEvidence && well_distributed;
    let message = String::from(if ruled_out {
        "extension onto the rotation ruled out at this scale"
    } else {
        "not ruled out"
    });
    Ok(NecessaryReport { series, verdict, well_distributed, ruled_out, conditional: !well_distributed, message })
}

#[derive(Clone, Debug, PartialEq)]
pub struct ContinuityModulus {
    pub level: usize,
    pub value: Magnitude,
    pub pairs: usize,
    pub subsampled: bool,
}

/// Truncated bounds from the proof of continuity of the factor map.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct FactorDiagnostics {
    /// `(N, eps(N))`.
    pub epsilon_table: Vec<(usize, Scalar)>,
    /// `(n0, L * (sum_{n >= n0} l_n + tail))`.
    pub lr_bound_table: Vec<(usize, Scalar)>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SufficientReport {
    pub series: LengthSeries,
    pub verdict: Verdict,
    pub linear_recurrence: LinearRecurrenceReport,
    pub indicated: bool,
    /// `k(n)` is not flat, so the bound uses its maximum.
    pub conditional: bool,
    pub diagnostics: FactorDiagnostics,
    pub message: String,
}

pub fn sufficient_condition_check(data: &CombinatorialData, theta: &ThetaVector, kind: TorusKind) -> Result<SufficientReport> {
    let series = length_series(data, theta, kind)?;
    let verdict = series_verdict(&series)?;
    let linear_recurrence = linear_recurrence_report(data)?;
    let indicated = verdict.class == VerdictClass::ConvergentEvidence;
    let mut diagnostics = FactorDiagnostics::default();
    if let Some(l_hat) = linear_recurrence.bound {
        let tail = verdict.tail_bound.unwrap_or(Scalar::ZERO);
        for n0 in 0..series.len() {
            let b = series.suffix_sum(n0)?.try_add(&tail)?.try_mul_int(l_hat as i64)?;
            diagnostics.lr_bound_table.push((n0, b));
        }
    }
    for n in 0..data.len() {
        let eps = continuity_modulus(data, theta, kind, n)?;
        diagnostics.epsilon_table.push((n, eps.value.value()));
    }
    let message = String::from(if indicated { "extension indicated" } else { "not indicated" });
    Ok(SufficientReport {
        series,
        verdict,
        conditional: !linear_recurrence.flagged,
        linear_recurrence,
        indicated,
        diagnostics,
        message,
    })
}

/// `max |||c^k(n - m)|||` over interior pairs of `R_N`, over a stride sample
/// when there are more than `MAX_PAIRS` pairs. The witness pairs of the
/// first-return vectors are always included.
pub fn continuity_modulus(data: &CombinatorialData, theta: &ThetaVector, kind: TorusKind, level: usize) -> Result<ContinuityModulus> {
    let lvl = data.level(level)?;
    let pts: Vec<Point> = lvl.returns.base().interior_points().copied().collect();
    let n = pts.len();
    let total = n * n.saturating_sub(1) / 2;
    let stride = total.div_ceil(MAX_PAIRS).max(1);
    let mut diffs: BTreeSet<Point> = BTreeSet::new();
    let mut next = 0usize;
    let mut offset = 0usize;
    for i in 0..n {
        let row = n - 1 - i;
        while next < offset + row {
            let j = i + 1 + (next - offset);
            diffs.insert(pts[j] - pts[i]);
            next += stride;
        }
        offset += row;
    }
    for v in lvl.first_returns.vectors() {
        let (a, b) = lvl.first_returns.witness(v).expect("witness");
        diffs.insert(b - a);
    }
    let mut best = Magnitude::ZERO;
    for d in &diffs {
        let m = torus_distance(&c_map(theta, d, kind)?);
        if m.cmp_value(&best).is_gt() {
            best = m;
        }
    }
    Ok(ContinuityModulus { level, value: best, pairs: total.min(total.div_ceil(stride)), subsampled: stride > 1 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{realize, GeneratorSpec, RealizeOptions};
    use crate::hierarchy::{build_data, HierarchyOptions};
    use crate::scalar::rat;

    fn lattice_data(levels: usize) -> CombinatorialData {
        let sets = realize(&GeneratorSpec::lattice(alloc::vec![2]).unwrap(), &RealizeOptions::new(levels + 2)).unwrap().sets;
        build_data(&sets, HierarchyOptions::default()).unwrap()
    }

    fn theta(s: &str) -> ThetaVector {
        ThetaVector::parse(s).unwrap()
    }

    #[test]
    fn necessary_on_the_lattice() {
        let data = lattice_data(6);
        let r = necessary_condition_check(&data, &theta("1/3"), TorusKind::One).unwrap();
        assert!(r.ruled_out && !r.conditional);
        let r = necessary_condition_check(&data, &theta("0"), TorusKind::One).unwrap();
        assert!(!r.ruled_out);
        let r = necessary_condition_check(&data, &theta("1/4"), TorusKind::One).unwrap();
        assert!(!r.ruled_out);
        assert_eq!(r.series.total(), Scalar::Exact(rat(3, 4)));
    }

    #[test]
    fn sufficient_on_the_lattice() {
        let data = lattice_data(6);
        let r = sufficient_condition_check(&data, &theta("1/4"), TorusKind::One).unwrap();
        assert!(r.indicated && !r.conditional);
        assert_eq!(r.diagnostics.lr_bound_table[2], (2, Scalar::ZERO));
        assert_eq!(r.diagnostics.lr_bound_table[0].1, Scalar::Exact(rat(3, 4)));
        let r = sufficient_condition_check(&data, &theta("1/3"), TorusKind::One).unwrap();
        assert!(!r.indicated);
        let r = sufficient_condition_check(&data, &theta("0"), TorusKind::One).unwrap();
        assert!(r.indicated);
        assert!(r.diagnostics.lr_bound_table.iter().all(|(_, b)| b.is_zero()));
    }

    #[test]
    fn continuity_modulus_values() {
        let data = lattice_data(4);
        for n in 0..4 {
            let e = continuity_modulus(&data, &theta("0"), TorusKind::One, n).unwrap();
            assert!(e.value.is_zero());
            let e = continuity_modulus(&data, &theta("1/3"), TorusKind::One, n).unwrap();
            assert_eq!(e.value.value(), Scalar::Exact(rat(1, 3)));
        }
        for n in 2..4 {
            let e = continuity_modulus(&data, &theta("1/4"), TorusKind::One, n).unwrap();
            assert!(e.value.is_zero());
        }
    }
}
