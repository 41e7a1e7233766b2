use alloc::string::String;
use alloc::vec::Vec;

use super::length::LengthSeries;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Minimal decay of the fitted log-slope for convergent evidence.
pub const SLOPE_DELTA: f64 = 0.05;
/// Floor on the last-half lengths for divergent evidence.
pub const DIVERGENCE_FLOOR: f64 = 0.01;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum VerdictClass {
    ConvergentEvidence,
    DivergentEvidence,
    Inconclusive,
}

impl VerdictClass {
    pub fn label(&self) -> &'static str {
        match self {
            VerdictClass::ConvergentEvidence => "ConvergentEvidence",
            VerdictClass::DivergentEvidence => "DivergentEvidence",
            VerdictClass::Inconclusive => "Inconclusive",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Verdict {
    pub class: VerdictClass,
    /// Fitted geometric ratio of the last-half lengths.
    pub rate: Option<f64>,
    /// Estimate of the series beyond the last computed level.
    pub tail_bound: Option<Scalar>,
    pub levels: usize,
    pub notes: Vec<String>,
}

pub fn series_verdict(series: &LengthSeries) -> Result<Verdict> {
    verdict_from_lengths(&series.values())
}

/// Finite-scale classification of `sum l_n`: an exactly vanishing last
/// length, then a log-linear fit on the last half, then a floor test.
pub fn verdict_from_lengths(lengths: &[Scalar]) -> Result<Verdict> {
    let levels = lengths.len();
    if levels < 4 {
        return Err(Error::TooFewLevels { needed: 4, have: levels });
    }
    let mut notes = Vec::new();
    let last = lengths[levels - 1];
    if last.is_zero() {
        notes.push(String::from("last length vanishes; later lengths vanish as well"));
        let tail = if last.is_exact() { Scalar::ZERO } else { Scalar::Float(0.0) };
        return Ok(Verdict { class: VerdictClass::ConvergentEvidence, rate: None, tail_bound: Some(tail), levels, notes });
    }
    let half = &lengths[levels / 2..];
    let start = levels / 2;
    let pts: Vec<(f64, f64)> = half
        .iter()
        .enumerate()
        .filter(|(_, v)| !v.is_zero())
        .map(|(i, v)| ((start + i) as f64, libm::log(v.to_f64())))
        .collect();
    let mut rate = None;
    if pts.len() >= 2 {
        let n = pts.len() as f64;
        let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
        let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
        let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
        let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        let slope = sxy / sxx;
        let r = libm::exp(slope);
        rate = Some(r);
        if slope <= -SLOPE_DELTA {
            let tail = last.to_f64() * r / (1.0 - r);
            return Ok(Verdict {
                class: VerdictClass::ConvergentEvidence,
                rate,
                tail_bound: Some(Scalar::Float(tail)),
                levels,
                notes,
            });
        }
    } else {
        notes.push(String::from("fewer than two nonzero lengths in the last half"));
    }
    let floor = half.iter().map(Scalar::to_f64).fold(f64::INFINITY, f64::min);
    let class = if floor >= DIVERGENCE_FLOOR { VerdictClass::DivergentEvidence } else { VerdictClass::Inconclusive };
    Ok(Verdict { class, rate, tail_bound: None, levels, notes })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;
    use alloc::vec;

    fn exact(v: &[(i128, i128)]) -> Vec<Scalar> {
        v.iter().map(|&(p, q)| Scalar::Exact(rat(p, q))).collect()
    }

    #[test]
    fn exact_zero_tail() {
        let v = verdict_from_lengths(&exact(&[(1, 4), (1, 2), (0, 1), (0, 1), (0, 1), (0, 1)])).unwrap();
        assert_eq!(v.class, VerdictClass::ConvergentEvidence);
        assert_eq!(v.tail_bound, Some(Scalar::ZERO));
    }

    #[test]
    fn geometric_decay() {
        let l: Vec<Scalar> = (0..10).map(|n| Scalar::Exact(rat(1, 1 << n))).collect();
        let v = verdict_from_lengths(&l).unwrap();
        assert_eq!(v.class, VerdictClass::ConvergentEvidence);
        assert!((v.rate.unwrap() - 0.5).abs() < 1e-9);
        assert!((v.tail_bound.unwrap().to_f64() - 1.0 / 512.0).abs() < 1e-12);
    }

    #[test]
    fn constant_floor() {
        let v = verdict_from_lengths(&vec![Scalar::Exact(rat(1, 3)); 6]).unwrap();
        assert_eq!(v.class, VerdictClass::DivergentEvidence);
        assert!(verdict_from_lengths(&vec![Scalar::ZERO; 3]).is_err());
    }

    #[test]
    fn small_flat_lengths_are_inconclusive() {
        let v = verdict_from_lengths(&vec![Scalar::Float(1e-3); 6]).unwrap();
        assert_eq!(v.class, VerdictClass::Inconclusive);
    }
}
