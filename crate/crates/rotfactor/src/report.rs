//! Serializable report documents. Exact values are strings in `p/q`
//! form; floats are strings in shortest round-trip form, with an `_approx`
//! companion for plotting.

use rotfactor_core::generators::{Realization, ReturnSet};
use rotfactor_core::hierarchy::{
    CombinatorialData, Level, LinearRecurrenceReport, ThinningReport, WellDistributedReport,
};
use rotfactor_core::rotation::{
    Candidate, LengthSeries, NecessaryReport, SufficientReport, Verdict,
};
use rotfactor_core::{Point, Scalar, ThetaVector, Window};
use serde::Serialize;

use crate::config::RawConfig;
use crate::error::{Error, Result};
use crate::oracle::OracleTable;

/// Violations listed per level before truncation.
const MAX_LISTED: usize = 16;

pub fn point(p: &Point) -> Vec<i64> {
    p.coords()
}

pub fn theta(t: &ThetaVector) -> Vec<String> {
    t.components().iter().map(Scalar::to_string).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WindowDto {
    pub lo: Vec<i64>,
    pub hi: Vec<i64>,
    pub shape: Vec<usize>,
}

impl From<&Window> for WindowDto {
    fn from(w: &Window) -> Self {
        WindowDto { lo: point(&w.lo()), hi: point(&w.hi()), shape: w.shape() }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SetSummary {
    pub index: usize,
    pub cylinder: WindowDto,
    pub points: usize,
    pub interior: usize,
    pub packing_radius_sq: Option<String>,
    pub covering_radius_sq: Option<String>,
    pub covering_upper: Option<f64>,
    pub reliable: bool,
}

impl From<&ReturnSet> for SetSummary {
    fn from(s: &ReturnSet) -> Self {
        let radii = s.radii();
        SetSummary {
            index: s.level(),
            cylinder: s.cylinder_window().into(),
            points: s.points().len(),
            interior: s.base().interior_points().count(),
            packing_radius_sq: radii.map(|r| Scalar::Exact(r.packing_sq).to_string()),
            covering_radius_sq: radii.map(|r| Scalar::Exact(r.covering_sq()).to_string()),
            covering_upper: radii.map(|r| r.covering_upper()),
            reliable: s.is_reliable(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RealizationSummary {
    pub generator: String,
    pub dimension: usize,
    pub window: WindowDto,
    pub iterations: Vec<u32>,
    pub sets: Vec<SetSummary>,
    pub notes: Vec<String>,
}

impl RealizationSummary {
    pub fn new(kind: &str, r: &Realization) -> Self {
        RealizationSummary {
            generator: kind.to_string(),
            dimension: r.window().dim(),
            window: r.window().into(),
            iterations: r.iterations.clone(),
            sets: r.sets.iter().map(SetSummary::from).collect(),
            notes: r.notes.clone(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LevelSummary {
    pub n: usize,
    /// Index of `R_n` in the realized schedule.
    pub source: usize,
    pub points: usize,
    pub window: WindowDto,
    pub cylinder: WindowDto,
    pub first_returns: Vec<Vec<i64>>,
    pub k: Option<u32>,
    pub eligible: usize,
    pub excluded_interior: usize,
    pub partitioned: usize,
    pub complete_owners: usize,
    pub clipped_owners: usize,
}

impl From<&Level> for LevelSummary {
    fn from(l: &Level) -> Self {
        LevelSummary {
            n: l.n,
            source: l.source(),
            points: l.returns.points().len(),
            window: l.returns.window().into(),
            cylinder: l.returns.cylinder_window().into(),
            first_returns: l.first_returns.vectors().map(point).collect(),
            k: l.k,
            eligible: l.neighbor_diagnostics.eligible,
            excluded_interior: l.neighbor_diagnostics.excluded_interior,
            partitioned: l.partition.points().count(),
            complete_owners: l.partition.complete_owners().len(),
            clipped_owners: l.partition.clipped,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct WellDistributedLevelDto {
    pub n: usize,
    pub iii: bool,
    pub iii_checked: usize,
    pub iii_violations: usize,
    pub iv: bool,
    pub iv_checked: usize,
    pub iv_violations: usize,
    /// First violating owners, at most 16.
    pub examples: Vec<Vec<i64>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct WellDistributedDto {
    /// (iv) over all owners in `R_{n+1}` instead of `R_{n+2}`.
    pub strict: bool,
    pub all_pass: bool,
    pub levels: Vec<WellDistributedLevelDto>,
}

impl From<&WellDistributedReport> for WellDistributedDto {
    fn from(r: &WellDistributedReport) -> Self {
        let levels = r
            .levels
            .iter()
            .map(|l| WellDistributedLevelDto {
                n: l.n,
                iii: l.iii,
                iii_checked: l.iii_checked,
                iii_violations: l.iii_violations.len(),
                iv: l.iv,
                iv_checked: l.iv_checked,
                iv_violations: l.iv_violations.len(),
                examples: l.iii_violations.iter().chain(&l.iv_violations).take(MAX_LISTED).map(point).collect(),
            })
            .collect();
        WellDistributedDto { strict: r.strict, all_pass: r.all_pass(), levels }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ThinningDto {
    pub kept: Vec<usize>,
    pub dropped: Vec<usize>,
    pub well_distributed: bool,
    pub levels: usize,
}

impl ThinningDto {
    pub fn new(r: &ThinningReport, thinned: &CombinatorialData) -> Self {
        ThinningDto {
            kept: r.kept.clone(),
            dropped: r.dropped.clone(),
            well_distributed: r.well_distributed,
            levels: thinned.len(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LinearRecurrenceDto {
    pub k: Vec<Option<u32>>,
    pub l_hat: Option<u32>,
    pub flagged: bool,
}

impl From<&LinearRecurrenceReport> for LinearRecurrenceDto {
    fn from(r: &LinearRecurrenceReport) -> Self {
        LinearRecurrenceDto { k: r.k.clone(), l_hat: r.bound, flagged: r.flagged }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct HierarchySummary {
    pub levels: Vec<LevelSummary>,
    pub lookahead: Vec<SetSummary>,
    pub well_distributed: WellDistributedDto,
    pub thinning: ThinningDto,
    pub linear_recurrence: LinearRecurrenceDto,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerdictDto {
    pub class: String,
    pub rate: Option<f64>,
    pub tail_bound: Option<String>,
    /// Levels the classification was computed from.
    pub levels: usize,
    /// Sampled window of the data behind the classification.
    pub window: WindowDto,
    pub notes: Vec<String>,
}

impl VerdictDto {
    pub fn new(v: &Verdict, window: &Window) -> Self {
        VerdictDto {
            class: v.class.label().to_string(),
            rate: v.rate,
            tail_bound: v.tail_bound.map(|t| t.to_string()),
            levels: v.levels,
            window: window.into(),
            notes: v.notes.clone(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SeriesDto {
    pub lengths: Vec<String>,
    pub lengths_approx: Vec<f64>,
    pub witnesses: Vec<Vec<i64>>,
    pub partial_sums: Vec<String>,
}

impl From<&LengthSeries> for SeriesDto {
    fn from(s: &LengthSeries) -> Self {
        SeriesDto {
            lengths: s.values().iter().map(Scalar::to_string).collect(),
            lengths_approx: s.lengths.iter().map(|m| m.to_f64()).collect(),
            witnesses: s.witnesses.iter().map(point).collect(),
            partial_sums: s.partial_sums.iter().map(Scalar::to_string).collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct NecessaryDto {
    /// "thinned" or "full".
    pub data: String,
    /// Schedule indices of the levels used.
    pub sources: Vec<usize>,
    pub series: SeriesDto,
    pub verdict: VerdictDto,
    pub well_distributed: bool,
    pub ruled_out: bool,
    pub conditional: bool,
    pub message: String,
}

impl NecessaryDto {
    pub fn new(r: &NecessaryReport, data: &CombinatorialData, thinned: bool) -> Self {
        NecessaryDto {
            data: if thinned { "thinned" } else { "full" }.to_string(),
            sources: data.levels().iter().map(Level::source).collect(),
            series: (&r.series).into(),
            verdict: VerdictDto::new(&r.verdict, data.levels()[0].returns.window()),
            well_distributed: r.well_distributed,
            ruled_out: r.ruled_out,
            conditional: r.conditional,
            message: r.message.clone(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundRow {
    pub n: usize,
    pub value: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct SufficientDto {
    pub indicated: bool,
    pub conditional: bool,
    pub l_hat: Option<u32>,
    pub linear_recurrence: bool,
    /// `eps(N)`: largest torus displacement over sampled pairs of `R_N`.
    pub epsilon: Vec<BoundRow>,
    /// `L * (sum_{n >= n0} l_n + tail)`.
    pub lr_bound: Vec<BoundRow>,
    pub message: String,
}

impl From<&SufficientReport> for SufficientDto {
    fn from(r: &SufficientReport) -> Self {
        let rows = |t: &[(usize, Scalar)]| t.iter().map(|(n, v)| BoundRow { n: *n, value: v.to_string() }).collect();
        SufficientDto {
            indicated: r.indicated,
            conditional: r.conditional,
            l_hat: r.linear_recurrence.bound,
            linear_recurrence: r.linear_recurrence.flagged,
            epsilon: rows(&r.diagnostics.epsilon_table),
            lr_bound: rows(&r.diagnostics.lr_bound_table),
            message: r.message.clone(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ThetaAnalysis {
    pub theta: Vec<String>,
    pub k: String,
    pub series: SeriesDto,
    pub verdict: VerdictDto,
    pub necessary: NecessaryDto,
    pub sufficient: SufficientDto,
}

#[derive(Clone, Debug, Serialize)]
pub struct CandidateDto {
    pub rank: usize,
    pub theta: Vec<String>,
    pub source: String,
    pub denominator: Option<String>,
    pub score: String,
    pub score_approx: f64,
    pub verdict: String,
    pub lengths: Vec<String>,
}

impl CandidateDto {
    pub fn new(rank: usize, c: &Candidate, verdict: &Verdict) -> Self {
        CandidateDto {
            rank,
            theta: theta(&c.theta),
            source: c.source.label().to_string(),
            denominator: c.denominator().map(|q| q.to_string()),
            score: c.score.to_string(),
            score_approx: c.score.to_f64(),
            verdict: verdict.class.label().to_string(),
            lengths: c.series.values().iter().map(Scalar::to_string).collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ScanSummary {
    pub k: String,
    pub q_max: u32,
    pub levels: usize,
    pub window: WindowDto,
    pub candidates: Vec<CandidateDto>,
}

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub tool: String,
    pub version: String,
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<String>,
    pub config: RawConfig,
    pub realization: RealizationSummary,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hierarchy: Option<HierarchySummary>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub analyses: Vec<ThetaAnalysis>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub scans: Vec<ScanSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleTable>,
    pub warnings: Vec<String>,
}

impl RunReport {
    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self).map_err(|e| Error::Serialize(e.to_string()))?;
        s.push('\n');
        Ok(s)
    }

    /// Flat projection for plotting; the columns depend on the command.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let ser = |e: csv::Error| Error::Serialize(e.to_string());
        if !self.analyses.is_empty() {
            w.write_record(["theta", "k", "n", "l_n", "partial_sum"]).map_err(ser)?;
            for a in &self.analyses {
                let t = a.theta.join(",");
                for (n, (l, s)) in a.series.lengths.iter().zip(&a.series.partial_sums).enumerate() {
                    w.write_record([t.as_str(), a.k.as_str(), &n.to_string(), l, s]).map_err(ser)?;
                }
            }
        } else if !self.scans.is_empty() {
            w.write_record(["k", "rank", "theta", "source", "score", "verdict"]).map_err(ser)?;
            for s in &self.scans {
                for c in &s.candidates {
                    w.write_record([&s.k, &c.rank.to_string(), &c.theta.join(","), &c.source, &c.score, &c.verdict])
                        .map_err(ser)?;
                }
            }
        } else if let Some(o) = &self.oracle {
            w.write_record(["check", "level", "items", "mismatches", "first_mismatch"]).map_err(ser)?;
            for r in &o.rows {
                let level = r.level.map(|l| l.to_string()).unwrap_or_default();
                let first = r.first_mismatch.clone().unwrap_or_default();
                w.write_record([&r.check, &level, &r.items.to_string(), &r.mismatches.to_string(), &first])
                    .map_err(ser)?;
            }
        } else if let Some(h) = &self.hierarchy {
            w.write_record(["n", "points", "first_returns", "k", "iii", "iv"]).map_err(ser)?;
            for (l, wd) in h.levels.iter().zip(&h.well_distributed.levels) {
                let k = l.k.map(|k| k.to_string()).unwrap_or_default();
                w.write_record([
                    &l.n.to_string(),
                    &l.points.to_string(),
                    &l.first_returns.len().to_string(),
                    &k,
                    &wd.iii.to_string(),
                    &wd.iv.to_string(),
                ])
                .map_err(ser)?;
            }
        } else {
            w.write_record(["index", "points", "interior", "covering_radius_sq"]).map_err(ser)?;
            for s in &self.realization.sets {
                let cov = s.covering_radius_sq.clone().unwrap_or_default();
                w.write_record([&s.index.to_string(), &s.points.to_string(), &s.interior.to_string(), &cov])
                    .map_err(ser)?;
            }
        }
        let bytes = w.into_inner().map_err(|e| Error::Serialize(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::Serialize(e.to_string()))
    }
}
