//! End-to-end runs: realization, hierarchy, per-theta analysis and scans.

use std::thread;

use rotfactor_core::generators::{realize, GeneratorSpec, Realization, RealizeOptions};
use rotfactor_core::hierarchy::{
    build_data, check_well_distributed, linear_recurrence_report, thin_to_well_distributed, CombinatorialData,
    HierarchyOptions, LinearRecurrenceReport, ThinningReport, TieBreak, WellDistributedReport,
};
use rotfactor_core::rotation::{
    necessary_condition_check, series_verdict, sufficient_condition_check, theta_scan, ScanSpec,
};
use rotfactor_core::{ThetaVector, TorusKind};

use crate::config::{RunConfig, MIN_VERDICT_LEVELS};
use crate::error::{Error, Result};
use crate::oracle::{oracle_check_data, OracleOptions};
use crate::report::{
    CandidateDto, HierarchySummary, NecessaryDto, RealizationSummary, RunReport, ScanSummary,
    SufficientDto, ThetaAnalysis, ThinningDto, VerdictDto, WellDistributedDto,
};

/// Fewest thinned levels for the necessary check to use thinned data.
pub const MIN_THINNED_LEVELS: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Generate,
    Hierarchy,
    Analyze,
    Scan,
    OracleCheck,
}

impl Command {
    pub fn label(&self) -> &'static str {
        match self {
            Command::Generate => "generate",
            Command::Hierarchy => "hierarchy",
            Command::Analyze => "analyze",
            Command::Scan => "scan",
            Command::OracleCheck => "oracle-check",
        }
    }
}

/// Return sets `R_0 .. R_{N+2}` for levels `0..=N`.
pub fn realize_config(cfg: &RunConfig) -> Result<Realization> {
    let opts = RealizeOptions { sets: cfg.levels + 3, schedule: cfg.schedule.clone(), window_factor: cfg.window_margin };
    Ok(realize(&cfg.generator, &opts)?)
}

pub struct HierarchyRun {
    pub data: CombinatorialData,
    pub well_distributed: WellDistributedReport,
    pub thinned: CombinatorialData,
    pub thinning: ThinningReport,
    pub linear_recurrence: LinearRecurrenceReport,
}

impl HierarchyRun {
    /// The data for the necessary check, and whether it is the thinned one.
    pub fn necessary_data(&self) -> (&CombinatorialData, bool) {
        if self.thinning.well_distributed && self.thinned.len() >= MIN_THINNED_LEVELS {
            (&self.thinned, !self.thinning.dropped.is_empty())
        } else {
            (&self.data, false)
        }
    }

    pub fn summary(&self) -> HierarchySummary {
        HierarchySummary {
            levels: self.data.levels().iter().map(Into::into).collect(),
            lookahead: (self.data.len()..self.data.len() + 2)
                .filter_map(|j| self.data.returns(j).ok())
                .map(Into::into)
                .collect(),
            well_distributed: WellDistributedDto::from(&self.well_distributed),
            thinning: ThinningDto::new(&self.thinning, &self.thinned),
            linear_recurrence: (&self.linear_recurrence).into(),
        }
    }
}

pub fn build_hierarchy(cfg: &RunConfig, realization: &Realization, tie: TieBreak) -> Result<HierarchyRun> {
    let options = HierarchyOptions { tie, strict_iv: cfg.strict_well_distributed };
    let data = build_data(&realization.sets, options)?;
    let well_distributed = check_well_distributed(&data)?;
    let (thinned, thinning) = thin_to_well_distributed(&data)?;
    let linear_recurrence = linear_recurrence_report(&data)?;
    Ok(HierarchyRun { data, well_distributed, thinned, thinning, linear_recurrence })
}

pub fn analyze_theta(run: &HierarchyRun, theta: &ThetaVector, kind: TorusKind) -> Result<ThetaAnalysis> {
    let sufficient = sufficient_condition_check(&run.data, theta, kind)?;
    let (nec_data, thinned) = run.necessary_data();
    let necessary = necessary_condition_check(nec_data, theta, kind)?;
    let window = run.data.levels()[0].returns.window();
    Ok(ThetaAnalysis {
        theta: crate::report::theta(theta),
        k: kind.label().to_string(),
        series: (&sufficient.series).into(),
        verdict: VerdictDto::new(&sufficient.verdict, window),
        necessary: NecessaryDto::new(&necessary, nec_data, thinned),
        sufficient: SufficientDto::from(&sufficient),
    })
}

/// Runs the analyses in parallel; results keep the input order.
fn analyze_all(run: &HierarchyRun, jobs: &[(ThetaVector, TorusKind)]) -> Result<Vec<ThetaAnalysis>> {
    thread::scope(|s| {
        let handles: Vec<_> = jobs.iter().map(|(t, k)| s.spawn(move || analyze_theta(run, t, *k))).collect();
        handles.into_iter().map(|h| h.join().expect("analysis thread panicked")).collect()
    })
}

pub fn scan(run: &HierarchyRun, kind: TorusKind, spec: &ScanSpec) -> Result<ScanSummary> {
    let candidates = theta_scan(&run.data, kind, spec)?;
    let mut dtos = Vec::with_capacity(candidates.len());
    for (i, c) in candidates.iter().enumerate() {
        dtos.push(CandidateDto::new(i + 1, c, &series_verdict(&c.series)?));
    }
    Ok(ScanSummary {
        k: kind.label().to_string(),
        q_max: spec.q_max,
        levels: run.data.len(),
        window: run.data.levels()[0].returns.window().into(),
        candidates: dtos,
    })
}

/// Largest substitution window the brute-force oracles accept.
pub const ORACLE_MAX_WINDOW: usize = 10_000;

fn check_oracle_scope(cfg: &RunConfig) -> Result<()> {
    let ok = match &cfg.generator {
        GeneratorSpec::LatticeModel { .. } => true,
        GeneratorSpec::BlockSubstitution(_) | GeneratorSpec::Product1d(_) => cfg.dimension == 1,
        GeneratorSpec::ExplicitPoints { .. } => false,
    };
    if ok {
        Ok(())
    } else {
        Err(Error::config(
            "system.generator",
            format!("oracle checks support lattice_model or a 1-d substitution, not a {}-d {}", cfg.dimension, cfg.generator.kind()),
        ))
    }
}

fn timestamp() -> String {
    chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true)
}

pub fn run_pipeline(cfg: &RunConfig, command: Command) -> Result<RunReport> {
    run_with(cfg, command, TieBreak::LexSmallest)
}

/// As [`run_pipeline`], with an explicit tie rule for fault injection.
pub fn run_with(cfg: &RunConfig, command: Command, tie: TieBreak) -> Result<RunReport> {
    let needs_verdict = matches!(command, Command::Analyze | Command::Scan);
    if needs_verdict && cfg.levels < MIN_VERDICT_LEVELS {
        return Err(Error::config(
            "analysis.levels",
            format!("{} levels are too few for a verdict; at least {MIN_VERDICT_LEVELS} are needed", cfg.levels),
        ));
    }
    if command == Command::OracleCheck {
        check_oracle_scope(cfg)?;
    }
    let realization = realize_config(cfg)?;
    let is_lattice = matches!(cfg.generator, GeneratorSpec::LatticeModel { .. });
    if command == Command::OracleCheck && !is_lattice && realization.window().volume() > ORACLE_MAX_WINDOW {
        return Err(Error::config(
            "system",
            format!("oracle checks need a window of at most {ORACLE_MAX_WINDOW} cells, realized {}", realization.window()),
        ));
    }
    let mut report = RunReport {
        tool: env!("CARGO_PKG_NAME").to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        command: command.label().to_string(),
        timestamp: cfg.output.timestamp.then(timestamp),
        config: cfg.echo.clone(),
        realization: RealizationSummary::new(cfg.generator.kind(), &realization),
        hierarchy: None,
        analyses: Vec::new(),
        scans: Vec::new(),
        oracle: None,
        warnings: Vec::new(),
    };
    for s in realization.sets.iter().filter(|s| !s.is_reliable()) {
        report.warnings.push(format!("covering radius of set {} did not stabilize in the window", s.level()));
    }
    if command == Command::Generate {
        return Ok(report);
    }
    let run = build_hierarchy(cfg, &realization, tie)?;
    if !run.well_distributed.all_pass() {
        report.warnings.push(if run.thinning.well_distributed {
            format!("data are not well distributed; thinning kept sets {:?}", run.thinning.kept)
        } else {
            String::from("data are not well distributed and thinning found no well-distributed subsequence")
        });
    }
    if !run.linear_recurrence.flagged {
        report.warnings.push(String::from("k(n) is not constant over the last half of the levels"));
    }
    report.hierarchy = Some(run.summary());
    match command {
        Command::Analyze => {
            if cfg.thetas.is_empty() {
                report.warnings.push(String::from("no theta given; nothing to analyze"));
            }
            let jobs: Vec<(ThetaVector, TorusKind)> = cfg
                .thetas
                .iter()
                .flat_map(|t| cfg.k.kinds().into_iter().map(move |k| (t.clone(), k)))
                .collect();
            report.analyses = analyze_all(&run, &jobs)?;
        }
        Command::Scan => {
            for kind in cfg.k.kinds() {
                report.scans.push(scan(&run, kind, &cfg.scan)?);
            }
        }
        Command::OracleCheck => {
            let table = oracle_check_data(&run.data, &OracleOptions::for_dim(cfg.dimension))?;
            report.oracle = Some(table);
        }
        Command::Generate | Command::Hierarchy => {}
    }
    Ok(report)
}
