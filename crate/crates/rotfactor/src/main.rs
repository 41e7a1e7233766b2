use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rotfactor::config::{Format, RunConfig};
use rotfactor::error::{Error, Result};
use rotfactor::io::{format_edges, format_grid, format_point_set, write_text};
use rotfactor::pipeline::{build_hierarchy, realize_config};
use rotfactor::{load_config, run_pipeline, Command, Overrides, RunReport};
use rotfactor_core::generators::GeneratorSpec;
use rotfactor_core::geometry::voronoi_neighbors_with;
use rotfactor_core::hierarchy::TieBreak;

#[derive(Parser)]
#[command(name = "rotfactor", version, about = "Rotation factors of linearly recurrent Z^d-actions at finite scale")]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand)]
enum Sub {
    /// Realize the generator and its nested return sets.
    Generate {
        #[command(flatten)]
        common: Common,
        /// Also write the symbol grid and every return set into DIR.
        #[arg(long, value_name = "DIR")]
        export: Option<PathBuf>,
    },
    /// Build the combinatorial data: first returns, partitions, k(n).
    Hierarchy {
        #[command(flatten)]
        common: Common,
        /// Also write neighbour edge lists and patch memberships into DIR.
        #[arg(long, value_name = "DIR")]
        export: Option<PathBuf>,
    },
    /// Theta-lengths, verdicts and both criterion checks per theta.
    Analyze {
        #[command(flatten)]
        common: Common,
    },
    /// Rank candidate thetas.
    Scan {
        #[command(flatten)]
        common: Common,
    },
    /// Diff the pipeline against brute-force recomputations.
    OracleCheck {
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args)]
struct Common {
    #[arg(long, value_name = "PATH")]
    config: PathBuf,
    /// Largest level N; sets R_0..R_{N+2} are computed.
    #[arg(long)]
    levels: Option<usize>,
    /// Thetas as "a,b;c,d"; components accept p/q.
    #[arg(long)]
    theta: Option<String>,
    #[arg(long, value_parser = ["1", "d", "both"])]
    k: Option<String>,
    #[arg(long, value_parser = ["json", "csv"])]
    format: Option<String>,
    #[arg(long, value_name = "PATH")]
    output: Option<String>,
    #[arg(long)]
    no_timestamp: bool,
    /// Sampled window size in units of the largest cylinder.
    #[arg(long, value_name = "REAL")]
    window_margin: Option<String>,
    /// Condition (iv) over all owners of the next level.
    #[arg(long)]
    strict_well_distributed: bool,
}

impl Common {
    fn load(&self) -> Result<RunConfig> {
        let o = Overrides {
            levels: self.levels,
            theta: self.theta.clone(),
            k: self.k.clone(),
            format: self.format.clone(),
            output: self.output.clone(),
            no_timestamp: self.no_timestamp,
            window_margin: self.window_margin.clone(),
            strict_well_distributed: self.strict_well_distributed,
        };
        load_config(&self.config, &o)
    }
}

fn emit(cfg: &RunConfig, report: &RunReport) -> Result<()> {
    let text = match cfg.output.format {
        Format::Json => report.to_json()?,
        Format::Csv => report.to_csv()?,
    };
    match &cfg.output.path {
        Some(p) => write_text(p, &text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn alphabet(spec: &GeneratorSpec) -> Vec<String> {
    match spec {
        GeneratorSpec::BlockSubstitution(s) => s.alphabet().to_vec(),
        GeneratorSpec::Product1d(f) => {
            // tensor symbols are mixed-radix, first factor most significant
            let mut names = vec![String::new()];
            for w in f {
                names = names
                    .iter()
                    .flat_map(|n| w.alphabet().iter().map(move |a| if n.is_empty() { a.clone() } else { format!("{n}{a}") }))
                    .collect();
            }
            names
        }
        GeneratorSpec::LatticeModel { .. } | GeneratorSpec::ExplicitPoints { .. } => vec![".".into(), "x".into()],
    }
}

fn export_generation(cfg: &RunConfig, dir: &Path) -> Result<()> {
    let r = realize_config(cfg)?;
    if let Some(c) = &r.config {
        write_text(&dir.join("grid.txt"), &format_grid(c, &alphabet(&cfg.generator)))?;
    }
    for s in &r.sets {
        let comment = format!("return set {} for cylinder {}", s.level(), s.cylinder_window());
        write_text(&dir.join(format!("R_{}.txt", s.level())), &format_point_set(s.points(), s.window(), Some(&comment)))?;
    }
    Ok(())
}

fn export_hierarchy(cfg: &RunConfig, dir: &Path) -> Result<()> {
    let r = realize_config(cfg)?;
    let run = build_hierarchy(cfg, &r, TieBreak::LexSmallest)?;
    let mut patches = csv::Writer::from_writer(Vec::new());
    let ser = |e: csv::Error| Error::Serialize(e.to_string());
    patches.write_record(["level", "point", "owner"]).map_err(ser)?;
    for level in run.data.levels() {
        let radii = level.returns.require_radii()?;
        let graph = voronoi_neighbors_with(level.returns.base(), radii)?;
        write_text(&dir.join(format!("edges_{}.txt", level.n)), &format_edges(&graph.pairs))?;
        for p in level.partition.points() {
            let owner = level.partition.owner_of(p).expect("partitioned point has an owner");
            let join = |q: &rotfactor_core::Point| q.coords().iter().map(i64::to_string).collect::<Vec<_>>().join(" ");
            patches.write_record([level.n.to_string(), join(p), join(&owner)]).map_err(ser)?;
        }
    }
    let bytes = patches.into_inner().map_err(|e| Error::Serialize(e.to_string()))?;
    write_text(&dir.join("patches.csv"), &String::from_utf8_lossy(&bytes))
}

fn run(cli: Cli) -> Result<()> {
    let (common, command, export) = match &cli.command {
        Sub::Generate { common, export } => (common, Command::Generate, export.as_deref()),
        Sub::Hierarchy { common, export } => (common, Command::Hierarchy, export.as_deref()),
        Sub::Analyze { common } => (common, Command::Analyze, None),
        Sub::Scan { common } => (common, Command::Scan, None),
        Sub::OracleCheck { common } => (common, Command::OracleCheck, None),
    };
    let cfg = common.load()?;
    let report = run_pipeline(&cfg, command)?;
    emit(&cfg, &report)?;
    match (command, export) {
        (Command::Generate, Some(dir)) => export_generation(&cfg, dir)?,
        (Command::Hierarchy, Some(dir)) => export_hierarchy(&cfg, dir)?,
        _ => {}
    }
    if let Some(row) = report.oracle.as_ref().and_then(|t| t.first_failure()) {
        return Err(Error::Oracle {
            check: format!("{} (level {})", row.check, row.level.map_or("-".into(), |l| l.to_string())),
            detail: row.first_mismatch.clone().unwrap_or_default(),
        });
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("rotfactor: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
