//! Configuration, reports, brute-force oracles and the command-line
//! pipeline around `rotfactor-core`.

pub mod config;
pub mod error;
pub mod io;
pub mod oracle;
pub mod pipeline;
pub mod report;

pub use config::{load_config, parse_config, Overrides, RunConfig};
pub use error::{Error, Result};
pub use pipeline::{run_pipeline, Command};
pub use report::RunReport;
