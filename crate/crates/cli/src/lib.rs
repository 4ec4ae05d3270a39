//! Command-line front end for the `coamen` toolkit: configuration, dispatch
//! and JSON/CSV reporting.

pub mod config;
mod error;
mod report;
mod run;

pub use config::{Cli, ModelConfig, RunConfig};
pub use error::{CliError, CliResult};
pub use report::{Details, Fingerprint, RunReport, ValidateReport};
pub use run::{run, validate, write_outputs};

/// Version of the report and error document layout.
pub const SCHEMA: u32 = 1;
