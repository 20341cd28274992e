//! Subcommands of the `alchemq` executable.

pub mod commands;
pub mod config;
pub mod error;
pub mod report;

pub use commands::{cmd_integrals, cmd_run, cmd_scan, RunReport};
pub use config::{Overrides, RunConfig};
pub use error::{CliError, Result};
pub use report::{cmd_report, Agreement, Summary};
