//! Experiment driver for the `esdg` solvers.

pub mod commands;
pub mod config;
pub mod snapshot;

pub use commands::CliError;
pub use config::{ConfigError, DiagnoseConfig, RunConfig, SweepConfig};
pub use snapshot::Snapshot;
