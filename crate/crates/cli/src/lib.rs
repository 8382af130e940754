//! Batch driver for pilot-wave experiments.
//!
//! Every command reads an [`ExperimentConfig`] and writes into one output
//! directory, starting with a `config-echo.toml` of the parsed
//! configuration.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;
pub mod system;

pub use config::ExperimentConfig;
pub use error::{CliError, CliResult};
pub use output::RunContext;
