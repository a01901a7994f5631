//! Batch driver: every subcommand reads one config file, validates all of its
//! inputs, computes, and only then writes its outputs.

mod commands;
mod config;

use std::path::PathBuf;

use clap::{Parser, Subcommand};
use thiserror::Error;

pub use commands::run;
pub use config::{
    BuildMSection, ConstructSection, CountingSection, ExperimentConfig, KcSection, KtableSection, SettleSection,
    VerifySection,
};

#[derive(Debug, Parser)]
#[command(name = "prefixk", version, about = "Exact prefix-free complexity experiments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Experiment config (TOML); paths inside it are relative to its directory.
    #[arg(long, short, global = true, default_value = "prefixk.toml")]
    pub config: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// K table for every string up to `ktable.max_len`.
    Ktable,
    /// Build the compressor machine for the functional along `build_m.x`.
    BuildM,
    /// Counting-bound grid, constants, symmetry defect.
    Counting,
    /// Run the checkpoint construction and save the trace.
    Construct,
    /// Re-verify a saved trace against the catalog.
    VerifyTrace,
    /// Random online Kraft–Chaitin sessions and the growth-machine demo.
    KcDemo,
    /// Settling-time functional of a stage table.
    Settle,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Validation(String),
    #[error("refused: {0}")]
    Resource(String),
    #[error("property violation: {0}")]
    Property(String),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) | CliError::Io(_) => 2,
            CliError::Resource(_) => 3,
            CliError::Property(_) => 4,
        }
    }
}
