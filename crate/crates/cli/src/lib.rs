//! Command-line front end for the adiabatic-transport simulator.
//!
//! Every invocation reads one TOML config file, runs one command, and
//! writes a CSV data file with a `key = value` metadata sidecar into the
//! output directory. The simulator is deterministic, so identical inputs
//! produce byte-identical data files. See the crate README for the config
//! schema and the column layout of each output.

pub mod commands;
pub mod config_file;
pub mod error;
pub mod manifest;
pub mod output;

pub use commands::{run, Outcome, Overrides};
pub use config_file::FileConfig;
pub use error::{CliError, Result};
pub use manifest::{CommandKind, RunManifest};
