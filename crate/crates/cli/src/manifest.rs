use std::fmt;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};

/// The six things the tool can do.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CommandKind {
    Simulate,
    Spectrum,
    Sweep,
    Optimize,
    Miscalibrate,
    SwapCompare,
}

impl CommandKind {
    /// Stem of the data file this command writes, e.g. `trajectory.csv`.
    pub fn output_stem(self) -> &'static str {
        match self {
            CommandKind::Simulate => "trajectory",
            CommandKind::Spectrum => "spectrum",
            CommandKind::Sweep => "sweep",
            CommandKind::Optimize => "optimize",
            CommandKind::Miscalibrate => "miscalibrate",
            CommandKind::SwapCompare => "comparison",
        }
    }
}

impl fmt::Display for CommandKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            CommandKind::Simulate => "simulate",
            CommandKind::Spectrum => "spectrum",
            CommandKind::Sweep => "sweep",
            CommandKind::Optimize => "optimize",
            CommandKind::Miscalibrate => "miscalibrate",
            CommandKind::SwapCompare => "swap-compare",
        };
        f.write_str(name)
    }
}

/// One complete invocation, recorded verbatim in every metadata sidecar.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: CommandKind,
    pub config_path: PathBuf,
    pub output_dir: PathBuf,
    /// Always true: the simulator is deterministic and draws no random
    /// numbers, recorded for provenance.
    pub seedless: bool,
    pub tool_version: String,
}

impl RunManifest {
    pub fn new(command: CommandKind, config_path: PathBuf, output_dir: PathBuf) -> Self {
        Self {
            command,
            config_path,
            output_dir,
            seedless: true,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }
}
