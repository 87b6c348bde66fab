use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use ctap_cli::{run, CommandKind, Outcome, Overrides, RunManifest};

/// Simulate adiabatic charge transport across a quantum-dot chain and
/// emit CSV data files with provenance sidecars.
#[derive(Debug, Parser)]
#[command(name = "ctap", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Integrate one trajectory and write sampled populations.
    Simulate(CommonArgs),
    /// Write the instantaneous eigenvalue spectrum along the pulse.
    Spectrum(CommonArgs),
    /// Evaluate an observable over a parameter grid ([sweep] table).
    Sweep(CommonArgs),
    /// Find the pulse time maximizing the transfer probability.
    Optimize(CommonArgs),
    /// Score control errors against pulse time ([miscalibrate] table).
    Miscalibrate(CommonArgs),
    /// Compare adiabatic and exchange-sequence transfer times.
    SwapCompare(CommonArgs),
}

impl Command {
    fn kind(&self) -> CommandKind {
        match self {
            Command::Simulate(_) => CommandKind::Simulate,
            Command::Spectrum(_) => CommandKind::Spectrum,
            Command::Sweep(_) => CommandKind::Sweep,
            Command::Optimize(_) => CommandKind::Optimize,
            Command::Miscalibrate(_) => CommandKind::Miscalibrate,
            Command::SwapCompare(_) => CommandKind::SwapCompare,
        }
    }

    fn args(&self) -> &CommonArgs {
        match self {
            Command::Simulate(a)
            | Command::Spectrum(a)
            | Command::Sweep(a)
            | Command::Optimize(a)
            | Command::Miscalibrate(a)
            | Command::SwapCompare(a) => a,
        }
    }
}

#[derive(Debug, Args)]
struct CommonArgs {
    /// TOML configuration file.
    #[arg(long, value_name = "PATH")]
    config: PathBuf,

    /// Output directory (created if absent).
    #[arg(long, value_name = "DIR")]
    out: PathBuf,

    /// Worker threads for grid evaluation.
    #[arg(long, value_name = "K")]
    workers: Option<usize>,

    /// Trajectory samples, overriding the config.
    #[arg(long, value_name = "M")]
    samples: Option<usize>,

    /// Total pulse time in pi/omega_max units, overriding the config.
    #[arg(long, value_name = "T")]
    tmax: Option<f64>,

    /// Dephasing rate, overriding the config.
    #[arg(long, value_name = "G")]
    gamma: Option<f64>,

    /// Chain length, overriding the config.
    #[arg(long, value_name = "N")]
    n: Option<usize>,
}

impl CommonArgs {
    fn overrides(&self) -> Overrides {
        Overrides {
            workers: self.workers,
            samples: self.samples,
            t_max_pi: self.tmax,
            gamma: self.gamma,
            n_dqd: self.n,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let args = cli.command.args();
    let manifest = RunManifest::new(cli.command.kind(), args.config.clone(), args.out.clone());
    match run(&manifest, &args.overrides()) {
        Ok(Outcome::Complete) => ExitCode::SUCCESS,
        Ok(Outcome::Partial { failed_points }) => {
            eprintln!(
                "{}",
                serde_json::json!({
                    "status": "partial",
                    "failed_points": failed_points,
                })
            );
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("{}", e.machine_summary());
            ExitCode::FAILURE
        }
    }
}
