//! `landau`: command-line front end writing CSV and JSON reports.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use commands::{
    BumpArgs, CapacityArgs, CountingArgs, DiracArgs, EncircleArgs, IndexArgs, LevelsArgs, ToeplitzArgs, WeylArgs,
};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid config: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] landau_core::Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    /// A check ran to completion and reported failures.
    #[error("{message}")]
    Failed { message: String, report: Value },
}

impl CliError {
    fn exit_code(&self) -> u8 {
        use landau_core::Error as E;
        match self {
            CliError::Config(_) => 2,
            CliError::Core(e) => match e {
                E::InvalidInput(_)
                | E::Unsupported(_)
                | E::InsufficientSmoothness { .. }
                | E::MissingDerivative(_)
                | E::Inadmissible { .. } => 2,
                E::Hypothesis(_) => 4,
                _ => 3,
            },
            CliError::Io(_) => 1,
            CliError::Failed { .. } => 3,
        }
    }

    fn kind(&self) -> String {
        match self {
            CliError::Core(e) => format!("{e:?}").split([' ', '(', '{']).next().unwrap_or("").to_string(),
            CliError::Failed { .. } => "CheckFailed".into(),
            CliError::Config(_) => "Config".into(),
            CliError::Io(_) => "Io".into(),
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "landau", version, about = "Spectral toolkit for perturbed Landau-Dirac operators")]
struct Cli {
    /// JSON file with command parameters; flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Table of Landau-Dirac levels μ_q.
    Levels(LevelsArgs),
    /// Eigenvalues of a Toeplitz operator at one level.
    ToeplitzEig(ToeplitzArgs),
    /// Logarithmic capacity estimate of a compact set.
    Capacity(CapacityArgs),
    /// Scaled eigenvalue sequence (k! ν_k)^{1/k} and its limit fit.
    Weyl(WeylArgs),
    /// Eigenvalue counts against the three-term law.
    Counting(CountingArgs),
    /// Eigenvalues of the truncated Dirac operator near a level.
    Dirac(DiracArgs),
    /// Random trial suites for projection index identities.
    Index(IndexArgs),
    /// Certified radial bump with nonnegative G + ΔG.
    Bump(BumpArgs),
    /// Whether a set Ω surrounds a compact set K.
    Encircle(EncircleArgs),
}

fn run(cli: Cli) -> Result<(), (CliError, &'static str, Value)> {
    let file = match &cli.config {
        Some(p) => Some(config::read_config_file(p).map_err(|e| (e, "config", Value::Null))?),
        None => None,
    };
    let file = file.as_ref();
    match cli.command {
        Command::Levels(a) => commands::levels(a, file),
        Command::ToeplitzEig(a) => commands::toeplitz_eig(a, file),
        Command::Capacity(a) => commands::capacity(a, file),
        Command::Weyl(a) => commands::weyl(a, file),
        Command::Counting(a) => commands::counting(a, file),
        Command::Dirac(a) => commands::dirac(a, file),
        Command::Index(a) => commands::index(a, file),
        Command::Bump(a) => commands::bump(a, file),
        Command::Encircle(a) => commands::encircle(a, file),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err((e, command, cfg)) => {
            let code = e.exit_code();
            if code == 3 {
                let mut diag = json!({
                    "status": "numerical_failure",
                    "kind": e.kind(),
                    "message": e.to_string(),
                    "command": command,
                    "config": cfg,
                    "version": output::VERSION,
                });
                if let CliError::Failed { report, .. } = &e {
                    diag["report"] = report.clone();
                }
                eprintln!("{}", serde_json::to_string_pretty(&diag).unwrap_or_default());
            } else {
                eprintln!("landau {command}: {e}");
            }
            ExitCode::from(code)
        }
    }
}
