//! `bateman` command-line front end.

mod commands;
mod config;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use bateman::{Approach, BatemanError, Branch};
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] BatemanError),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Core(
                BatemanError::Domain(_)
                | BatemanError::Overdamped { .. }
                | BatemanError::Headroom { .. }
                | BatemanError::SeriesDivergence(_),
            ) => 2,
            _ => 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Default, Args)]
pub struct Common {
    /// Mass.
    #[arg(long, global = true)]
    pub m: Option<f64>,
    /// Damping constant.
    #[arg(long, global = true)]
    pub gamma: Option<f64>,
    /// Spring constant.
    #[arg(long, global = true)]
    pub k: Option<f64>,
    #[arg(long, global = true)]
    pub hbar: Option<f64>,
    /// Fock cutoff per mode.
    #[arg(long = "n-max", global = true)]
    pub n_max: Option<usize>,
    /// Boundary rows excluded from interior comparisons.
    #[arg(long, global = true)]
    pub margin: Option<usize>,
    /// Values of theta + theta* for the norm sweep, comma separated.
    #[arg(long, global = true, value_delimiter = ',', allow_hyphen_values = true)]
    pub theta: Option<Vec<f64>>,
    /// Sign of chi = +-i pi/4 for the imaginary-scaling construction.
    #[arg(long = "chi-sign", global = true, allow_hyphen_values = true)]
    pub chi_sign: Option<Branch>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub branch: Option<Branch>,
    /// Largest n1 + n2 (spectrum) or occupation (classify table).
    #[arg(long = "n-cap", global = true)]
    pub n_cap: Option<usize>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Write to this file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Multiplies every tolerance.
    #[arg(long = "tol-scale", global = true)]
    pub tol_scale: Option<f64>,
    /// Flat TOML file with keys named after the flags.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long = "inject-fault", global = true, hide = true)]
    pub inject_fault: bool,
}

#[derive(Debug, Parser)]
#[command(
    name = "bateman",
    version,
    about = "Two quantizations of the Bateman dual oscillator"
)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ApproachArg {
    Ft,
    Is,
}

impl From<ApproachArg> for Approach {
    fn from(a: ApproachArg) -> Self {
        match a {
            ApproachArg::Ft => Approach::Ft,
            ApproachArg::Is => Approach::Is,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SuiteArg {
    Algebra,
    Ft,
    Is,
    Dynamics,
    All,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact eigenvalue table for n1 + n2 <= n-cap.
    Spectrum {
        #[arg(long, value_enum, default_value = "ft")]
        approach: ApproachArg,
    },
    /// Standard squared norms of the bar basis states across theta + theta*.
    Norms {
        #[arg(long, default_value_t = 0)]
        n1: usize,
        #[arg(long, default_value_t = 0)]
        n2: usize,
    },
    /// Decaying, growing or stable, for one state or a table.
    Classify {
        #[arg(long, value_enum, default_value = "ft")]
        approach: ApproachArg,
        #[arg(long)]
        n1: Option<i64>,
        #[arg(long)]
        n2: Option<i64>,
    },
    /// Time factor of one eigenstate on a uniform grid.
    Evolve {
        #[arg(long, value_enum, default_value = "ft")]
        approach: ApproachArg,
        #[arg(long, default_value_t = 0)]
        n1: i64,
        #[arg(long, default_value_t = 0)]
        n2: i64,
        #[arg(long = "t-max", default_value_t = 10.0)]
        t_max: f64,
        #[arg(long, default_value_t = 100)]
        steps: usize,
    },
    /// Run a verification suite; exit status 1 if any check fails.
    Verify {
        #[arg(value_enum, default_value = "all")]
        suite: SuiteArg,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut common = cli.common;
    let result = (|| {
        if let Some(path) = common.config.clone() {
            config::merge(&mut common, &path)?;
        }
        commands::run(&cli.command, &common)
    })();
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
