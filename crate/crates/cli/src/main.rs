//! `polydiv`: resolutions, degree bounds and division certificates for
//! polynomial ideals, and numerical checks of the integral kernels.
//!
//! Exit status: 0 on success, 1 for input errors, 2 when no certificate was
//! found or a check failed.

mod commands;
mod problem;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use polydiv_core::bounds::CInfChoice;

use crate::commands::{DivisionFlags, Report};
use crate::problem::{parse_problem, ProblemFile};

#[derive(Parser)]
#[command(name = "polydiv", version, about = "Effective division with degree bounds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Debug)]
struct DivisionArgs {
    /// Starting `mu0`; escalation raises it up to `mu0_cap`.
    #[arg(long)]
    mu0: Option<u32>,
    #[arg(long)]
    mu_prime: Option<u32>,
    /// `auto`, `neg-inf` or a nonnegative integer.
    #[arg(long)]
    c_inf: Option<CInfChoice>,
    /// Use the bound for smooth varieties.
    #[arg(long)]
    smooth: bool,
    /// Solve at this degree only, skipping the bound computation.
    #[arg(long, allow_negative_numbers = true)]
    rho: Option<i64>,
}

impl From<&DivisionArgs> for DivisionFlags {
    fn from(a: &DivisionArgs) -> Self {
        DivisionFlags { mu0: a.mu0, mu_prime: a.mu_prime, c_inf: a.c_inf, smooth: a.smooth, rho: a.rho }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Minimal free resolution of the projective closure of the variety.
    Resolve { file: PathBuf },
    /// Degree bounds for a division problem or for explicit parameters.
    Bound {
        file: PathBuf,
        #[command(flatten)]
        flags: DivisionArgs,
    },
    /// Certificate `sum F_j Q_j = phi` on the variety.
    Divide {
        file: PathBuf,
        #[command(flatten)]
        flags: DivisionArgs,
    },
    /// Certificate `sum F_j Q_j = 1` on the variety.
    Nullsatz {
        file: PathBuf,
        #[command(flatten)]
        flags: DivisionArgs,
    },
    /// Seeded pointwise checks of the kernel identities.
    KernelCheck {
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Numerical quotients on a plane curve at sample points.
    KernelDivide {
        file: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Quadrature configuration as JSON.
        #[arg(long)]
        config: Option<PathBuf>,
    },
}

fn load(path: &Path) -> Result<ProblemFile> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_problem(&text).with_context(|| path.display().to_string())
}

fn run(cli: &Cli) -> Result<Report> {
    match &cli.command {
        Command::Resolve { file } => commands::resolve(&load(file)?),
        Command::Bound { file, flags } => commands::bound(&load(file)?, &flags.into()),
        Command::Divide { file, flags } => commands::divide(&load(file)?, &flags.into()),
        Command::Nullsatz { file, flags } => commands::nullsatz(&load(file)?, &flags.into()),
        Command::KernelCheck { seed } => commands::kernel_check(*seed),
        Command::KernelDivide { file, seed, config } => {
            let cfg = commands::load_config(config.as_deref())?;
            commands::kernel_divide(&load(file)?, &cfg, *seed)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            let text = serde_json::to_string_pretty(&report.json).expect("serializable");
            if let Err(e) = writeln!(std::io::stdout(), "{text}") {
                if e.kind() != std::io::ErrorKind::BrokenPipe {
                    eprintln!("error: writing output: {e}");
                    return ExitCode::from(1);
                }
            }
            if report.success {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
