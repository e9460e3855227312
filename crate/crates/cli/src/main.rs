use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod commands;

/// Verification batteries and radial solver runs on hyperboloidal foliations.
#[derive(Debug, Parser)]
#[command(name = "hyperfoil", version)]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Global {
    /// TOML config file; defaults are used when omitted.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Override a config key, e.g. `--set dr=0.02` (repeatable).
    #[arg(long = "set", value_name = "KEY=VALUE", global = true)]
    pub overrides: Vec<String>,
    /// Output directory for reports.
    #[arg(
        long,
        env = "HYPERFOIL_OUT",
        default_value = "hyperfoil-out",
        global = true
    )]
    pub out: PathBuf,
    /// Seed for every random choice; overrides the config value.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Validate inputs and exit without computing.
    #[arg(long, global = true)]
    pub dry_run: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the commutator identity battery on the closed-form test fields.
    Commutators {
        /// Print the identity ids and exit.
        #[arg(long)]
        list: bool,
        /// Residual threshold.
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        /// Sample points per identity.
        #[arg(long, default_value_t = 100)]
        points: usize,
    },
    /// Check a coefficient tensor file for the null and weak null conditions.
    Nullcheck {
        file: PathBuf,
        /// Relative tolerance against the coefficient scale.
        #[arg(long, default_value_t = hyperfoil::nullcond::DEFAULT_NULL_TOL)]
        tol: f64,
        /// Sampled null covectors.
        #[arg(long, default_value_t = 200)]
        samples: usize,
        /// Sampled directions for the weak null frame.
        #[arg(long, default_value_t = 100)]
        directions: usize,
    },
    /// Evolve the configured system and write run.csv, slices.csv, decay.csv and decay.svg.
    Simulate,
    /// Evolve and report hyperboloidal energies and the energy inequality margin.
    Energy {
        /// Smallest accepted inequality margin.
        #[arg(long, default_value_t = -0.02, allow_negative_numbers = true)]
        min_margin: f64,
    },
    /// Evolve and fit decay exponents of the slice suprema.
    Decay,
    /// Sobolev ratio of the fixed profiles across the T ladder.
    Sobolev {
        /// Largest accepted relative variation per profile.
        #[arg(long, default_value_t = 0.2)]
        max_variation: f64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::dispatch(&cli) {
        Ok(code) => code.into(),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(commands::exit_code_for(&err))
        }
    }
}
