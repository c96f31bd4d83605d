//! `frft-stoch`: generate, transform and analyze stochastic ensembles.
//!
//! Every subcommand reads one JSON config (`--config`); `--seed`, `--order`,
//! `--out` and `--tol-sigma` override the matching config fields.
//! `FRFT_STOCH_THREADS` caps the worker pool. Exit codes: 0 success,
//! 2 invalid input, 3 numerical failure, 4 I/O failure.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::{ExperimentConfig, Overrides};

#[derive(Debug)]
pub enum CliError {
    Validation(String),
    Io(String),
    Core(frft_stoch::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Io(_) => 4,
            CliError::Core(e) if e.is_numerical() => 3,
            CliError::Core(e) if e.is_io() => 4,
            CliError::Core(_) => 2,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Validation(m) => write!(f, "invalid input: {m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl From<frft_stoch::Error> for CliError {
    fn from(e: frft_stoch::Error) -> Self {
        CliError::Core(e)
    }
}

#[derive(Parser)]
#[command(name = "frft-stoch", version, about = "Stationarity experiments in fractional Fourier domains")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Experiment config (JSON).
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    seed: Option<u64>,
    /// Fractional order `a`; the angle is `a·π/2`.
    #[arg(long, allow_negative_numbers = true)]
    order: Option<f64>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Deviation threshold, in standard errors, for the stationarity checks.
    #[arg(long)]
    tol_sigma: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Draw an ensemble from the configured model.
    Gen(Common),
    /// Apply the configured transform to every realization of an ensemble.
    Transform {
        #[command(flatten)]
        common: Common,
        /// Ensemble manifest; defaults to `input` or `<out>/ensemble.json`.
        ensemble: Option<PathBuf>,
    },
    /// Ensemble statistics and the stationarity verdict.
    Estimate {
        #[command(flatten)]
        common: Common,
        /// Ensemble manifest; defaults to `input`, then `<out>/transformed.json`.
        ensemble: Option<PathBuf>,
    },
    /// Predicted statistics of the transformed process.
    Theory(Common),
    /// Generate, transform, estimate and compare against theory.
    Verify(Common),
}

fn load(common: &Common) -> Result<ExperimentConfig, CliError> {
    let mut cfg = ExperimentConfig::load(&common.config)?;
    cfg.apply(&Overrides {
        seed: common.seed,
        order: common.order,
        out: common.out.clone(),
        tol_sigma: common.tol_sigma,
    });
    cfg.validate()?;
    Ok(cfg)
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(v) = std::env::var("FRFT_STOCH_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Validation(format!("FRFT_STOCH_THREADS must be a positive integer, got {v:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Validation(e.to_string()))
}

fn run(cli: Cli) -> Result<commands::Artifacts, CliError> {
    configure_threads()?;
    match cli.command {
        Command::Gen(c) => commands::gen(&load(&c)?),
        Command::Transform { common, ensemble } => commands::transform(&load(&common)?, ensemble.as_deref()),
        Command::Estimate { common, ensemble } => commands::estimate(&load(&common)?, ensemble.as_deref()),
        Command::Theory(c) => commands::theory(&load(&c)?),
        Command::Verify(c) => commands::verify(&load(&c)?),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(art) => {
            for f in &art.files {
                println!("{f}");
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
