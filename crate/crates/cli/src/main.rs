//! `levylab`: batch runner for spectral, Monte Carlo and ground-state domination experiments.
//!
//! Exit codes: 0 success, 1 i/o failure, 2 configuration error or unknown id,
//! 3 numerical failure, 4 verify mismatch.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use levylab::Error;

use config::{ExperimentConfig, Format};
use output::{sha256_hex, Sink, Stamp};

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Numerical(Error),
    Mismatch(String),
    Io(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidParameter { .. }
            | Error::UnknownModel(_)
            | Error::UnknownPotential(_)
            | Error::Precondition(_)
            | Error::SizeCap(_)
            | Error::EmptyWindow => CliError::Config(e.to_string()),
            Error::Io(s) => CliError::Io(s),
            other => CliError::Numerical(other),
        }
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Io(_) => 1,
            CliError::Config(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Mismatch(_) => 4,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "configuration error: {m}"),
            CliError::Numerical(e) => write!(f, "numerical failure: {e}"),
            CliError::Mismatch(m) => write!(f, "verification failed: {m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "levylab",
    version,
    about = "Schrödinger operators with jump Lévy kinetic terms: batch experiments"
)]
struct Cli {
    /// TOML experiment file; built-in defaults apply when omitted
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// output directory (overrides `output.dir`)
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Monte Carlo seed (overrides `run.seed`)
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// worker threads; results do not depend on it
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, Subcommand)]
enum Command {
    /// List the model catalog with default parameters
    Catalog,
    /// Symbol quadrature, jump-paring, comparability and integrability checks for one model
    CheckModel,
    /// Analytic contractivity verdicts over a grid of potential exponents
    Classify,
    /// Ground state on every configured box
    Groundstate,
    /// Free heat kernel at every configured time
    Heatkernel,
    /// `T_t 1` at every configured time
    Propagate,
    /// Feynman-Kac Monte Carlo estimate of `T_t 1(x0)`
    McFk,
    /// Box-growth scan of `‖u_t‖` in `L^p(φ₀²)`
    GsdScan,
    /// Built-in acceptance suite
    Verify,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::Catalog => "catalog",
            Command::CheckModel => "check-model",
            Command::Classify => "classify",
            Command::Groundstate => "groundstate",
            Command::Heatkernel => "heatkernel",
            Command::Propagate => "propagate",
            Command::McFk => "mc-fk",
            Command::GsdScan => "gsd-scan",
            Command::Verify => "verify",
        }
    }
}

fn resolve(cli: &Cli) -> Result<ExperimentConfig, CliError> {
    let mut cfg = match &cli.config {
        Some(path) => ExperimentConfig::load(path)?,
        None => ExperimentConfig::default(),
    };
    if let Some(out) = &cli.out {
        cfg.output.dir = out.display().to_string();
    }
    if let Some(seed) = cli.seed {
        cfg.run.seed = Some(seed);
    }
    if let Some(format) = cli.format {
        cfg.output.format = format;
    }
    cfg.validate()?;
    Ok(cfg)
}

/// Hash of the resolved inputs; the output directory does not take part.
/// The config as recorded in the manifest: the output directory is left out so that reruns into
/// different directories stay byte-identical.
fn recorded(cfg: &ExperimentConfig) -> serde_json::Value {
    let mut kept = cfg.clone();
    kept.output.dir.clear();
    serde_json::to_value(kept).expect("config serialises")
}

fn config_hash(config: &serde_json::Value, command: &str) -> String {
    let body = serde_json::json!({ "command": command, "config": config });
    sha256_hex(body.to_string().as_bytes())
}

fn run(cli: Cli) -> Result<(), CliError> {
    let cfg = resolve(&cli)?;
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(CliError::Config("--threads must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Config(format!("thread pool: {e}")))?;
    }
    let command = cli.command.name();
    let config = recorded(&cfg);
    let stamp = Stamp {
        command: command.to_string(),
        config_hash: config_hash(&config, command),
        seed: cfg.run.seed,
    };
    let mut sink = Sink::new(
        std::path::Path::new(&cfg.output.dir),
        cfg.output.format,
        stamp,
    )?;
    let outcome = match cli.command {
        Command::Catalog => commands::catalog(&mut sink),
        Command::CheckModel => commands::check_model(&cfg, &mut sink),
        Command::Classify => commands::classify(&cfg, &mut sink),
        Command::Groundstate => commands::groundstate(&cfg, &mut sink),
        Command::Heatkernel => commands::heatkernel(&cfg, &mut sink),
        Command::Propagate => commands::propagate(&cfg, &mut sink),
        Command::McFk => commands::mc_fk(&cfg, &mut sink),
        Command::GsdScan => commands::gsd_scan(&cfg, &mut sink),
        Command::Verify => commands::verify(&mut sink),
    }?;
    let manifest = sink.finish(&config, outcome.result)?;
    eprintln!("wrote {}", manifest.display());
    match outcome.mismatch {
        Some(m) => Err(CliError::Mismatch(m)),
        None => Ok(()),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("levylab: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
