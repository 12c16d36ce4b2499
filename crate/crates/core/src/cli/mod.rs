//! Command-line front end.
//!
//! Exit codes: 0 success, 2 configuration error, 3 physics-domain error.
//! Failures print one machine-parsable line to stderr:
//! `error: kind=<config|physics|io> code=<n> message="..."`.

mod commands;
pub mod config;
pub mod presets;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand};

use crate::error::Error;
pub use commands::{run_command, RunContext};
pub use config::SceneConfig;

#[derive(Debug, Parser)]
#[command(name = "bendbeam", version, about = "Near-field bending beams: design, propagation and secrecy analysis")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// JSON scene configuration
    #[arg(long, global = true, conflicts_with = "preset")]
    pub config: Option<PathBuf>,

    /// Built-in figure preset (fig1, fig2a, ..., fig5f)
    #[arg(long, global = true)]
    pub preset: Option<String>,

    /// Output directory
    #[arg(long, global = true, default_value = ".")]
    pub out: PathBuf,

    /// Worker threads (default: all cores). Outputs do not depend on it.
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// Monte-Carlo seed, overriding the config
    #[arg(long, global = true)]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Design a trajectory towards the receiver and write the phase table
    Design,
    /// Propagate the beam over a grid and write CSV + PGM heatmaps
    FieldMap,
    /// Secrecy rate for an eavesdropper on the Tx-Rx line of sight
    Los,
    /// Power at the receiver and LoS secrecy versus curvature
    BetaSweep,
    /// Monte-Carlo coverage probability for a disk eavesdropper
    Coverage,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Design => "design",
            Command::FieldMap => "field-map",
            Command::Los => "los",
            Command::BetaSweep => "beta-sweep",
            Command::Coverage => "coverage",
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error(transparent)]
    Physics(Error),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        if e.is_parameter_error() {
            CliError::Config(e.to_string())
        } else {
            CliError::Physics(e)
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Io(_) => 2,
            CliError::Physics(_) => 3,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::Config(_) => "config",
            CliError::Physics(_) => "physics",
            CliError::Io(_) => "io",
        }
    }

    pub fn report_line(&self) -> String {
        let msg = self.to_string().replace('\\', "\\\\").replace('"', "\\\"");
        format!("error: kind={} code={} message=\"{}\"", self.kind(), self.exit_code(), msg)
    }
}

/// Loads the scene named by `--config` or `--preset`, applying `--seed`.
pub fn load_scene(cli: &Cli) -> Result<(SceneConfig, Option<String>), CliError> {
    let mut cfg = match (&cli.config, &cli.preset) {
        (Some(path), None) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
            SceneConfig::from_json(&text)?
        }
        (None, Some(name)) => presets::preset(name).ok_or_else(|| {
            CliError::Config(format!(
                "unknown preset `{name}`; available: {}",
                presets::PRESET_NAMES.join(", ")
            ))
        })?,
        _ => return Err(CliError::Config("give exactly one of --config or --preset".into())),
    };
    if let Some(seed) = cli.seed {
        cfg.pls.seed = seed;
    }
    Ok((cfg, cli.preset.clone()))
}

pub fn run(cli: &Cli) -> Result<(), CliError> {
    let (cfg, preset) = load_scene(cli)?;
    let ctx = RunContext {
        out_dir: cli.out.clone(),
        preset,
    };
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(CliError::Config("--threads must be >= 1".into()));
        }
        pool = pool.num_threads(n);
    }
    let pool = pool
        .build()
        .map_err(|e| CliError::Config(format!("cannot start thread pool: {e}")))?;
    let report = pool.install(|| run_command(cli.command, &cfg, &ctx))?;
    print!("{report}");
    Ok(())
}

/// Parses `args` (including the program name) and runs; returns the exit code.
pub fn main_with_args<I, A>(args: I) -> i32
where
    I: IntoIterator<Item = A>,
    A: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("{}", e.report_line());
            e.exit_code()
        }
    }
}
