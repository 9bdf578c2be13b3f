//! Command-line front end: config loading, subcommands and output.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;

use std::path::PathBuf;

use clap::{Parser, Subcommand};

use config::{Format, Preset, RunConfig};

pub use error::CliError;

/// Sideband emission rates for atoms in periodic motion.
#[derive(Debug, Parser)]
#[command(name = "vibrad", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// TOML run configuration.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// Write results here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,

    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Cross-check closed forms against the numerical oracle.
    #[arg(long, global = true)]
    pub verify: bool,

    /// Highest sideband index for `spectrum`.
    #[arg(long, global = true)]
    pub n_max: Option<u32>,

    /// Seed for the randomised oracle suite.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Rate of the single sideband selected in [run].
    Rate,
    /// All allowed sidebands up to n_max.
    Spectrum,
    /// Rate surface over a two-parameter grid.
    Sweep {
        #[arg(long, value_enum)]
        preset: Option<Preset>,
    },
    /// Selection-rule and closed-form equivalence self-check.
    Oracle {
        /// Random configurations in the equivalence check.
        #[arg(long, default_value_t = 200)]
        draws: usize,
    },
}

/// Rendered output plus where it should go.
pub struct Rendered {
    pub text: String,
    pub path: Option<PathBuf>,
}

pub fn load_config(cli: &Cli) -> Result<RunConfig, CliError> {
    let mut cfg = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
            toml::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?
        }
        None => RunConfig::default(),
    };
    if let Some(n_max) = cli.n_max {
        cfg.run.n_max = n_max;
    }
    if let Some(seed) = cli.seed {
        cfg.run.seed = seed;
    }
    if cli.verify {
        cfg.run.verify = true;
    }
    if let Some(format) = cli.format {
        cfg.output.format = format;
    }
    if let Some(path) = &cli.output {
        cfg.output.path = Some(path.clone());
    }
    Ok(cfg)
}

/// Runs a command. An oracle report with failures is still rendered; the
/// failure is returned alongside so the caller can print it and exit 4.
pub fn execute(cli: &Cli) -> Result<(Rendered, Option<CliError>), CliError> {
    let cfg = load_config(cli)?;
    let format = cfg.output.format;
    let verify = cfg.run.verify;
    let mut failure = None;
    let text = match &cli.command {
        Command::Rate => {
            let line = commands::rate(&cfg, verify)?;
            match format {
                Format::Csv => output::spectrum_csv(std::slice::from_ref(&line)),
                Format::Json => output::json(&line),
            }
        }
        Command::Spectrum => {
            let lines = commands::spectrum(&cfg, verify)?;
            match format {
                Format::Csv => output::spectrum_csv(&lines),
                Format::Json => output::json(&lines),
            }
        }
        Command::Sweep { preset } => {
            let preset = preset
                .or(cfg.sweep.as_ref().map(|s| s.preset))
                .unwrap_or(Preset::Fig2);
            let result = commands::sweep(&cfg, preset)?;
            match format {
                Format::Csv => output::sweep_csv(&result),
                Format::Json => output::json(&result),
            }
        }
        Command::Oracle { draws } => {
            let report = commands::oracle_suite(cfg.run.seed, *draws)?;
            if !report.pass() {
                let failed: Vec<&str> = report.checks.iter().filter(|c| !c.pass).map(|c| c.name).collect();
                failure = Some(CliError::Integrity(format!(
                    "failed checks: {}",
                    failed.join(", ")
                )));
            }
            match format {
                Format::Csv => output::oracle_csv(&report),
                Format::Json => output::json(&report),
            }
        }
    };
    Ok((
        Rendered {
            text,
            path: cfg.output.path.clone(),
        },
        failure,
    ))
}

pub fn emit(rendered: &Rendered) -> Result<(), CliError> {
    match &rendered.path {
        Some(path) => std::fs::write(path, &rendered.text)?,
        None => {
            use std::io::Write;
            match std::io::stdout().write_all(rendered.text.as_bytes()) {
                Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => {}
                other => other?,
            }
        }
    }
    Ok(())
}
