//! `rbw` — experiment runner.
//!
//! `rbw run <experiment> --config <file> [--seed S] [--trials N]
//! [--out DIR] [--format csv|json]` executes one named experiment and
//! writes its report; `rbw list` prints the registry. `RBW_THREADS`
//! caps the worker pool (default: all cores). Exit codes: 0 success,
//! 2 config error, 3 runtime error.

mod config;
mod error;
mod experiments;
mod registry;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crate::config::{load_config_file, validate, ConfigDraft, ReportFormat};
use crate::error::CliError;

#[derive(Parser)]
#[command(name = "rbw", version, about = "Symmetry-first quantum experiment runner")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment and write its report files.
    Run {
        /// Experiment name; see `rbw list`.
        experiment: String,
        /// TOML config file with parameters and defaults.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Random seed (overrides the config file).
        #[arg(long)]
        seed: Option<u64>,
        /// Trial count (overrides the config file).
        #[arg(long)]
        trials: Option<u64>,
        /// Output directory (default: reports).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Report format: csv or json.
        #[arg(long)]
        format: Option<String>,
    },
    /// List experiments with their parameter schemas.
    List,
}

fn thread_cap() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("RBW_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw.parse().map_err(|_| {
        CliError::Config(format!(
            "RBW_THREADS: expected a positive integer, got \"{raw}\""
        ))
    })?;
    if threads == 0 {
        return Err(CliError::Config(
            "RBW_THREADS: thread cap must be at least 1".to_string(),
        ));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::Runtime(format!("thread pool: {e}")))
}

fn run(cli: Cli) -> Result<(), CliError> {
    thread_cap()?;
    match cli.command {
        Command::List => {
            print!("{}", registry::listing());
            Ok(())
        }
        Command::Run {
            experiment,
            config,
            seed,
            trials,
            out,
            format,
        } => {
            let mut draft = match config {
                Some(path) => load_config_file(&path)?,
                None => ConfigDraft::default(),
            };
            if let Some(seed) = seed {
                draft.seed = Some(seed);
            }
            if let Some(trials) = trials {
                draft.trials = Some(trials);
            }
            if let Some(out) = out {
                draft.out_dir = Some(out);
            }
            if let Some(format) = format {
                draft.format = Some(ReportFormat::parse(&format)?);
            }
            let resolved = validate(&experiment, draft)?;
            let report = experiments::run_experiment(&resolved)?;
            let written = report::emit_report(&report, &resolved)?;
            for path in &written {
                println!("wrote {}", path.display());
            }
            eprintln!(
                "{} finished in {:.3} s",
                resolved.experiment,
                report.duration.as_secs_f64()
            );
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("{err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
