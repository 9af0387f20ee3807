//! Command-line front end for ordlab-core: subcommand dispatch, experiment
//! records and the named reproduction experiments.
//!
//! Exit codes: 0 when the command's check passes, 1 when it fails, 2 on a
//! configuration error.

pub mod args;
pub mod commands;
pub mod input;
pub mod record;
pub mod repro;

use std::time::Instant;

use clap::Parser;
use clap::error::ErrorKind;

pub use args::{Cli, Command, Common, OutputFormat, ReproName};
pub use commands::CommandOutput;
pub use record::{ExperimentRecord, ReplayOutcome, replay};
pub use repro::{ReproConfig, ReproReport, run_repro};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] ordlab_core::Error),
    #[error("{0}")]
    Config(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Run a parsed command, on a dedicated pool when `--threads` is given.
pub fn execute(cli: &Cli) -> Result<CommandOutput, CliError> {
    match cli.common.threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| CliError::Config(format!("thread pool: {e}")))?
            .install(|| commands::dispatch(cli)),
        None => commands::dispatch(cli),
    }
}

/// Parse `argv` (program name first), run, and write a record if `--out`
/// was given.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<String>,
{
    let argv: Vec<String> = argv.into_iter().map(Into::into).collect();
    let fail = |stderr: String| Outcome {
        code: 2,
        stdout: String::new(),
        stderr,
    };
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            return Outcome {
                code: 0,
                stdout: e.to_string(),
                stderr: String::new(),
            };
        }
        Err(e) => return fail(e.to_string()),
    };
    let start = Instant::now();
    let out = match execute(&cli) {
        Ok(out) => out,
        Err(e) => return fail(format!("error: {e}\n")),
    };
    if let Some(path) = &cli.common.out {
        let record = ExperimentRecord {
            command: record::strip_out(argv.get(1..).unwrap_or_default()),
            config: cli.clone(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            output: out.text.clone(),
            reports: out.reports.clone(),
            pass: out.pass,
            wall_clock_ms: start.elapsed().as_millis() as u64,
        };
        if let Err(e) = record.save(path) {
            return fail(format!("error: {e}\n"));
        }
    }
    Outcome {
        code: if out.pass { 0 } else { 1 },
        stdout: out.text,
        stderr: String::new(),
    }
}
