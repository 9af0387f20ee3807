//! Experiment records: everything needed to rerun a command and compare.

use std::path::Path;

use clap::Parser;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::args::Cli;
use crate::{CliError, execute};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentRecord {
    /// Arguments after the program name, without `--out`.
    pub command: Vec<String>,
    /// The parsed configuration, defaults filled in.
    pub config: Cli,
    pub version: String,
    /// Exact standard output of the run.
    pub output: String,
    pub reports: Value,
    pub pass: bool,
    pub wall_clock_ms: u64,
}

/// Drop `--out PATH` and `--out=PATH` from an argument list.
pub fn strip_out(args: &[String]) -> Vec<String> {
    let mut out = Vec::with_capacity(args.len());
    let mut skip = false;
    for a in args {
        if skip {
            skip = false;
        } else if a == "--out" {
            skip = true;
        } else if !a.starts_with("--out=") {
            out.push(a.clone());
        }
    }
    out
}

impl ExperimentRecord {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::Config(format!("record: {e}")))
    }

    pub fn save(&self, path: &Path) -> Result<(), CliError> {
        let text = serde_json::to_string_pretty(self).map_err(|e| CliError::Config(e.to_string()))?;
        std::fs::write(path, text + "\n").map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReplayOutcome {
    pub identical: bool,
    pub output: String,
}

/// Rerun the recorded command and compare its output and reports with the
/// record, byte for byte.
pub fn replay(record: &ExperimentRecord) -> Result<ReplayOutcome, CliError> {
    let argv = std::iter::once("ordlab".to_string()).chain(record.command.iter().cloned());
    let cli = Cli::try_parse_from(argv).map_err(|e| CliError::Config(e.to_string()))?;
    let out = execute(&cli)?;
    Ok(ReplayOutcome {
        identical: out.text == record.output && out.reports == record.reports && out.pass == record.pass,
        output: out.text,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strips_out_flag() {
        let args: Vec<String> = ["repro", "--out", "r.json", "mod1-P3", "--out=x", "--seed", "3"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        assert_eq!(strip_out(&args), vec!["repro", "mod1-P3", "--seed", "3"]);
    }
}
