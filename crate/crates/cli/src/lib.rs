//! Command-line front end for the `qmitm` toolkit.
//!
//! A run loads a JSON [`config::ScenarioConfig`], applies flag overrides,
//! validates every value and only then computes. Results go to the configured
//! output (or standard output) as CSV or as a JSON [`report::RunReport`].

pub mod cli;
pub mod commands;
pub mod config;
pub mod error;
pub mod number;
pub mod report;
pub mod table;
pub mod verify;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use cli::{Cli, Command};
use config::{Format, ScenarioConfig};
use error::{CliError, CliResult};
use report::RunReport;

/// Relative output paths are resolved against this directory when it is set.
pub const OUT_DIR_ENV: &str = "QMITM_OUT_DIR";

/// What a finished run produced.
#[derive(Debug)]
pub struct RunOutput {
    pub report: RunReport,
    /// The rendered output, exactly as written.
    pub rendered: String,
    pub path: Option<PathBuf>,
}

fn default_format(command: &str) -> Format {
    match command {
        "roc" | "photon-sweep" => Format::Csv,
        _ => Format::Json,
    }
}

pub fn resolve_output(path: &Path, out_dir: Option<&Path>) -> PathBuf {
    match out_dir {
        Some(dir) if path.is_relative() => dir.join(path),
        _ => path.to_path_buf(),
    }
}

/// Runs a command on an already parsed configuration and renders the output
/// without writing it.
pub fn execute(command: &Command, mut config: ScenarioConfig) -> CliResult<(RunReport, String)> {
    let (name, args) = command.parts();
    let start = Instant::now();
    config.apply(&args.overrides());
    let validated = config.validate()?;
    let emission = match command {
        Command::Detect(_) => commands::detect(&validated)?,
        Command::Attack(_) => commands::attack(&validated)?,
        Command::Roc(_) => commands::roc(&validated)?,
        Command::PhotonSweep(_) => commands::photon(&validated)?,
        Command::Verify(_) => verify::verify(&validated)?,
    };
    let format = validated
        .output
        .format
        .unwrap_or_else(|| default_format(name));
    let report = RunReport {
        command: name.to_string(),
        version: qmitm::VERSION.to_string(),
        config,
        results: emission.results,
        summary: emission.summary,
        wall_clock_seconds: start.elapsed().as_secs_f64(),
    };
    let rendered = match format {
        Format::Csv => emission.table.to_csv()?,
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&report).expect("report serializes");
            s.push('\n');
            s
        }
    };
    Ok((report, rendered))
}

/// Full run: load, execute, write. A failed invariant check is reported as
/// [`CliError::Verification`] after the output has been written.
pub fn run(cli: &Cli, out_dir: Option<&Path>) -> CliResult<RunOutput> {
    let (_, args) = cli.command.parts();
    let config = ScenarioConfig::load(&args.config)?;
    let (report, rendered) = execute(&cli.command, config)?;
    let path = report
        .config
        .output
        .as_ref()
        .and_then(|o| o.path.as_deref())
        .map(|p| resolve_output(p, out_dir));
    match &path {
        Some(p) => {
            if let Some(parent) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                std::fs::create_dir_all(parent).map_err(|source| CliError::Io {
                    path: parent.to_path_buf(),
                    source,
                })?;
            }
            std::fs::write(p, rendered.as_bytes()).map_err(|source| CliError::Io {
                path: p.clone(),
                source,
            })?
        }
        None => std::io::stdout()
            .lock()
            .write_all(rendered.as_bytes())
            .map_err(|source| CliError::Io {
                path: "<stdout>".into(),
                source,
            })?,
    }
    let failures = report.summary.failures();
    if !failures.is_empty() {
        let names: Vec<String> = failures
            .iter()
            .map(|c| format!("{} ({})", c.name, c.detail))
            .collect();
        return Err(CliError::Verification(names.join("; ")));
    }
    Ok(RunOutput {
        report,
        rendered,
        path,
    })
}
