use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use qmitm_cli::cli::Cli;
use qmitm_cli::{run, OUT_DIR_ENV};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out_dir = std::env::var_os(OUT_DIR_ENV).map(PathBuf::from);
    match run(&cli, out_dir.as_deref()) {
        Ok(out) => {
            if let Some(path) = out.path {
                eprintln!("wrote {}", path.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
