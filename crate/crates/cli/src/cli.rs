use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::config::{Format, Overrides};

#[derive(Debug, Parser)]
#[command(
    name = "qmitm",
    version,
    about = "Adversarial quantum hypothesis testing experiments"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Helstrom measurement: projector spectrum, rates and Bayes risk.
    Detect(CommonArgs),
    /// Optimal attack per lambda with genuine rates and bound checks.
    Attack(CommonArgs),
    /// ROC curves of the undistorted and attacked detector (radar scenario).
    Roc(CommonArgs),
    /// Genuine detection rate against the signal Fock level (radar scenario).
    PhotonSweep(CommonArgs),
    /// Seeded batch check of the attack, bound and channel invariants.
    Verify(CommonArgs),
}

impl Command {
    pub fn parts(&self) -> (&'static str, &CommonArgs) {
        match self {
            Command::Detect(a) => ("detect", a),
            Command::Attack(a) => ("attack", a),
            Command::Roc(a) => ("roc", a),
            Command::PhotonSweep(a) => ("photon-sweep", a),
            Command::Verify(a) => ("verify", a),
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// Scenario configuration (JSON).
    #[arg(long, value_name = "PATH")]
    pub config: PathBuf,
    /// Output file; standard output when absent.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Attack strength; repeat to sweep several values. Replaces `attack.lambdas`.
    #[arg(long = "lambda", value_name = "LAMBDA", allow_negative_numbers = true)]
    pub lambdas: Vec<f64>,
    /// Detector threshold. Replaces the sweep thresholds and sets the priors.
    #[arg(long, allow_negative_numbers = true)]
    pub tau: Option<f64>,
}

impl CommonArgs {
    pub fn overrides(&self) -> Overrides {
        Overrides {
            out: self.out.clone(),
            format: self.format,
            seed: self.seed,
            lambdas: self.lambdas.clone(),
            tau: self.tau,
        }
    }
}
