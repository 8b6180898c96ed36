//! Scenario configuration: parsing, flag overrides and validation.

use std::path::{Path, PathBuf};

use clap::ValueEnum;
use qmitm::literal::{self, MatrixLiteral};
use qmitm::{DensityOperator, HermitianOperator, HypothesisPair, RadarParams};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub explicit: Option<ExplicitScenario>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radar: Option<RadarScenario>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub attack: Option<AttackBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<OutputBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verify: Option<VerifyBlock>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExplicitScenario {
    pub rho0: MatrixLiteral,
    pub rho1: MatrixLiteral,
    pub c0: f64,
    pub c1: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RadarScenario {
    pub n_b: f64,
    pub x: f64,
    pub k: usize,
    pub l: usize,
    pub c0: f64,
    pub c1: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AttackBlock {
    pub lambdas: Vec<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepBlock {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau_grid: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub l_values: Option<Vec<usize>>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputBlock {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<Format>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyBlock {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub instances: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_dim: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub commuting_only: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub corrupt_channels: Option<bool>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// Scalar overrides taken from the command line.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    pub seed: Option<u64>,
    pub lambdas: Vec<f64>,
    pub tau: Option<f64>,
}

pub const DEFAULT_L_VALUES: [usize; 6] = [0, 1, 2, 3, 4, 5];
pub const DEFAULT_VERIFY_INSTANCES: usize = 50;
pub const DEFAULT_VERIFY_MAX_DIM: usize = 6;
pub const MAX_VERIFY_DIM: usize = 16;
/// Largest Fock level accepted for `k`, `l` and the swept `l` values.
pub const MAX_FOCK_LEVEL: usize = 1000;
pub const DEFAULT_VERIFY_LAMBDAS: [f64; 4] = [0.5, 1.0, 2.0, 5.0];

impl ScenarioConfig {
    pub fn from_json(text: &str, origin: &Path) -> CliResult<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize(de).map_err(|e| {
            let field = e.path().to_string();
            let message = if field == "." {
                e.inner().to_string()
            } else {
                format!("field `{field}`: {}", e.inner())
            };
            CliError::Parse {
                path: origin.to_path_buf(),
                message,
            }
        })
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_json(&text, path)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn apply(&mut self, o: &Overrides) {
        if o.out.is_some() || o.format.is_some() {
            let out = self.output.get_or_insert_with(OutputBlock::default);
            if let Some(path) = &o.out {
                out.path = Some(path.clone());
            }
            if let Some(format) = o.format {
                out.format = Some(format);
            }
        }
        if let Some(seed) = o.seed {
            self.seed = Some(seed);
        }
        if !o.lambdas.is_empty() {
            self.attack = Some(AttackBlock {
                lambdas: o.lambdas.clone(),
            });
        }
        if let Some(tau) = o.tau {
            let sweep = self.sweep.get_or_insert_with(SweepBlock::default);
            sweep.tau = Some(tau);
            sweep.tau_grid = None;
        }
    }

    /// Checks every numeric range and builds the hypothesis pair. Nothing is
    /// computed from a config that fails here.
    pub fn validate(&self) -> CliResult<Validated> {
        let source = match (&self.explicit, &self.radar) {
            (Some(e), None) => Source::Explicit(build_explicit(e)?),
            (None, Some(r)) => Source::Radar(build_radar(r)?),
            (Some(_), Some(_)) => {
                return Err(CliError::validation(
                    "explicit/radar",
                    "exactly one scenario must be given, found both",
                ))
            }
            (None, None) => {
                return Err(CliError::validation(
                    "explicit/radar",
                    "exactly one scenario must be given, found neither",
                ))
            }
        };
        let lambdas = match &self.attack {
            None => None,
            Some(a) => {
                if a.lambdas.is_empty() {
                    return Err(CliError::validation(
                        "attack.lambdas",
                        "list must be nonempty",
                    ));
                }
                for (i, &lam) in a.lambdas.iter().enumerate() {
                    if !(lam > 0.0 && lam.is_finite()) {
                        return Err(CliError::validation(
                            format!("attack.lambdas[{i}]"),
                            format!("lambda must satisfy lambda > 0 (finite), got {lam}"),
                        ));
                    }
                }
                Some(a.lambdas.clone())
            }
        };
        let sweep = self.sweep.clone().unwrap_or_default();
        if sweep.tau.is_some() && sweep.tau_grid.is_some() {
            return Err(CliError::validation(
                "sweep",
                "give either `tau_grid` or `tau`, not both",
            ));
        }
        if let Some(tau) = sweep.tau {
            if !(tau > 0.0 && tau.is_finite()) {
                return Err(CliError::validation(
                    "sweep.tau",
                    format!("threshold must be positive and finite, got {tau}"),
                ));
            }
        }
        if let Some(grid) = &sweep.tau_grid {
            if grid.is_empty() {
                return Err(CliError::validation(
                    "sweep.tau_grid",
                    "grid must be nonempty",
                ));
            }
            for (i, &t) in grid.iter().enumerate() {
                if !(t > 0.0 && t.is_finite()) {
                    return Err(CliError::validation(
                        format!("sweep.tau_grid[{i}]"),
                        format!("thresholds must be positive and finite, got {t}"),
                    ));
                }
                if i > 0 && t <= grid[i - 1] {
                    return Err(CliError::validation(
                        format!("sweep.tau_grid[{i}]"),
                        "thresholds must be strictly increasing",
                    ));
                }
            }
        }
        if let Some(ls) = &sweep.l_values {
            if ls.is_empty() {
                return Err(CliError::validation(
                    "sweep.l_values",
                    "list must be nonempty",
                ));
            }
            if let Some(i) = ls.iter().position(|&l| l > MAX_FOCK_LEVEL) {
                return Err(CliError::validation(
                    format!("sweep.l_values[{i}]"),
                    format!("Fock level must be at most {MAX_FOCK_LEVEL}"),
                ));
            }
        }
        let verify = self.verify.clone().unwrap_or_default();
        let instances = verify.instances.unwrap_or(DEFAULT_VERIFY_INSTANCES);
        if instances == 0 {
            return Err(CliError::validation(
                "verify.instances",
                "must be at least 1",
            ));
        }
        let max_dim = verify.max_dim.unwrap_or(DEFAULT_VERIFY_MAX_DIM);
        if !(2..=MAX_VERIFY_DIM).contains(&max_dim) {
            return Err(CliError::validation(
                "verify.max_dim",
                format!("must lie in 2..={MAX_VERIFY_DIM}, got {max_dim}"),
            ));
        }
        Ok(Validated {
            source,
            lambdas,
            tau: sweep.tau,
            tau_grid: sweep.tau_grid,
            l_values: sweep.l_values,
            seed: self.seed,
            verify: VerifySettings {
                instances,
                max_dim,
                commuting_only: verify.commuting_only.unwrap_or(false),
                corrupt_channels: verify.corrupt_channels.unwrap_or(false),
            },
            output: self.output.clone().unwrap_or_default(),
        })
    }
}

#[derive(Debug, Clone)]
pub enum Source {
    Explicit(HypothesisPair),
    Radar(RadarSetup),
}

#[derive(Debug, Clone)]
pub struct RadarSetup {
    pub params: RadarParams,
    pub pair: HypothesisPair,
}

#[derive(Debug, Clone, Copy)]
pub struct VerifySettings {
    pub instances: usize,
    pub max_dim: usize,
    pub commuting_only: bool,
    pub corrupt_channels: bool,
}

/// A configuration whose values have all been range-checked.
#[derive(Debug, Clone)]
pub struct Validated {
    pub source: Source,
    pub lambdas: Option<Vec<f64>>,
    pub tau: Option<f64>,
    pub tau_grid: Option<Vec<f64>>,
    pub l_values: Option<Vec<usize>>,
    pub seed: Option<u64>,
    pub verify: VerifySettings,
    pub output: OutputBlock,
}

impl Validated {
    /// The configured pair; with an explicit threshold the priors follow it.
    pub fn pair(&self) -> CliResult<HypothesisPair> {
        let pair = match &self.source {
            Source::Explicit(p) => p.clone(),
            Source::Radar(r) => r.pair.clone(),
        };
        match self.tau {
            None => Ok(pair),
            Some(tau) => {
                HypothesisPair::with_threshold(pair.rho0().clone(), pair.rho1().clone(), tau)
                    .map_err(|e| CliError::validation("sweep.tau", e))
            }
        }
    }

    pub fn radar(&self, command: &str) -> CliResult<&RadarSetup> {
        match &self.source {
            Source::Radar(r) => Ok(r),
            Source::Explicit(_) => Err(CliError::validation(
                "radar",
                format!("`{command}` needs a radar scenario"),
            )),
        }
    }

    pub fn lambdas(&self) -> CliResult<&[f64]> {
        self.lambdas
            .as_deref()
            .ok_or_else(|| CliError::validation("attack.lambdas", "required for this command"))
    }
}

fn density(field: &str, lit: &MatrixLiteral) -> CliResult<DensityOperator> {
    let m = literal::from_literal(lit).map_err(|e| CliError::validation(field, e))?;
    let op = HermitianOperator::new(m).map_err(|e| CliError::validation(field, e))?;
    DensityOperator::new(op).map_err(|e| CliError::validation(field, e))
}

fn check_priors(prefix: &str, c0: f64, c1: f64) -> CliResult<()> {
    if !(c0 >= 0.0 && c0.is_finite()) {
        return Err(CliError::validation(
            format!("{prefix}.c0"),
            format!("prior must be finite and nonnegative, got {c0}"),
        ));
    }
    if !(c1 > 0.0 && c1.is_finite()) {
        return Err(CliError::validation(
            format!("{prefix}.c1"),
            format!("prior must be finite and positive, got {c1}"),
        ));
    }
    if (c0 + c1 - 1.0).abs() > qmitm::detection::PRIOR_SUM_TOL {
        return Err(CliError::validation(
            format!("{prefix}.c0/{prefix}.c1"),
            format!("priors must sum to 1, got {}", c0 + c1),
        ));
    }
    Ok(())
}

fn build_explicit(e: &ExplicitScenario) -> CliResult<HypothesisPair> {
    let rho0 = density("explicit.rho0", &e.rho0)?;
    let rho1 = density("explicit.rho1", &e.rho1)?;
    if rho0.dim() != rho1.dim() {
        return Err(CliError::validation(
            "explicit.rho1",
            format!(
                "dimension {} differs from rho0's {}",
                rho1.dim(),
                rho0.dim()
            ),
        ));
    }
    check_priors("explicit", e.c0, e.c1)?;
    HypothesisPair::new(rho0, rho1, e.c0, e.c1).map_err(|err| CliError::validation("explicit", err))
}

fn build_radar(r: &RadarScenario) -> CliResult<RadarSetup> {
    for (name, level) in [("k", r.k), ("l", r.l)] {
        if level > MAX_FOCK_LEVEL {
            return Err(CliError::validation(
                format!("radar.{name}"),
                format!("Fock level must be at most {MAX_FOCK_LEVEL}, got {level}"),
            ));
        }
    }
    let params = RadarParams {
        n_b: r.n_b,
        x: r.x,
        k: r.k,
        l: r.l,
    };
    params.validate().map_err(|e| match e {
        qmitm::Error::InvalidParameter { name, .. } => {
            CliError::validation(format!("radar.{name}"), e)
        }
        other => CliError::validation("radar", other),
    })?;
    check_priors("radar", r.c0, r.c1)?;
    let pair = qmitm::build_radar_pair(&params, r.c0, r.c1)
        .map_err(|e| CliError::validation("radar", e))?;
    Ok(RadarSetup { params, pair })
}
