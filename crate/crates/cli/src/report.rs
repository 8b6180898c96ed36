use serde::Serialize;

use crate::config::ScenarioConfig;

/// A named invariant check and its outcome.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            passed,
            detail: detail.into(),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Summary {
    pub passed: bool,
    pub bound_violations: usize,
    /// Largest Frobenius distance between the closed form and the oracle.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_oracle_residual: Option<f64>,
    pub checks: Vec<Check>,
}

impl Summary {
    pub fn from_checks(checks: Vec<Check>) -> Self {
        Self {
            passed: checks.iter().all(|c| c.passed),
            checks,
            ..Self::default()
        }
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.passed).collect()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub command: String,
    pub version: String,
    pub config: ScenarioConfig,
    pub results: serde_json::Value,
    pub summary: Summary,
    pub wall_clock_seconds: f64,
}
