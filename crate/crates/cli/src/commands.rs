//! The detect, attack, roc and photon-sweep experiments.

use qmitm::radar::default_tau_grid;
use qmitm::{
    helstrom_measurement, optimal_attack, oracle_attack, photon_sweep, roc_sweep, BoundReport,
    Error,
};
use serde::Serialize;
use serde_json::json;

use crate::config::{Validated, DEFAULT_L_VALUES};
use crate::error::{CliError, CliResult};
use crate::number::g12;
use crate::report::{Check, Summary};
use crate::table::Table;

/// Everything an experiment produces, before formatting.
pub struct Emission {
    pub results: serde_json::Value,
    pub table: Table,
    pub summary: Summary,
}

const ORACLE_ITERATIONS: usize = 50_000;
const ORACLE_TOL: f64 = 1e-15;
const ORACLE_RESIDUAL_TOL: f64 = 1e-5;
const DOMINANCE_TOL: f64 = 1e-9;

fn compute_error(e: Error) -> CliError {
    CliError::validation("config", e)
}

pub fn detect(cfg: &Validated) -> CliResult<Emission> {
    let pair = cfg.pair()?;
    let h = helstrom_measurement(&pair);
    let results = json!({
        "dim": pair.dim(),
        "c0": pair.c0(),
        "c1": pair.c1(),
        "tau": pair.threshold(),
        "eigenvalues": h.eigenvalues,
        "pi_star_rank": h.pi1.rank(),
        "pi_star": h.pi1.op(),
        "p_detect": h.p_detect,
        "p_false": h.p_false,
        "bayes_risk": h.bayes_risk,
    });
    let mut table = Table::new(&[
        "tau",
        "rank",
        "p_detect",
        "p_false",
        "bayes_risk",
        "eigenvalues",
    ]);
    let eigs: Vec<String> = h.eigenvalues.iter().map(|&e| g12(e)).collect();
    table.push(vec![
        g12(pair.threshold()),
        h.pi1.rank().to_string(),
        g12(h.p_detect),
        g12(h.p_false),
        g12(h.bayes_risk),
        eigs.join(";"),
    ]);
    let in_range = |p: f64| (-1e-10..=1.0 + 1e-10).contains(&p);
    let checks = vec![Check::new(
        "rates_in_unit_interval",
        in_range(h.p_detect) && in_range(h.p_false) && in_range(h.bayes_risk),
        format!(
            "P_D={} P_F={} risk={}",
            g12(h.p_detect),
            g12(h.p_false),
            g12(h.bayes_risk)
        ),
    )];
    Ok(Emission {
        results,
        table,
        summary: Summary::from_checks(checks),
    })
}

#[derive(Serialize)]
struct AttackRow {
    lambda: f64,
    p_detect: f64,
    p_false: f64,
    genuine_p_detect: f64,
    genuine_p_false: f64,
    utility: qmitm::Extended,
    log_z1: f64,
    bounds: BoundReport,
    oracle_residual: Option<f64>,
    rho1_prime: qmitm::DensityOperator,
}

pub fn attack(cfg: &Validated) -> CliResult<Emission> {
    let pair = cfg.pair()?;
    let lambdas = cfg.lambdas()?;
    let h = helstrom_measurement(&pair);
    let mut rows = Vec::with_capacity(lambdas.len());
    let mut checks = Vec::new();
    let mut violations = 0;
    let mut max_residual: f64 = 0.0;
    for &lambda in lambdas {
        let sol = optimal_attack(&pair, &h.pi1, lambda).map_err(compute_error)?;
        let bounds = BoundReport::evaluate(h.p_detect, sol.genuine_p_detect, lambda)
            .map_err(compute_error)?;
        violations += usize::from(!bounds.upper_satisfied) + usize::from(!bounds.lower_satisfied);
        let oracle_residual =
            match oracle_attack(&pair, &h.pi1, lambda, ORACLE_ITERATIONS, ORACLE_TOL) {
                Ok(o) => {
                    let r = o
                        .rho1_prime
                        .distance(&sol.rho1_prime)
                        .map_err(compute_error)?;
                    max_residual = max_residual.max(r);
                    checks.push(Check::new(
                        format!("oracle_agreement[lambda={}]", g12(lambda)),
                        r <= ORACLE_RESIDUAL_TOL,
                        format!("residual {}", g12(r)),
                    ));
                    Some(r)
                }
                Err(e) => {
                    checks.push(Check::new(
                        format!("oracle_agreement[lambda={}]", g12(lambda)),
                        false,
                        e.to_string(),
                    ));
                    None
                }
            };
        checks.push(Check::new(
            format!("bounds[lambda={}]", g12(lambda)),
            bounds.satisfied(),
            format!(
                "{} <= {} <= {}",
                g12(bounds.lower),
                g12(bounds.genuine_p_detect),
                g12(bounds.upper)
            ),
        ));
        rows.push(AttackRow {
            lambda,
            p_detect: h.p_detect,
            p_false: h.p_false,
            genuine_p_detect: sol.genuine_p_detect,
            genuine_p_false: sol.genuine_p_false,
            utility: sol.utility,
            log_z1: sol.log_z1,
            bounds,
            oracle_residual,
            rho1_prime: sol.rho1_prime,
        });
    }
    let mut table = Table::new(&[
        "lambda",
        "p_detect",
        "p_false",
        "genuine_p_detect",
        "genuine_p_false",
        "utility",
        "lower_bound",
        "upper_bound",
        "lower_satisfied",
        "upper_satisfied",
    ]);
    for r in &rows {
        table.push(vec![
            g12(r.lambda),
            g12(r.p_detect),
            g12(r.p_false),
            g12(r.genuine_p_detect),
            g12(r.genuine_p_false),
            g12(r.utility.to_f64()),
            g12(r.bounds.lower),
            g12(r.bounds.upper),
            r.bounds.lower_satisfied.to_string(),
            r.bounds.upper_satisfied.to_string(),
        ]);
    }
    let mut summary = Summary::from_checks(checks);
    summary.bound_violations = violations;
    summary.max_oracle_residual = Some(max_residual);
    Ok(Emission {
        results: json!({ "pi_star_rank": h.pi1.rank(), "attacks": rows }),
        table,
        summary,
    })
}

pub fn roc(cfg: &Validated) -> CliResult<Emission> {
    let radar = cfg.radar("roc")?;
    let lambdas = cfg.lambdas()?;
    let grid = match (&cfg.tau_grid, cfg.tau) {
        (Some(g), _) => g.clone(),
        (None, Some(t)) => vec![t],
        (None, None) => default_tau_grid(),
    };
    let curves = roc_sweep(&radar.params, lambdas, &grid).map_err(compute_error)?;

    let base = &curves[0];
    let mut dominance_failures = 0;
    let mut false_alarm_mismatch = 0;
    for curve in &curves[1..] {
        for (p, b) in curve.points.iter().zip(&base.points) {
            dominance_failures += usize::from(p.genuine_p_detect > b.p_detect + DOMINANCE_TOL);
            false_alarm_mismatch += usize::from(p.genuine_p_false != b.p_false);
        }
    }
    let mut by_lambda: Vec<&qmitm::RocCurve> = curves[1..].iter().collect();
    by_lambda.sort_by(|a, b| a.lambda.partial_cmp(&b.lambda).expect("lambdas are finite"));
    let mut ordering_failures = 0;
    for w in by_lambda.windows(2) {
        for (lo, hi) in w[0].points.iter().zip(&w[1].points) {
            ordering_failures +=
                usize::from(lo.genuine_p_detect > hi.genuine_p_detect + DOMINANCE_TOL);
        }
    }
    let checks = vec![
        Check::new(
            "roc_dominance",
            dominance_failures == 0,
            format!("{dominance_failures} points above the undistorted curve"),
        ),
        Check::new(
            "false_alarm_unchanged",
            false_alarm_mismatch == 0,
            format!("{false_alarm_mismatch} points with a changed false-alarm rate"),
        ),
        Check::new(
            "lambda_ordering",
            ordering_failures == 0,
            format!("{ordering_failures} points out of lambda order"),
        ),
    ];

    let mut table = Table::new(&[
        "lambda",
        "tau",
        "p_false",
        "p_detect",
        "genuine_p_false",
        "genuine_p_detect",
    ]);
    for curve in &curves {
        let lambda = curve.lambda.map(g12).unwrap_or_default();
        for p in &curve.points {
            table.push(vec![
                lambda.clone(),
                g12(p.tau),
                g12(p.p_false),
                g12(p.p_detect),
                g12(p.genuine_p_false),
                g12(p.genuine_p_detect),
            ]);
        }
    }
    let mut summary = Summary::from_checks(checks);
    summary.bound_violations = dominance_failures;
    Ok(Emission {
        results: json!({ "radar": radar.params, "curves": curves }),
        table,
        summary,
    })
}

pub fn photon(cfg: &Validated) -> CliResult<Emission> {
    let radar = cfg.radar("photon-sweep")?;
    let lambdas = cfg.lambdas()?;
    let l_values = cfg
        .l_values
        .clone()
        .unwrap_or_else(|| DEFAULT_L_VALUES.to_vec());
    let tau = cfg.tau.unwrap_or_else(|| radar.pair.threshold());
    if !(tau > 0.0 && tau.is_finite()) {
        return Err(CliError::validation(
            "radar.c0",
            format!("the photon sweep needs a positive threshold c0/c1, got {tau}"),
        ));
    }
    let rows = photon_sweep(&radar.params, &l_values, lambdas, tau).map_err(compute_error)?;

    let above = rows
        .iter()
        .filter(|r| r.genuine_p_detect > r.p_detect + DOMINANCE_TOL)
        .count();
    let mut order: Vec<usize> = (0..lambdas.len()).collect();
    order.sort_by(|&a, &b| {
        lambdas[a]
            .partial_cmp(&lambdas[b])
            .expect("lambdas are finite")
    });
    let n = l_values.len();
    let mut ordering_failures = 0;
    for w in order.windows(2) {
        for j in 0..n {
            let lo = &rows[w[0] * n + j];
            let hi = &rows[w[1] * n + j];
            ordering_failures +=
                usize::from(lo.genuine_p_detect > hi.genuine_p_detect + DOMINANCE_TOL);
        }
    }
    let checks = vec![
        Check::new(
            "upper_bound",
            above == 0,
            format!("{above} rows with genuine P_D above P_D"),
        ),
        Check::new(
            "lambda_ordering",
            ordering_failures == 0,
            format!("{ordering_failures} rows out of lambda order"),
        ),
    ];

    let mut table = Table::new(&["l", "mean_photon", "lambda", "p_detect", "genuine_p_detect"]);
    for r in &rows {
        table.push(vec![
            r.l.to_string(),
            g12(r.mean_photon),
            g12(r.lambda),
            g12(r.p_detect),
            g12(r.genuine_p_detect),
        ]);
    }
    let mut summary = Summary::from_checks(checks);
    summary.bound_violations = above;
    Ok(Emission {
        results: json!({ "radar": radar.params, "tau": tau, "rows": rows }),
        table,
        summary,
    })
}
