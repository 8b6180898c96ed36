//! Quantum radar case study in the Fock basis.
//!
//! Without a target the receiver sees thermal-like noise,
//! `rho0 = (1 - N_B)|0><0| + N_B |k><k|`; with a target a fraction `x` of
//! the return is the signal level `|l><l|`,
//! `rho1 = (1 - x) rho0 + x |l><l|`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::adversary::optimal_attack;
use crate::detection::{helstrom_measurement, priors_from_threshold, HypothesisPair};
use crate::error::{Error, Result};
use crate::operator::DensityOperator;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadarParams {
    /// Environmental noise weight `N_B` in `[0, 1]`.
    pub n_b: f64,
    /// Reflective index `x` in `[0, 1]`.
    pub x: f64,
    /// Fock level of the noise.
    pub k: usize,
    /// Fock level of the reflected signal.
    pub l: usize,
}

impl RadarParams {
    pub fn new(n_b: f64, x: f64, k: usize, l: usize) -> Result<Self> {
        let p = Self { n_b, x, k, l };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, value) in [("n_b", self.n_b), ("x", self.x)] {
            if !(0.0..=1.0).contains(&value) {
                return Err(Error::InvalidParameter {
                    name,
                    value,
                    reason: "must lie in [0, 1]",
                });
            }
        }
        Ok(())
    }

    /// Truncation `max(k, l) + 1`; the states only occupy levels `0`, `k`, `l`.
    pub fn dim(&self) -> usize {
        self.k.max(self.l) + 1
    }

    pub fn with_signal_level(&self, l: usize) -> Self {
        Self { l, ..*self }
    }

    fn populations(&self) -> (Vec<f64>, Vec<f64>) {
        let d = self.dim();
        let mut p0 = vec![0.0; d];
        // k = 0 merges both noise terms into the vacuum
        p0[0] += 1.0 - self.n_b;
        p0[self.k] += self.n_b;
        let mut p1: Vec<f64> = p0.iter().map(|p| (1.0 - self.x) * p).collect();
        p1[self.l] += self.x;
        (p0, p1)
    }
}

/// The two radar hypotheses as diagonal density operators.
pub fn build_radar_pair(params: &RadarParams, c0: f64, c1: f64) -> Result<HypothesisPair> {
    params.validate()?;
    let (p0, p1) = params.populations();
    HypothesisPair::new(
        DensityOperator::from_diagonal(&p0)?,
        DensityOperator::from_diagonal(&p1)?,
        c0,
        c1,
    )
}

/// Radar pair with priors chosen so that `c0 / c1 = tau`.
pub fn build_radar_pair_at_threshold(params: &RadarParams, tau: f64) -> Result<HypothesisPair> {
    let (c0, c1) = priors_from_threshold(tau)?;
    build_radar_pair(params, c0, c1)
}

/// `sum_n n rho_nn`.
pub fn mean_photon(rho: &DensityOperator) -> f64 {
    rho.op()
        .diagonal_real()
        .iter()
        .enumerate()
        .map(|(n, p)| n as f64 * p)
        .sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhotonRow {
    pub l: usize,
    pub mean_photon: f64,
    pub lambda: f64,
    pub p_detect: f64,
    pub genuine_p_detect: f64,
}

fn check_lambdas(lambdas: &[f64]) -> Result<()> {
    match lambdas.iter().find(|&&l| !(l > 0.0 && l.is_finite())) {
        Some(&bad) => Err(Error::InvalidLambda(bad)),
        None => Ok(()),
    }
}

/// One row per `(lambda, l)`, ordered by the position of `lambda` in
/// `lambdas`, then by the position of `l` in `l_values`.
pub fn photon_sweep(
    base: &RadarParams,
    l_values: &[usize],
    lambdas: &[f64],
    tau: f64,
) -> Result<Vec<PhotonRow>> {
    check_lambdas(lambdas)?;
    if !(tau > 0.0 && tau.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "tau",
            value: tau,
            reason: "threshold must be positive",
        });
    }
    let jobs: Vec<(f64, usize)> = lambdas
        .iter()
        .flat_map(|&lam| l_values.iter().map(move |&l| (lam, l)))
        .collect();
    jobs.par_iter()
        .map(|&(lambda, l)| {
            let pair = build_radar_pair_at_threshold(&base.with_signal_level(l), tau)?;
            let h = helstrom_measurement(&pair);
            let sol = optimal_attack(&pair, &h.pi1, lambda)?;
            Ok(PhotonRow {
                l,
                mean_photon: mean_photon(pair.rho1()),
                lambda,
                p_detect: h.p_detect,
                genuine_p_detect: sol.genuine_p_detect,
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RocPoint {
    pub tau: f64,
    pub p_false: f64,
    pub p_detect: f64,
    pub genuine_p_false: f64,
    pub genuine_p_detect: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RocCurve {
    /// `None` for the undistorted detector.
    pub lambda: Option<f64>,
    pub points: Vec<RocPoint>,
}

/// 60 logarithmically spaced thresholds in `[1e-2, 1e2]`.
pub fn default_tau_grid() -> Vec<f64> {
    log_grid(1e-2, 1e2, 60)
}

pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    let (a, b) = (lo.log10(), hi.log10());
    (0..n)
        .map(|i| 10f64.powf(a + (b - a) * i as f64 / (n - 1) as f64))
        .collect()
}

fn check_tau_grid(tau_grid: &[f64]) -> Result<()> {
    if tau_grid.is_empty() {
        return Err(Error::InvalidParameter {
            name: "tau_grid",
            value: 0.0,
            reason: "grid must not be empty",
        });
    }
    if let Some(&bad) = tau_grid.iter().find(|&&t| !(t > 0.0 && t.is_finite())) {
        return Err(Error::InvalidParameter {
            name: "tau_grid",
            value: bad,
            reason: "thresholds must be positive",
        });
    }
    if let Some(w) = tau_grid.windows(2).find(|w| w[1] <= w[0]) {
        return Err(Error::InvalidParameter {
            name: "tau_grid",
            value: w[1],
            reason: "thresholds must be strictly increasing",
        });
    }
    Ok(())
}

/// The undistorted ROC curve followed by one attacked curve per `lambda`.
/// The Helstrom projector is recomputed at every threshold.
pub fn roc_sweep(params: &RadarParams, lambdas: &[f64], tau_grid: &[f64]) -> Result<Vec<RocCurve>> {
    check_lambdas(lambdas)?;
    check_tau_grid(tau_grid)?;
    params.validate()?;

    // per tau: (P_F, P_D) and the genuine rates for every lambda
    let per_tau: Vec<(RocPoint, Vec<(f64, f64)>)> = tau_grid
        .par_iter()
        .map(|&tau| {
            let pair = build_radar_pair_at_threshold(params, tau)?;
            let h = helstrom_measurement(&pair);
            let attacked = lambdas
                .iter()
                .map(|&lam| {
                    let sol = optimal_attack(&pair, &h.pi1, lam)?;
                    Ok((sol.genuine_p_false, sol.genuine_p_detect))
                })
                .collect::<Result<Vec<_>>>()?;
            let base = RocPoint {
                tau,
                p_false: h.p_false,
                p_detect: h.p_detect,
                genuine_p_false: h.p_false,
                genuine_p_detect: h.p_detect,
            };
            Ok((base, attacked))
        })
        .collect::<Result<_>>()?;

    let mut curves = Vec::with_capacity(lambdas.len() + 1);
    curves.push(RocCurve {
        lambda: None,
        points: per_tau.iter().map(|(p, _)| *p).collect(),
    });
    for (i, &lam) in lambdas.iter().enumerate() {
        curves.push(RocCurve {
            lambda: Some(lam),
            points: per_tau
                .iter()
                .map(|(p, att)| RocPoint {
                    genuine_p_false: att[i].0,
                    genuine_p_detect: att[i].1,
                    ..*p
                })
                .collect(),
        });
    }
    Ok(curves)
}
