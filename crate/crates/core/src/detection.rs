//! Non-adversarial binary quantum hypothesis testing.
//!
//! The detector decides between `H0: rho0` and `H1: rho1` with priors
//! `c0, c1` by measuring the projector `Pi1`. The Bayes-optimal choice is the
//! projector onto the strictly positive eigenspace of `rho1 - tau rho0`,
//! `tau = c0 / c1`, which minimizes `c1 (1 - P_D) + c0 P_F`.

use rand::distr::{Bernoulli, Distribution};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operator::{check_dims, trace_product, DensityOperator, HermitianOperator};

/// Tolerance on `c0 + c1 = 1`.
pub const PRIOR_SUM_TOL: f64 = 1e-12;
/// Tolerance on `||P^2 - P||_F` and `|Tr P - rank|`.
pub const PROJECTOR_TOL: f64 = 1e-9;
/// Eigenvalues of `rho1 - tau rho0` at or below this (relative to
/// `max(1, spectral radius)`) are excluded from the optimal projector.
pub const HELSTROM_EIG_EPS: f64 = 1e-12;

/// Two candidate density operators with their prior probabilities.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawPair", into = "RawPair")]
pub struct HypothesisPair {
    rho0: DensityOperator,
    rho1: DensityOperator,
    c0: f64,
    c1: f64,
}

#[derive(Serialize, Deserialize)]
struct RawPair {
    rho0: DensityOperator,
    rho1: DensityOperator,
    c0: f64,
    c1: f64,
}

impl TryFrom<RawPair> for HypothesisPair {
    type Error = Error;

    fn try_from(raw: RawPair) -> Result<Self> {
        HypothesisPair::new(raw.rho0, raw.rho1, raw.c0, raw.c1)
    }
}

impl From<HypothesisPair> for RawPair {
    fn from(p: HypothesisPair) -> Self {
        RawPair {
            rho0: p.rho0,
            rho1: p.rho1,
            c0: p.c0,
            c1: p.c1,
        }
    }
}

impl HypothesisPair {
    pub fn new(rho0: DensityOperator, rho1: DensityOperator, c0: f64, c1: f64) -> Result<Self> {
        check_dims(rho0.dim(), rho1.dim())?;
        validate_priors(c0, c1)?;
        Ok(Self { rho0, rho1, c0, c1 })
    }

    /// Priors `c0 = tau / (1 + tau)`, `c1 = 1 / (1 + tau)`.
    pub fn with_threshold(rho0: DensityOperator, rho1: DensityOperator, tau: f64) -> Result<Self> {
        let (c0, c1) = priors_from_threshold(tau)?;
        Self::new(rho0, rho1, c0, c1)
    }

    pub fn rho0(&self) -> &DensityOperator {
        &self.rho0
    }

    pub fn rho1(&self) -> &DensityOperator {
        &self.rho1
    }

    pub fn c0(&self) -> f64 {
        self.c0
    }

    pub fn c1(&self) -> f64 {
        self.c1
    }

    pub fn dim(&self) -> usize {
        self.rho0.dim()
    }

    /// `tau = c0 / c1`, the ratio at which `Pi* = {rho1 - tau rho0 > 0}`
    /// minimizes `c1 (1 - P_D) + c0 P_F`.
    pub fn threshold(&self) -> f64 {
        self.c0 / self.c1
    }
}

fn validate_priors(c0: f64, c1: f64) -> Result<()> {
    let ok = c0.is_finite()
        && c1.is_finite()
        && c0 >= 0.0
        && c1 > 0.0
        && (c0 + c1 - 1.0).abs() <= PRIOR_SUM_TOL;
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidPriors { c0, c1 })
    }
}

pub fn priors_from_threshold(tau: f64) -> Result<(f64, f64)> {
    if tau.is_nan() || tau < 0.0 || !tau.is_finite() {
        return Err(Error::InvalidParameter {
            name: "tau",
            value: tau,
            reason: "threshold must be finite and nonnegative",
        });
    }
    Ok((tau / (1.0 + tau), 1.0 / (1.0 + tau)))
}

/// An orthogonal projector `Pi1`; `1 - Pi1` is the complementary outcome.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProjectorMeasurement {
    op: HermitianOperator,
    rank: usize,
}

impl ProjectorMeasurement {
    pub fn new(op: HermitianOperator) -> Result<Self> {
        let m = op.matrix();
        let residual = (m * m - m).norm();
        let trace = op.trace();
        let rank = trace.round().max(0.0) as usize;
        if residual > PROJECTOR_TOL || (trace - rank as f64).abs() > PROJECTOR_TOL {
            return Err(Error::NotProjector { residual });
        }
        let spec = op.spectral();
        if spec
            .eigenvalues
            .iter()
            .any(|&w| !(-PROJECTOR_TOL..=1.0 + PROJECTOR_TOL).contains(&w))
        {
            return Err(Error::NotProjector { residual });
        }
        Ok(Self { op, rank })
    }

    pub fn zero(dim: usize) -> Self {
        Self {
            op: HermitianOperator::zeros(dim),
            rank: 0,
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            op: HermitianOperator::identity(dim),
            rank: dim,
        }
    }

    pub fn op(&self) -> &HermitianOperator {
        &self.op
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn dim(&self) -> usize {
        self.op.dim()
    }

    /// `1 - Pi1`.
    pub fn complement(&self) -> Self {
        let op = HermitianOperator::identity(self.dim())
            .sub(&self.op)
            .expect("same dimension");
        Self {
            op,
            rank: self.dim() - self.rank,
        }
    }
}

/// Outcome of the optimal (Helstrom) measurement construction.
#[derive(Debug, Clone, Serialize)]
pub struct HelstromResult {
    pub pi1: ProjectorMeasurement,
    /// Spectrum of `rho1 - tau rho0`, descending.
    pub eigenvalues: Vec<f64>,
    pub p_detect: f64,
    pub p_false: f64,
    pub bayes_risk: f64,
}

pub fn helstrom_measurement(pair: &HypothesisPair) -> HelstromResult {
    let tau = pair.threshold();
    let diff = pair
        .rho1
        .op()
        .sub(&pair.rho0.op().scale(tau))
        .expect("pair dimensions agree");
    let spec = diff.spectral();
    let cutoff = HELSTROM_EIG_EPS * spec.spectral_radius().max(1.0);
    let op = spec.projector_where(|w| w > cutoff);
    let rank = spec.eigenvalues.iter().filter(|&&w| w > cutoff).count();
    let pi1 = ProjectorMeasurement { op, rank };
    let (p_detect, p_false) = rates(&pi1, &pair.rho1, &pair.rho0).expect("pair dimensions agree");
    let bayes_risk = pair.c1 * (1.0 - p_detect) + pair.c0 * p_false;
    HelstromResult {
        pi1,
        eigenvalues: spec.eigenvalues,
        p_detect,
        p_false,
        bayes_risk,
    }
}

/// `(P_D, P_F) = (Tr(Pi rho1), Tr(Pi rho0))`.
pub fn rates(
    pi: &ProjectorMeasurement,
    rho1: &DensityOperator,
    rho0: &DensityOperator,
) -> Result<(f64, f64)> {
    Ok((
        trace_product(pi.op(), rho1.op())?,
        trace_product(pi.op(), rho0.op())?,
    ))
}

/// `c1 Tr((1 - Pi) rho1) + c0 Tr(Pi rho0)`.
pub fn bayes_risk(pi: &ProjectorMeasurement, pair: &HypothesisPair) -> Result<f64> {
    let (p_detect, p_false) = rates(pi, &pair.rho1, &pair.rho0)?;
    Ok(pair.c1 * (1.0 - p_detect) + pair.c0 * p_false)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SampleCount {
    pub hits: u64,
    pub trials: u64,
}

impl SampleCount {
    pub fn frequency(&self) -> f64 {
        self.hits as f64 / self.trials as f64
    }
}

/// Simulates `n` independent measurements of `pi` on copies of `rho` and
/// counts the `Pi1` outcomes.
pub fn sample_outcomes(
    rho: &DensityOperator,
    pi: &ProjectorMeasurement,
    n: u64,
    seed: u64,
) -> Result<SampleCount> {
    if n == 0 {
        return Err(Error::InvalidParameter {
            name: "n",
            value: 0.0,
            reason: "at least one trial is required",
        });
    }
    let p = trace_product(pi.op(), rho.op())?.clamp(0.0, 1.0);
    let coin = Bernoulli::new(p).expect("probability clamped into [0, 1]");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let hits = (0..n).filter(|_| coin.sample(&mut rng)).count() as u64;
    Ok(SampleCount { hits, trials: n })
}
