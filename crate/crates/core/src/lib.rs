//! # qmitm
//!
//! Adversarial binary quantum hypothesis testing.
//!
//! A detector measures the Helstrom projector built for a pair of density
//! operators. A man-in-the-middle attacker who knows that projector distorts
//! the states he receives, trading the drop in detection rate against the
//! quantum relative entropy of the distortion. The crate provides
//!
//! - [`operator`]: Hermitian operators, spectral functions and relative entropy,
//! - [`detection`]: hypothesis pairs, the optimal measurement and its rates,
//! - [`adversary`]: the attacker's closed-form strategy, an independent
//!   numerical oracle, rate bounds and perturbation diagnostics,
//! - [`channels`]: Kraus channels realizing any distortion,
//! - [`radar`]: the Fock-basis radar scenario with photon and ROC sweeps.

#![forbid(unsafe_code)]

pub mod adversary;
pub mod channels;
pub mod detection;
pub mod error;
pub mod literal;
pub mod operator;
pub mod radar;
pub mod random;

pub use adversary::{
    attacker_utility, detection_bounds, genuine_rates, optimal_attack, oracle_attack,
    overlap_weights, perturbation_estimate, AttackerSolution, BoundReport, DetectionBounds,
    OracleSolution, PerturbationEntry, PerturbationReport,
};
pub use channels::{apply_channel, completeness_residual, realize_channel, KrausChannel};
pub use detection::{
    bayes_risk, helstrom_measurement, rates, sample_outcomes, HelstromResult, HypothesisPair,
    ProjectorMeasurement, SampleCount,
};
pub use error::{Error, Result};
pub use operator::{
    matrix_exp, relative_entropy, spectral_decompose, support_log, trace_product, CMatrix, CVector,
    DensityOperator, Extended, HermitianOperator, SpectralDecomposition, SupportLog,
};
pub use radar::{
    build_radar_pair, mean_photon, photon_sweep, roc_sweep, PhotonRow, RadarParams, RocCurve,
    RocPoint,
};

/// Crate version, reported in run summaries.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
