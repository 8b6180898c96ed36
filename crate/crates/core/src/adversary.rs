//! The man-in-the-middle attacker of the detection game.
//!
//! Knowing the detector's projector `Pi*`, the attacker replaces `rho1`,
//! `rho0` by `rho1'`, `rho0'` minimizing
//!
//! ```text
//! u_A = Tr(Pi* rho1') + lambda [S(rho1' || rho1) + S(rho0' || rho0)]
//! ```
//!
//! The minimizer is `rho0' = rho0` and the Gibbs-type state
//! `rho1' = exp(ln rho1 - Pi*/lambda) / Z1`, evaluated on the support of
//! `rho1`. [`oracle_attack`] reaches the same point by direct numerical
//! minimization and is used to cross-check the closed form.

use num_complex::Complex64;
use serde::Serialize;

use crate::detection::{rates, HypothesisPair, ProjectorMeasurement};
use crate::error::{Error, Result};
use crate::operator::{
    check_dims, matrix_exp, relative_entropy, support_log, trace_product, CMatrix, DensityOperator,
    Extended, HermitianOperator, DEFAULT_SUPPORT_EPS,
};

/// Slack allowed when checking the detection-rate bounds.
pub const BOUND_TOL: f64 = 1e-9;
/// Consecutive eigenvalues of `rho1` closer than this form a degenerate cluster.
pub const SIMPLE_SPECTRUM_TOL: f64 = 1e-8;
/// `||[rho1, Pi*]||_F` at or below this counts as commuting.
pub const COMMUTING_TOL: f64 = 1e-10;

fn check_lambda(lambda: f64) -> Result<()> {
    if lambda > 0.0 && lambda.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidLambda(lambda))
    }
}

/// Attacker utility; `+inf` when either distorted state leaves the support
/// of its original.
pub fn attacker_utility(
    rho1p: &DensityOperator,
    rho0p: &DensityOperator,
    pi: &ProjectorMeasurement,
    pair: &HypothesisPair,
    lambda: f64,
) -> Result<Extended> {
    check_lambda(lambda)?;
    check_dims(pair.dim(), rho1p.dim())?;
    check_dims(pair.dim(), rho0p.dim())?;
    let trace = trace_product(pi.op(), rho1p.op())?;
    let s1 = relative_entropy(rho1p, pair.rho1())?;
    let s0 = relative_entropy(rho0p, pair.rho0())?;
    Ok(match (s1, s0) {
        (Extended::Finite(s1), Extended::Finite(s0)) => {
            Extended::Finite(trace + lambda * (s1 + s0))
        }
        _ => Extended::Infinite,
    })
}

/// The attacker's optimal distortion and what it does to the detector.
#[derive(Debug, Clone, Serialize)]
pub struct AttackerSolution {
    pub rho1_prime: DensityOperator,
    pub rho0_prime: DensityOperator,
    pub lambda: f64,
    /// `Tr exp(ln rho1 - Pi*/lambda)` over the support of `rho1`.
    pub z1: f64,
    /// `ln z1`, finite even when `z1` underflows.
    pub log_z1: f64,
    pub genuine_p_detect: f64,
    pub genuine_p_false: f64,
    pub utility: Extended,
}

pub fn optimal_attack(
    pair: &HypothesisPair,
    pi_star: &ProjectorMeasurement,
    lambda: f64,
) -> Result<AttackerSolution> {
    check_lambda(lambda)?;
    check_dims(pair.dim(), pi_star.dim())?;
    let log1 = support_log(pair.rho1(), DEFAULT_SUPPORT_EPS)?;
    let exponent = log1
        .log
        .compress(&log1.basis)?
        .sub(&pi_star.op().compress(&log1.basis)?.scale(1.0 / lambda))?;
    // shift by the top eigenvalue so that the exponential cannot underflow to zero
    let shift = exponent.spectral().eigenvalues[0];
    let shifted =
        matrix_exp(&exponent.sub(&HermitianOperator::identity(exponent.dim()).scale(shift))?);
    let trace = shifted.trace();
    let on_support = shifted.scale(1.0 / trace);
    let rho1_prime = DensityOperator::new(on_support.embed(&log1.basis)?)?;
    let log_z1 = shift + trace.ln();
    let rho0_prime = pair.rho0().clone();
    let (genuine_p_detect, genuine_p_false) = rates(pi_star, &rho1_prime, &rho0_prime)?;
    let utility = attacker_utility(&rho1_prime, &rho0_prime, pi_star, pair, lambda)?;
    Ok(AttackerSolution {
        rho1_prime,
        rho0_prime,
        lambda,
        z1: log_z1.exp(),
        log_z1,
        genuine_p_detect,
        genuine_p_false,
        utility,
    })
}

/// `(Tr(Pi* rho1'), Tr(Pi* rho0'))`.
pub fn genuine_rates(pi_star: &ProjectorMeasurement, sol: &AttackerSolution) -> Result<(f64, f64)> {
    rates(pi_star, &sol.rho1_prime, &sol.rho0_prime)
}

/// Interval `[P_D e^{-1/lambda}, P_D]` for the genuine detection rate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DetectionBounds {
    pub lower: f64,
    pub upper: f64,
}

pub fn detection_bounds(p_detect: f64, lambda: f64) -> Result<DetectionBounds> {
    check_lambda(lambda)?;
    if !(-BOUND_TOL..=1.0 + BOUND_TOL).contains(&p_detect) {
        return Err(Error::InvalidParameter {
            name: "p_detect",
            value: p_detect,
            reason: "detection rate must lie in [0, 1]",
        });
    }
    Ok(DetectionBounds {
        lower: p_detect * (-1.0 / lambda).exp(),
        upper: p_detect,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundReport {
    pub lambda: f64,
    pub p_detect: f64,
    pub genuine_p_detect: f64,
    pub lower: f64,
    pub upper: f64,
    pub lower_satisfied: bool,
    pub upper_satisfied: bool,
}

impl BoundReport {
    pub fn evaluate(p_detect: f64, genuine_p_detect: f64, lambda: f64) -> Result<Self> {
        let DetectionBounds { lower, upper } = detection_bounds(p_detect, lambda)?;
        Ok(Self {
            lambda,
            p_detect,
            genuine_p_detect,
            lower,
            upper,
            lower_satisfied: genuine_p_detect >= lower - BOUND_TOL,
            upper_satisfied: genuine_p_detect <= upper + BOUND_TOL,
        })
    }

    pub fn satisfied(&self) -> bool {
        self.lower_satisfied && self.upper_satisfied
    }
}

/// Result of the numerical minimization in [`oracle_attack`].
#[derive(Debug, Clone, Serialize)]
pub struct OracleSolution {
    pub rho1_prime: DensityOperator,
    pub utility: f64,
    pub iterations: usize,
    /// Frobenius norm of the stationarity residual `M - Tr(M rho)` at exit.
    pub gradient_norm: f64,
}

/// State of the exponential-family chart `rho = exp(H) / Tr exp(H)`.
struct ChartPoint {
    h: HermitianOperator,
    rho: HermitianOperator,
    value: f64,
    /// Euclidean gradient of the objective with respect to `H`.
    gradient: HermitianOperator,
    /// `M - Tr(M rho)` with `M = P + lambda (ln rho - L)`; vanishes exactly at
    /// the minimizer and serves as the (mirror) descent direction.
    residual: HermitianOperator,
}

/// Objective of the attacker restricted to the support of `rho1`:
/// `Tr(rho P) + lambda [Tr(rho ln rho) - Tr(rho L)]` with `P` the compressed
/// projector and `L` the compressed `ln rho1`.
struct SupportObjective {
    projector: HermitianOperator,
    log_rho1: HermitianOperator,
    lambda: f64,
}

impl SupportObjective {
    fn at(&self, h: HermitianOperator) -> ChartPoint {
        let r = h.dim();
        let spec = h.spectral();
        let top = spec.eigenvalues[0];
        let weights: Vec<f64> = spec.eigenvalues.iter().map(|w| (w - top).exp()).collect();
        let z: f64 = weights.iter().sum();
        let q: Vec<f64> = weights.iter().map(|w| w / z).collect();
        let log_q: Vec<f64> = spec.eigenvalues.iter().map(|w| w - top - z.ln()).collect();

        let u = &spec.eigenvectors;
        let rho = spec.rebuild(|w| (w - top).exp() / z);

        // everything below lives in the eigenbasis of H
        let lam = self.lambda;
        let mut log_gap = -(u.adjoint() * self.log_rho1.matrix() * u);
        for a in 0..r {
            log_gap[(a, a)] += Complex64::new(log_q[a], 0.0);
        }
        let p_eig = u.adjoint() * self.projector.matrix() * u;
        let m_eig = &p_eig + log_gap.scale(lam);
        let mean: f64 = (0..r).map(|a| q[a] * m_eig[(a, a)].re).sum();
        let value: f64 = (0..r)
            .map(|a| q[a] * (p_eig[(a, a)].re + lam * log_gap[(a, a)].re))
            .sum();

        // D exp_H[M] / Z - Tr(M rho) rho
        let mut g = CMatrix::zeros(r, r);
        for a in 0..r {
            for b in 0..r {
                g[(a, b)] = m_eig[(a, b)] * divided_difference(&spec.eigenvalues, &q, a, b);
            }
            g[(a, a)] -= Complex64::new(mean * q[a], 0.0);
        }
        let mut d = m_eig;
        for a in 0..r {
            d[(a, a)] -= Complex64::new(mean, 0.0);
        }
        ChartPoint {
            h,
            rho,
            value,
            gradient: HermitianOperator::from_matrix_unchecked(u * g * u.adjoint()),
            residual: HermitianOperator::from_matrix_unchecked(u * d * u.adjoint()),
        }
    }
}

/// `(q_a - q_b) / (h_a - h_b)`, the divided difference of
/// `h -> e^h / Z` at the eigenvalues of `H`.
fn divided_difference(h: &[f64], q: &[f64], a: usize, b: usize) -> f64 {
    let delta = h[a] - h[b];
    if delta.abs() > 1e-3 {
        (q[a] - q[b]) / delta
    } else if delta == 0.0 {
        q[a]
    } else {
        q[b] * delta.exp_m1() / delta
    }
}

/// Minimizes the attacker utility over `rho1' = exp(H) / Tr exp(H)`, `H`
/// Hermitian on the support of `rho1`.
///
/// Each iteration moves `H` against the stationarity residual
/// `M - Tr(M rho)`, `M = P + lambda (ln rho - ln rho1)`, which is a descent
/// direction that does not flatten out near the boundary of the state space.
/// Step lengths come from Barzilai-Borwein estimates, safeguarded by Armijo
/// backtracking on the utility itself. Stops when the residual is below
/// round-off, or when an iteration improves the utility by less than `tol`
/// with a small residual.
pub fn oracle_attack(
    pair: &HypothesisPair,
    pi_star: &ProjectorMeasurement,
    lambda: f64,
    iterations: usize,
    tol: f64,
) -> Result<OracleSolution> {
    check_lambda(lambda)?;
    check_dims(pair.dim(), pi_star.dim())?;
    let log1 = support_log(pair.rho1(), DEFAULT_SUPPORT_EPS)?;
    let objective = SupportObjective {
        projector: pi_star.op().compress(&log1.basis)?,
        log_rho1: log1.log.compress(&log1.basis)?,
        lambda,
    };
    let finish = |p: &ChartPoint, iterations: usize| -> Result<OracleSolution> {
        let rho1_prime = DensityOperator::normalized(&p.rho.embed(&log1.basis)?)?;
        Ok(OracleSolution {
            rho1_prime,
            utility: p.value,
            iterations,
            gradient_norm: p.residual.frobenius_norm(),
        })
    };

    const ARMIJO: f64 = 1e-4;
    // round-off in M and in the utility grows with lambda |ln rho1|
    let log_scale = 1.0 + objective.log_rho1.spectral().spectral_radius();
    let floor = 1e-13 * (1.0 + lambda * log_scale);
    let cap = 1e-11 * (1.0 + lambda * log_scale);
    let noise = 1e-14 * (1.0 + lambda * log_scale);

    let mut point = objective.at(objective.log_rho1.clone());
    let mut step = 0.5 / (1.0 + lambda);
    let mut previous: Option<(HermitianOperator, HermitianOperator)> = None;

    for iter in 0..iterations {
        let d_norm = point.residual.frobenius_norm();
        if d_norm <= floor {
            return finish(&point, iter);
        }
        if let Some((h_prev, d_prev)) = &previous {
            let s = point.h.sub(h_prev)?;
            let y = point.residual.sub(d_prev)?;
            let sy = trace_product(&s, &y)?;
            if sy > 0.0 {
                step = (trace_product(&s, &s)? / sy).clamp(1e-12, 1e12);
            }
        }
        let slope = trace_product(&point.gradient, &point.residual)?;
        let mut trial_step = step;
        let mut accepted = None;
        for _ in 0..60 {
            let candidate = objective.at(point.h.sub(&point.residual.scale(trial_step))?);
            let sufficient = candidate.value <= point.value - ARMIJO * trial_step * slope;
            // below the resolution of the utility, settle for a smaller residual
            let unresolved = candidate.value <= point.value + noise * (1.0 + point.value.abs())
                && candidate.residual.frobenius_norm() < d_norm;
            if sufficient || unresolved {
                accepted = Some(candidate);
                break;
            }
            trial_step *= 0.5;
        }
        let Some(next) = accepted else {
            if d_norm <= cap {
                return finish(&point, iter);
            }
            break;
        };
        let improvement = point.value - next.value;
        previous = Some((point.h.clone(), point.residual.clone()));
        point = next;
        step = trial_step;
        if improvement < tol && point.residual.frobenius_norm() <= cap {
            return finish(&point, iter + 1);
        }
    }
    let best = finish(&point, iterations)?;
    Err(Error::OracleNotConverged {
        iterations,
        gradient_norm: best.gradient_norm,
        best: Box::new(best.rho1_prime),
    })
}

/// First-order eigenvalue estimate for one eigenvector `|phi_j>` of `rho1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PerturbationEntry {
    pub index: usize,
    /// Eigenvalue `r_j` of `rho1`.
    pub r1: f64,
    /// `beta_j = <phi_j|Pi*|phi_j>`.
    pub overlap_weight: f64,
    /// Eigenvalue of `ln rho1 - Pi*/lambda` paired with `|phi_j>`.
    pub exact: f64,
    /// `ln r_j - beta_j / lambda`.
    pub first_order: f64,
    pub residual: f64,
    /// `sum_{k != j} |<phi_j|Pi*|phi_k>| / |r_j - r_k|`.
    pub gap_sum: f64,
    /// Whether `r_j` is within [`SIMPLE_SPECTRUM_TOL`] of a neighbouring eigenvalue.
    pub degenerate: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct PerturbationReport {
    pub lambda: f64,
    pub entries: Vec<PerturbationEntry>,
    pub strictly_positive: bool,
    pub simple_spectrum: bool,
    /// Smallest gap between consecutive eigenvalues of `rho1` on its support.
    pub min_gap: f64,
    /// Every `gap_sum` is below 1.
    pub gap_condition: bool,
    pub commuting: bool,
    pub max_residual: f64,
}

impl PerturbationReport {
    /// Strictly positive `rho1`, simple spectrum and the gap condition.
    pub fn assumptions_hold(&self) -> bool {
        self.strictly_positive && self.simple_spectrum && self.gap_condition
    }
}

/// Compares the exact spectrum of `ln rho1 - Pi*/lambda` with its
/// first-order expansion around the spectrum of `ln rho1`. Exact eigenvalues
/// are matched to `|phi_j>` by largest overlap.
pub fn perturbation_estimate(
    pair: &HypothesisPair,
    pi_star: &ProjectorMeasurement,
    lambda: f64,
) -> Result<PerturbationReport> {
    check_lambda(lambda)?;
    check_dims(pair.dim(), pi_star.dim())?;
    let log1 = support_log(pair.rho1(), DEFAULT_SUPPORT_EPS)?;
    let r = log1.rank();
    let ev = &log1.eigenvalues;
    // Pi* in the eigenbasis of rho1 (restricted to its support)
    let pi_phi = pi_star.op().compress(&log1.basis)?;
    let log_diag =
        HermitianOperator::from_diagonal(&ev.iter().map(|p| p.ln()).collect::<Vec<_>>())?;
    let perturbed = log_diag.sub(&pi_phi.scale(1.0 / lambda))?;
    let spec = perturbed.spectral();

    // greedy assignment of exact eigenpairs to unperturbed indices
    let mut candidates: Vec<(f64, usize, usize)> = Vec::with_capacity(r * r);
    for a in 0..r {
        for j in 0..r {
            candidates.push((spec.eigenvectors[(j, a)].norm_sqr(), a, j));
        }
    }
    candidates.sort_by(|x, y| y.0.total_cmp(&x.0));
    let mut exact_for = vec![None; r];
    let mut used = vec![false; r];
    for (_, a, j) in candidates {
        if exact_for[j].is_none() && !used[a] {
            exact_for[j] = Some(spec.eigenvalues[a]);
            used[a] = true;
        }
    }

    let mut min_gap = f64::INFINITY;
    for j in 1..r {
        min_gap = min_gap.min(ev[j - 1] - ev[j]);
    }
    let mut entries = Vec::with_capacity(r);
    for j in 0..r {
        let beta = pi_phi.get(j, j).re;
        let first_order = ev[j].ln() - beta / lambda;
        let exact = exact_for[j].expect("assignment covers every index");
        let degenerate = (j > 0 && ev[j - 1] - ev[j] <= SIMPLE_SPECTRUM_TOL)
            || (j + 1 < r && ev[j] - ev[j + 1] <= SIMPLE_SPECTRUM_TOL);
        let gap_sum = (0..r)
            .filter(|&k| k != j)
            .map(|k| pi_phi.get(j, k).norm() / (ev[j] - ev[k]).abs())
            .sum();
        entries.push(PerturbationEntry {
            index: j,
            r1: ev[j],
            overlap_weight: beta,
            exact,
            first_order,
            residual: exact - first_order,
            gap_sum,
            degenerate,
        });
    }
    let max_residual = entries.iter().fold(0.0f64, |m, e| m.max(e.residual.abs()));
    Ok(PerturbationReport {
        lambda,
        strictly_positive: !log1.is_rank_deficient(),
        simple_spectrum: entries.iter().all(|e| !e.degenerate),
        gap_condition: entries.iter().all(|e| e.gap_sum < 1.0),
        commuting: pair.rho1().op().commutator_norm(pi_star.op())? <= COMMUTING_TOL,
        min_gap,
        max_residual,
        entries,
    })
}

/// Overlap weights `beta_i = sum_{eta_j > 0} |<phi_i|eta_j>|^2 = <phi_i|Pi*|phi_i>`
/// for the eigenvectors of `rho1`, ordered by descending eigenvalue.
pub fn overlap_weights(rho1: &DensityOperator, pi_star: &ProjectorMeasurement) -> Result<Vec<f64>> {
    check_dims(rho1.dim(), pi_star.dim())?;
    let spec = rho1.op().spectral();
    let pi_phi = pi_star.op().compress(&spec.eigenvectors)?;
    Ok(pi_phi.diagonal_real())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::detection::helstrom_measurement;
    use crate::operator::{c, CVector};
    use approx::assert_abs_diff_eq;

    fn radar_pair() -> HypothesisPair {
        HypothesisPair::new(
            DensityOperator::from_diagonal(&[0.6, 0.4, 0.0]).unwrap(),
            DensityOperator::from_diagonal(&[0.06, 0.04, 0.9]).unwrap(),
            0.5,
            0.5,
        )
        .unwrap()
    }

    fn diagonal_closed_form(r: &[f64], beta: &[f64], lambda: f64) -> Vec<f64> {
        let w: Vec<f64> = r
            .iter()
            .zip(beta)
            .map(|(ri, bi)| ri * (-bi / lambda).exp())
            .collect();
        let z: f64 = w.iter().sum();
        w.iter().map(|x| x / z).collect()
    }

    #[test]
    fn radar_attack_at_unit_lambda() {
        let pair = radar_pair();
        let h = helstrom_measurement(&pair);
        let sol = optimal_attack(&pair, &h.pi1, 1.0).unwrap();
        let expected = diagonal_closed_form(&[0.06, 0.04, 0.9], &[0.0, 0.0, 1.0], 1.0);
        assert_abs_diff_eq!(0.1 + 0.9 * (-1.0f64).exp(), 0.431091, epsilon = 1e-6);
        assert_abs_diff_eq!(sol.z1, 0.1 + 0.9 * (-1.0f64).exp(), epsilon = 1e-13);
        for (i, e) in expected.iter().enumerate() {
            assert_abs_diff_eq!(sol.rho1_prime.op().get(i, i).re, *e, epsilon = 1e-13);
        }
        for (i, e) in [0.13918, 0.09279, 0.76803].iter().enumerate() {
            assert_abs_diff_eq!(sol.rho1_prime.op().get(i, i).re, *e, epsilon = 1e-5);
        }
        assert!(sol.rho1_prime.op().is_diagonal(1e-14));
        assert_abs_diff_eq!(sol.genuine_p_detect, 0.76803, epsilon = 1e-5);
        assert_eq!(sol.genuine_p_false, 0.0);
        assert_eq!(sol.rho0_prime, *pair.rho0());
        let (gd, gf) = genuine_rates(&h.pi1, &sol).unwrap();
        assert_eq!((gd, gf), (sol.genuine_p_detect, sol.genuine_p_false));
    }

    #[test]
    fn radar_utility_example() {
        let pair = radar_pair();
        let h = helstrom_measurement(&pair);
        let rho1p = DensityOperator::from_diagonal(&diagonal_closed_form(
            &[0.06, 0.04, 0.9],
            &[0.0, 0.0, 1.0],
            1.0,
        ))
        .unwrap();
        // S(rho1' || rho1) evaluated on the diagonal
        let s: f64 = [0.06, 0.04, 0.9]
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let p = rho1p.op().get(i, i).re;
                p * (p / r).ln()
            })
            .sum();
        assert_abs_diff_eq!(s, 0.073404, epsilon = 1e-6);
        let u = attacker_utility(&rho1p, pair.rho0(), &h.pi1, &pair, 1.0)
            .unwrap()
            .finite()
            .unwrap();
        assert_abs_diff_eq!(u, rho1p.op().get(2, 2).re + s, epsilon = 1e-12);
        assert_abs_diff_eq!(u, 0.841434, epsilon = 1e-6);
        // minimum of the Gibbs problem is -lambda ln Z1
        assert_abs_diff_eq!(u, -(0.1 + 0.9 * (-1.0f64).exp()).ln(), epsilon = 1e-12);
    }

    #[test]
    fn utility_at_undistorted_point_is_detection_rate() {
        let pair = radar_pair();
        let h = helstrom_measurement(&pair);
        let u = attacker_utility(pair.rho1(), pair.rho0(), &h.pi1, &pair, 3.0).unwrap();
        assert_abs_diff_eq!(u.finite().unwrap(), h.p_detect, epsilon = 1e-12);
    }

    #[test]
    fn utility_infinite_on_support_violation() {
        let pair = HypothesisPair::new(
            DensityOperator::from_diagonal(&[0.5, 0.5]).unwrap(),
            DensityOperator::from_diagonal(&[1.0, 0.0]).unwrap(),
            0.5,
            0.5,
        )
        .unwrap();
        let h = helstrom_measurement(&pair);
        let u = attacker_utility(
            &DensityOperator::maximally_mixed(2),
            pair.rho0(),
            &h.pi1,
            &pair,
            1.0,
        )
        .unwrap();
        assert!(u.is_infinite());
    }

    #[test]
    fn lambda_must_be_positive() {
        let pair = radar_pair();
        let h = helstrom_measurement(&pair);
        for bad in [0.0, -1.0, f64::NAN, f64::INFINITY] {
            assert!(matches!(
                optimal_attack(&pair, &h.pi1, bad),
                Err(Error::InvalidLambda(_))
            ));
        }
        assert!(detection_bounds(0.5, 0.0).is_err());
    }

    #[test]
    fn huge_lambda_leaves_state_alone() {
        let pair = radar_pair();
        let h = helstrom_measurement(&pair);
        let sol = optimal_attack(&pair, &h.pi1, 1e9).unwrap();
        assert!(sol.rho1_prime.distance(pair.rho1()).unwrap() < 1e-8);
        assert_abs_diff_eq!(sol.genuine_p_detect, h.p_detect, epsilon = 1e-8);
    }

    #[test]
    fn empty_projector_gives_zero_rates() {
        let rho = DensityOperator::from_diagonal(&[0.3, 0.7]).unwrap();
        let pair = HypothesisPair::new(rho.clone(), rho, 0.5, 0.5).unwrap();
        let pi = ProjectorMeasurement::zero(2);
        let sol = optimal_attack(&pair, &pi, 1.0).unwrap();
        assert_eq!(genuine_rates(&pi, &sol).unwrap(), (0.0, 0.0));
        assert!(sol.rho1_prime.distance(pair.rho1()).unwrap() < 1e-14);
    }

    #[test]
    fn rank_deficient_rho1_stays_on_support() {
        let rho0 = DensityOperator::maximally_mixed(3);
        let rho1 = DensityOperator::pure(&CVector::from_vec(vec![c(1.0), c(1.0), c(0.0)])).unwrap();
        let mixed = HermitianOperator::from_real_rows(&[
            vec![0.3, 0.1, 0.0],
            vec![0.1, 0.3, 0.0],
            vec![0.0, 0.0, 0.0],
        ])
        .unwrap();
        let rho1 = DensityOperator::normalized(&rho1.op().add(&mixed).unwrap()).unwrap();
        let pair = HypothesisPair::new(rho0, rho1, 0.5, 0.5).unwrap();
        let h = helstrom_measurement(&pair);
        let sol = optimal_attack(&pair, &h.pi1, 0.7).unwrap();
        let m = sol.rho1_prime.op();
        for k in 0..3 {
            assert!(m.get(2, k).norm() < 1e-14);
        }
        assert_abs_diff_eq!(m.trace(), 1.0, epsilon = 1e-12);
        let oracle = oracle_attack(&pair, &h.pi1, 0.7, 20_000, 1e-15).unwrap();
        assert!(oracle.rho1_prime.distance(&sol.rho1_prime).unwrap() < 1e-5);
    }

    #[test]
    fn bounds_examples() {
        let b = detection_bounds(0.9, 1.0).unwrap();
        assert_abs_diff_eq!(b.lower, 0.9 * (-1.0f64).exp(), epsilon = 1e-15);
        assert_abs_diff_eq!(b.lower, 0.33109, epsilon = 1e-5);
        assert_eq!(b.upper, 0.9);
        let r = BoundReport::evaluate(0.9, 0.76803, 1.0).unwrap();
        assert!(r.satisfied());
        assert_eq!(
            detection_bounds(0.0, 1.0).unwrap(),
            DetectionBounds {
                lower: 0.0,
                upper: 0.0
            }
        );
        let b = detection_bounds(0.9, 1e12).unwrap();
        assert!(b.upper - b.lower < 1e-11);
        let r = BoundReport::evaluate(0.9, 0.95, 1.0).unwrap();
        assert!(!r.upper_satisfied && r.lower_satisfied);
    }

    #[test]
    fn oracle_on_one_parameter_simplex() {
        // minimize s + (s ln 2s + (1-s) ln 2(1-s)): s* = e^-1 / (1 + e^-1)
        let f = |s: f64| s + s * (s / 0.5).ln() + (1.0 - s) * ((1.0 - s) / 0.5).ln();
        let (mut lo, mut hi) = (1e-9, 1.0 - 1e-9);
        for _ in 0..200 {
            let m1 = lo + (hi - lo) / 3.0;
            let m2 = hi - (hi - lo) / 3.0;
            if f(m1) < f(m2) {
                hi = m2;
            } else {
                lo = m1;
            }
        }
        let s_star = 0.5 * (lo + hi);
        assert_abs_diff_eq!(s_star, 0.26894, epsilon = 1e-5);

        let pair = HypothesisPair::new(
            DensityOperator::from_diagonal(&[0.9, 0.1]).unwrap(),
            DensityOperator::maximally_mixed(2),
            0.5,
            0.5,
        )
        .unwrap();
        let pi = ProjectorMeasurement::new(HermitianOperator::from_diagonal(&[1.0, 0.0]).unwrap())
            .unwrap();
        let sol = oracle_attack(&pair, &pi, 1.0, 10_000, 1e-15).unwrap();
        assert_abs_diff_eq!(sol.rho1_prime.op().get(0, 0).re, s_star, epsilon = 1e-7);
        assert_abs_diff_eq!(
            sol.rho1_prime.op().get(1, 1).re,
            1.0 - s_star,
            epsilon = 1e-7
        );
    }

    #[test]
    fn oracle_with_huge_lambda_returns_rho1() {
        let pair = radar_pair();
        let h = helstrom_measurement(&pair);
        let sol = oracle_attack(&pair, &h.pi1, 1e9, 10_000, 1e-15).unwrap();
        assert!(sol.rho1_prime.distance(pair.rho1()).unwrap() < 1e-7);
    }

    #[test]
    fn oracle_matches_closed_form_on_noncommuting_qubit() {
        let plus = DensityOperator::pure(&CVector::from_vec(vec![c(1.0), c(1.0)])).unwrap();
        let rho1 = DensityOperator::from_diagonal(&[0.99, 0.01]).unwrap();
        let pair = HypothesisPair::new(plus, rho1, 0.5, 0.5).unwrap();
        let h = helstrom_measurement(&pair);
        assert!(pair.rho1().op().commutator_norm(h.pi1.op()).unwrap() > 0.1);
        let closed = optimal_attack(&pair, &h.pi1, 2.0).unwrap();
        let oracle = oracle_attack(&pair, &h.pi1, 2.0, 50_000, 1e-15).unwrap();
        assert!(oracle.rho1_prime.distance(&closed.rho1_prime).unwrap() < 1e-5);
        assert!(closed.utility.finite().unwrap() <= oracle.utility + 1e-9);
    }

    #[test]
    fn oracle_reports_non_convergence() {
        let plus = DensityOperator::pure(&CVector::from_vec(vec![c(1.0), c(1.0)])).unwrap();
        let rho1 = DensityOperator::from_diagonal(&[0.7, 0.3]).unwrap();
        let pair = HypothesisPair::new(plus, rho1, 0.5, 0.5).unwrap();
        let h = helstrom_measurement(&pair);
        match oracle_attack(&pair, &h.pi1, 1.0, 1, 1e-15) {
            Err(Error::OracleNotConverged {
                iterations, best, ..
            }) => {
                assert_eq!(iterations, 1);
                assert_eq!(best.dim(), 2);
            }
            other => panic!("expected non-convergence, got {other:?}"),
        }
    }

    #[test]
    fn perturbation_unperturbed_and_commuting() {
        let pair = radar_pair();
        let zero = ProjectorMeasurement::zero(3);
        let rep = perturbation_estimate(&pair, &zero, 5.0).unwrap();
        assert!(rep.entries.iter().all(|e| e.residual.abs() < 1e-14));

        let h = helstrom_measurement(&pair);
        let rep = perturbation_estimate(&pair, &h.pi1, 0.5).unwrap();
        assert!(rep.commuting);
        assert!(rep.strictly_positive && rep.simple_spectrum);
        assert!(rep.max_residual < 1e-13, "{}", rep.max_residual);
        let top = &rep.entries[0];
        assert_abs_diff_eq!(top.r1, 0.9, epsilon = 1e-14);
        assert_abs_diff_eq!(top.overlap_weight, 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(top.exact, 0.9f64.ln() - 2.0, epsilon = 1e-13);
    }

    #[test]
    fn perturbation_flags_degenerate_spectrum() {
        let rho0 = DensityOperator::from_diagonal(&[0.5, 0.3, 0.2]).unwrap();
        let rho1 = DensityOperator::from_diagonal(&[0.4, 0.4, 0.2]).unwrap();
        let pair = HypothesisPair::new(rho0, rho1, 0.5, 0.5).unwrap();
        let h = helstrom_measurement(&pair);
        let rep = perturbation_estimate(&pair, &h.pi1, 10.0).unwrap();
        assert!(!rep.simple_spectrum);
        assert!(!rep.assumptions_hold());
        assert!(rep.entries[0].degenerate && rep.entries[1].degenerate);
        assert!(!rep.entries[2].degenerate);
    }

    #[test]
    fn overlap_weights_match_projector_diagonal() {
        let pair = radar_pair();
        let h = helstrom_measurement(&pair);
        let beta = overlap_weights(pair.rho1(), &h.pi1).unwrap();
        assert_abs_diff_eq!(beta[0], 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(beta[1] + beta[2], 0.0, epsilon = 1e-14);
    }
}
