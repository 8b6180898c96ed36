//! Dense Hermitian operator algebra.
//!
//! Every matrix function here (logarithm, exponential) goes through the
//! spectral decomposition of a symmetrized operator, so results are Hermitian
//! by construction. Real symmetric matrices are the special case with zero
//! imaginary parts.

use std::fmt;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::literal::{self, MatrixLiteral};

/// Dense complex matrix used as the storage type for every operator.
pub type CMatrix = DMatrix<Complex64>;
/// Dense complex column vector.
pub type CVector = DVector<Complex64>;

/// Entrywise tolerance for `A_ij = conj(A_ji)`, scaled by `max(1, max |A_ij|)`.
pub const HERMITIAN_TOL: f64 = 1e-10;
/// Tolerance on `Tr(rho) = 1`.
pub const TRACE_TOL: f64 = 1e-10;
/// Smallest eigenvalue accepted as positive semidefinite.
pub const PSD_TOL: f64 = 1e-10;
/// Default eigenvalue cutoff separating the support of a density operator
/// from its kernel.
pub const DEFAULT_SUPPORT_EPS: f64 = 1e-12;
/// Weight `Tr(nu1 (1 - P0))` above which `nu1` is considered to leave the
/// support of `nu0`.
pub const SUPPORT_LEAK_TOL: f64 = 1e-10;

/// Relative eigenvalue cutoff: `|w| <= ZERO_EIG_REL * max(1, spectral radius)`
/// counts as zero.
pub const ZERO_EIG_REL: f64 = 1e-12;

#[inline]
pub(crate) fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// `(M + M^dag) / 2`.
pub(crate) fn symmetrize(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()).scale(0.5)
}

/// A finite complex Hermitian matrix.
#[derive(Clone, PartialEq)]
pub struct HermitianOperator {
    m: CMatrix,
}

impl HermitianOperator {
    /// Validates squareness, finiteness and Hermiticity, then stores the
    /// exactly symmetrized matrix.
    pub fn new(m: CMatrix) -> Result<Self> {
        let (rows, cols) = m.shape();
        if rows == 0 || cols == 0 {
            return Err(Error::Empty);
        }
        if rows != cols {
            return Err(Error::NotSquare { rows, cols });
        }
        let mut scale = 1.0f64;
        for j in 0..cols {
            for i in 0..rows {
                let z = m[(i, j)];
                if !z.re.is_finite() || !z.im.is_finite() {
                    return Err(Error::NonFinite { row: i, col: j });
                }
                scale = scale.max(z.norm());
            }
        }
        let tolerance = HERMITIAN_TOL * scale;
        let mut deviation = 0.0f64;
        for i in 0..rows {
            for j in i..cols {
                deviation = deviation.max((m[(i, j)] - m[(j, i)].conj()).norm());
            }
        }
        if deviation > tolerance {
            return Err(Error::NotHermitian {
                deviation,
                tolerance,
            });
        }
        Ok(Self { m: symmetrize(&m) })
    }

    /// Symmetrizes without validation. Used for results of operations that are
    /// Hermitian up to rounding.
    pub(crate) fn from_matrix_unchecked(m: CMatrix) -> Self {
        Self { m: symmetrize(&m) }
    }

    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::Empty);
        }
        if let Some(bad) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::NotSquare {
                rows: n,
                cols: bad.len(),
            });
        }
        Self::new(CMatrix::from_fn(n, n, |i, j| c(rows[i][j])))
    }

    pub fn from_diagonal(diag: &[f64]) -> Result<Self> {
        if diag.is_empty() {
            return Err(Error::Empty);
        }
        let v = DVector::from_iterator(diag.len(), diag.iter().map(|&x| c(x)));
        Self::new(CMatrix::from_diagonal(&v))
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            m: CMatrix::zeros(dim, dim),
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            m: CMatrix::identity(dim, dim),
        }
    }

    /// Rank-one projector `|v><v| / <v|v>`.
    pub fn projector_onto(v: &CVector) -> Result<Self> {
        let norm2 = v.norm_squared();
        if v.is_empty() {
            return Err(Error::Empty);
        }
        if norm2.is_nan() || norm2 <= 0.0 || !norm2.is_finite() {
            return Err(Error::EmptySupport { eps: 0.0 });
        }
        Ok(Self::from_matrix_unchecked(
            (v * v.adjoint()).unscale(norm2),
        ))
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.m
    }

    pub fn into_matrix(self) -> CMatrix {
        self.m
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.m[(i, j)]
    }

    /// Real trace.
    pub fn trace(&self) -> f64 {
        self.m.trace().re
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.m.norm()
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        check_dims(self.dim(), other.dim())?;
        Ok(Self::from_matrix_unchecked(&self.m + &other.m))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        check_dims(self.dim(), other.dim())?;
        Ok(Self::from_matrix_unchecked(&self.m - &other.m))
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::from_matrix_unchecked(self.m.scale(s))
    }

    /// `||A - B||_F`.
    pub fn distance(&self, other: &Self) -> Result<f64> {
        check_dims(self.dim(), other.dim())?;
        Ok((&self.m - &other.m).norm())
    }

    /// `||[A, B]||_F`.
    pub fn commutator_norm(&self, other: &Self) -> Result<f64> {
        check_dims(self.dim(), other.dim())?;
        Ok((&self.m * &other.m - &other.m * &self.m).norm())
    }

    /// `V^dag A V` for a `d x r` matrix `V` with orthonormal columns.
    pub fn compress(&self, basis: &CMatrix) -> Result<Self> {
        check_dims(self.dim(), basis.nrows())?;
        Ok(Self::from_matrix_unchecked(
            basis.adjoint() * &self.m * basis,
        ))
    }

    /// `V A V^dag` for a `d x r` matrix `V`, the inverse of [`compress`](Self::compress).
    pub fn embed(&self, basis: &CMatrix) -> Result<Self> {
        check_dims(self.dim(), basis.ncols())?;
        Ok(Self::from_matrix_unchecked(
            basis * &self.m * basis.adjoint(),
        ))
    }

    pub fn spectral(&self) -> SpectralDecomposition {
        spectral_decompose(self)
    }

    /// Applies a real scalar function through the spectral decomposition.
    pub fn map_spectrum(&self, f: impl Fn(f64) -> f64) -> Self {
        self.spectral().rebuild(f)
    }

    /// Whether every entry off the diagonal is at most `tol` in modulus.
    pub fn is_diagonal(&self, tol: f64) -> bool {
        let d = self.dim();
        (0..d).all(|i| (0..d).all(|j| i == j || self.m[(i, j)].norm() <= tol))
    }

    pub fn diagonal_real(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.m[(i, i)].re).collect()
    }
}

impl fmt::Debug for HermitianOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("HermitianOperator")
            .field("dim", &self.dim())
            .field("entries", &literal::to_literal(&self.m))
            .finish()
    }
}

impl Serialize for HermitianOperator {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        literal::to_literal(&self.m).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for HermitianOperator {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let lit = MatrixLiteral::deserialize(deserializer)?;
        let m = literal::from_literal(&lit).map_err(serde::de::Error::custom)?;
        HermitianOperator::new(m).map_err(serde::de::Error::custom)
    }
}

pub(crate) fn check_dims(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::DimensionMismatch { expected, found });
    }
    Ok(())
}

/// Eigenvalues in descending order together with the matching orthonormal
/// eigenvectors stored as columns.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: CMatrix,
}

impl SpectralDecomposition {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvector(&self, j: usize) -> CVector {
        self.eigenvectors.column(j).into_owned()
    }

    pub fn spectral_radius(&self) -> f64 {
        self.eigenvalues
            .iter()
            .fold(0.0f64, |acc, w| acc.max(w.abs()))
    }

    /// Cutoff below which an eigenvalue counts as zero.
    pub fn zero_threshold(&self) -> f64 {
        ZERO_EIG_REL * self.spectral_radius().max(1.0)
    }

    /// `sum_j f(w_j) |v_j><v_j|`.
    pub fn rebuild(&self, f: impl Fn(f64) -> f64) -> HermitianOperator {
        let v = &self.eigenvectors;
        let mut scaled = v.clone();
        for (j, &w) in self.eigenvalues.iter().enumerate() {
            let fw = f(w);
            scaled.column_mut(j).scale_mut(fw);
        }
        HermitianOperator::from_matrix_unchecked(scaled * v.adjoint())
    }

    pub fn reconstruct(&self) -> HermitianOperator {
        self.rebuild(|w| w)
    }

    /// Sum of the eigenprojectors whose eigenvalue satisfies `keep`.
    pub fn projector_where(&self, keep: impl Fn(f64) -> bool) -> HermitianOperator {
        self.rebuild(|w| if keep(w) { 1.0 } else { 0.0 })
    }

    /// Columns of the eigenvectors whose eigenvalue satisfies `keep`.
    pub fn basis_where(&self, keep: impl Fn(f64) -> bool) -> CMatrix {
        let idx: Vec<usize> = (0..self.dim())
            .filter(|&j| keep(self.eigenvalues[j]))
            .collect();
        CMatrix::from_fn(self.eigenvectors.nrows(), idx.len(), |i, k| {
            self.eigenvectors[(i, idx[k])]
        })
    }
}

/// Spectral decomposition of a Hermitian operator, eigenvalues descending.
pub fn spectral_decompose(a: &HermitianOperator) -> SpectralDecomposition {
    let eig = a.m.clone().symmetric_eigen();
    let d = a.dim();
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));
    let eigenvalues = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let eigenvectors = CMatrix::from_fn(d, d, |r, k| eig.eigenvectors[(r, order[k])]);
    SpectralDecomposition {
        eigenvalues,
        eigenvectors,
    }
}

/// A unit-trace positive semidefinite Hermitian operator.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    op: HermitianOperator,
}

impl DensityOperator {
    pub fn new(op: HermitianOperator) -> Result<Self> {
        let trace = op.trace();
        if (trace - 1.0).abs() > TRACE_TOL {
            return Err(Error::InvalidTrace {
                trace,
                tolerance: TRACE_TOL,
            });
        }
        let spec = op.spectral();
        if let Some((index, &eigenvalue)) = spec
            .eigenvalues
            .iter()
            .enumerate()
            .find(|(_, &w)| w < -PSD_TOL)
        {
            return Err(Error::NotPositive { index, eigenvalue });
        }
        Ok(Self { op })
    }

    /// Divides a positive semidefinite operator by its trace.
    pub fn normalized(op: &HermitianOperator) -> Result<Self> {
        let trace = op.trace();
        if trace.is_nan() || trace <= 0.0 || !trace.is_finite() {
            return Err(Error::InvalidTrace {
                trace,
                tolerance: TRACE_TOL,
            });
        }
        Self::new(op.scale(1.0 / trace))
    }

    pub fn from_diagonal(probabilities: &[f64]) -> Result<Self> {
        Self::new(HermitianOperator::from_diagonal(probabilities)?)
    }

    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        Self::new(HermitianOperator::from_real_rows(rows)?)
    }

    /// `|psi><psi|` for a (not necessarily normalized) state vector.
    pub fn pure(psi: &CVector) -> Result<Self> {
        Self::new(HermitianOperator::projector_onto(psi)?)
    }

    /// Computational basis state `|k><k|` in dimension `dim`.
    pub fn basis_state(dim: usize, k: usize) -> Result<Self> {
        let mut p = vec![0.0; dim];
        *p.get_mut(k).ok_or(Error::DimensionMismatch {
            expected: dim,
            found: k + 1,
        })? = 1.0;
        Self::from_diagonal(&p)
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self {
            op: HermitianOperator::identity(dim).scale(1.0 / dim as f64),
        }
    }

    pub fn dim(&self) -> usize {
        self.op.dim()
    }

    pub fn op(&self) -> &HermitianOperator {
        &self.op
    }

    pub fn matrix(&self) -> &CMatrix {
        self.op.matrix()
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        self.op.spectral().eigenvalues
    }

    pub fn distance(&self, other: &Self) -> Result<f64> {
        self.op.distance(&other.op)
    }
}

impl Serialize for DensityOperator {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.op.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for DensityOperator {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let op = HermitianOperator::deserialize(deserializer)?;
        DensityOperator::new(op).map_err(serde::de::Error::custom)
    }
}

/// `ln rho` restricted to the support of `rho`.
#[derive(Debug, Clone)]
pub struct SupportLog {
    /// `sum_{p_i > eps} ln p_i |v_i><v_i|`; zero on the kernel.
    pub log: HermitianOperator,
    /// Orthogonal projector onto the support.
    pub projector: HermitianOperator,
    /// `d x rank` matrix whose columns span the support.
    pub basis: CMatrix,
    /// Eigenvalues of `rho` on the support, descending.
    pub eigenvalues: Vec<f64>,
}

impl SupportLog {
    pub fn rank(&self) -> usize {
        self.eigenvalues.len()
    }

    /// True when the kernel is nontrivial and the off-support block of
    /// [`log`](Self::log) was zeroed.
    pub fn is_rank_deficient(&self) -> bool {
        self.rank() < self.log.dim()
    }
}

pub fn support_log(rho: &DensityOperator, eps: f64) -> Result<SupportLog> {
    if eps.is_nan() || eps <= 0.0 {
        return Err(Error::InvalidParameter {
            name: "eps",
            value: eps,
            reason: "support cutoff must be positive",
        });
    }
    let spec = rho.op().spectral();
    let on_support = |w: f64| w > eps;
    let eigenvalues: Vec<f64> = spec
        .eigenvalues
        .iter()
        .copied()
        .filter(|&w| on_support(w))
        .collect();
    if eigenvalues.is_empty() {
        return Err(Error::EmptySupport { eps });
    }
    Ok(SupportLog {
        log: spec.rebuild(|w| if on_support(w) { w.ln() } else { 0.0 }),
        projector: spec.projector_where(on_support),
        basis: spec.basis_where(on_support),
        eigenvalues,
    })
}

/// `exp(A) = sum_j e^{w_j} |v_j><v_j|`.
pub fn matrix_exp(a: &HermitianOperator) -> HermitianOperator {
    a.map_spectrum(f64::exp)
}

/// A real number or `+inf`, kept as an explicit variant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Extended {
    Finite(f64),
    Infinite,
}

impl Extended {
    pub fn finite(self) -> Option<f64> {
        match self {
            Extended::Finite(v) => Some(v),
            Extended::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Extended::Infinite)
    }

    /// Lossy view as `f64`, mapping the sentinel to `f64::INFINITY`.
    pub fn to_f64(self) -> f64 {
        self.finite().unwrap_or(f64::INFINITY)
    }
}

impl fmt::Display for Extended {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Extended::Finite(v) => write!(f, "{v}"),
            Extended::Infinite => f.write_str("+inf"),
        }
    }
}

/// Von Neumann relative entropy `S(nu1 || nu0) = Tr(nu1 (ln nu1 - ln nu0))`.
///
/// Returns [`Extended::Infinite`] when `nu1` puts weight above
/// [`SUPPORT_LEAK_TOL`] outside the support of `nu0`.
pub fn relative_entropy(nu1: &DensityOperator, nu0: &DensityOperator) -> Result<Extended> {
    check_dims(nu1.dim(), nu0.dim())?;
    let log0 = support_log(nu0, DEFAULT_SUPPORT_EPS)?;
    let outside = HermitianOperator::identity(nu0.dim()).sub(&log0.projector)?;
    if trace_product(nu1.op(), &outside)? > SUPPORT_LEAK_TOL {
        return Ok(Extended::Infinite);
    }
    let neg_entropy: f64 = nu1
        .eigenvalues()
        .into_iter()
        .filter(|&p| p > DEFAULT_SUPPORT_EPS)
        .map(|p| p * p.ln())
        .sum();
    let cross = trace_product(nu1.op(), &log0.log)?;
    Ok(Extended::Finite(neg_entropy - cross))
}

/// Real part of `Tr(AB)`.
pub fn trace_product(a: &HermitianOperator, b: &HermitianOperator) -> Result<f64> {
    check_dims(a.dim(), b.dim())?;
    let d = a.dim();
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..d {
        for j in 0..d {
            acc += a.m[(i, j)] * b.m[(j, i)];
        }
    }
    let scale = a.frobenius_norm() * b.frobenius_norm();
    if acc.im.abs() > 1e-10 * scale.max(1.0) {
        return Err(Error::ImaginaryTrace { residue: acc.im });
    }
    Ok(acc.re)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn pauli_x() -> HermitianOperator {
        HermitianOperator::from_real_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap()
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = CMatrix::from_row_slice(2, 2, &[c(0.0), c(1.0), c(0.5), c(0.0)]);
        assert!(matches!(
            HermitianOperator::new(m),
            Err(Error::NotHermitian { .. })
        ));
        let m = CMatrix::from_row_slice(1, 2, &[c(0.0), c(1.0)]);
        assert!(matches!(
            HermitianOperator::new(m),
            Err(Error::NotSquare { .. })
        ));
        let m = CMatrix::from_row_slice(1, 1, &[c(f64::NAN)]);
        assert!(matches!(
            HermitianOperator::new(m),
            Err(Error::NonFinite { .. })
        ));
    }

    #[test]
    fn identity_spectrum() {
        let s = spectral_decompose(&HermitianOperator::identity(3));
        assert_eq!(s.eigenvalues.len(), 3);
        for w in s.eigenvalues {
            assert_abs_diff_eq!(w, 1.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn diagonal_spectrum_is_sorted_descending() {
        let a = HermitianOperator::from_diagonal(&[-0.54, -0.36, 0.9]).unwrap();
        let s = spectral_decompose(&a);
        let expected = [0.9, -0.36, -0.54];
        for (w, e) in s.eigenvalues.iter().zip(expected) {
            assert_abs_diff_eq!(*w, e, epsilon = 1e-14);
        }
    }

    #[test]
    fn pauli_x_spectrum() {
        let s = spectral_decompose(&pauli_x());
        assert_abs_diff_eq!(s.eigenvalues[0], 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(s.eigenvalues[1], -1.0, epsilon = 1e-14);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let plus = s.eigenvector(0);
        let minus = s.eigenvector(1);
        // eigenvectors are defined up to a phase
        assert_abs_diff_eq!(plus[0].norm(), h, epsilon = 1e-12);
        assert_abs_diff_eq!((plus[1] / plus[0] - c(1.0)).norm(), 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(minus[0].norm(), h, epsilon = 1e-12);
        assert_abs_diff_eq!((minus[1] / minus[0] + c(1.0)).norm(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn support_log_examples() {
        let half = DensityOperator::maximally_mixed(2);
        let l = support_log(&half, DEFAULT_SUPPORT_EPS).unwrap();
        assert_eq!(l.rank(), 2);
        assert!(!l.is_rank_deficient());
        for i in 0..2 {
            assert_abs_diff_eq!(l.log.get(i, i).re, 0.5f64.ln(), epsilon = 1e-14);
        }

        let pure = DensityOperator::from_diagonal(&[1.0, 0.0]).unwrap();
        let l = support_log(&pure, DEFAULT_SUPPORT_EPS).unwrap();
        assert_eq!(l.rank(), 1);
        assert!(l.is_rank_deficient());
        assert!(l.log.frobenius_norm() < 1e-14);
        assert_abs_diff_eq!(l.projector.get(0, 0).re, 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(l.projector.get(1, 1).re, 0.0, epsilon = 1e-14);

        let rho = DensityOperator::from_diagonal(&[0.06, 0.04, 0.9]).unwrap();
        let l = support_log(&rho, DEFAULT_SUPPORT_EPS).unwrap();
        for (i, p) in [0.06f64, 0.04, 0.9].iter().enumerate() {
            assert_abs_diff_eq!(l.log.get(i, i).re, p.ln(), epsilon = 1e-13);
        }
    }

    #[test]
    fn support_log_rejects_empty_support() {
        let rho = DensityOperator::maximally_mixed(2);
        assert!(matches!(
            support_log(&rho, 0.9),
            Err(Error::EmptySupport { .. })
        ));
        assert!(support_log(&rho, 0.0).is_err());
    }

    #[test]
    fn matrix_exp_examples() {
        let e = matrix_exp(&HermitianOperator::zeros(3));
        assert!(e.distance(&HermitianOperator::identity(3)).unwrap() < 1e-14);

        let l = HermitianOperator::from_diagonal(&[0.5f64.ln(), 0.5f64.ln()]).unwrap();
        let e = matrix_exp(&l);
        assert!(
            e.distance(&HermitianOperator::from_diagonal(&[0.5, 0.5]).unwrap())
                .unwrap()
                < 1e-14
        );

        let e = matrix_exp(&pauli_x());
        let (ch, sh) = (1f64.cosh(), 1f64.sinh());
        assert_abs_diff_eq!(ch, 1.5431, epsilon = 1e-4);
        assert_abs_diff_eq!(sh, 1.1752, epsilon = 1e-4);
        let expected = HermitianOperator::from_real_rows(&[vec![ch, sh], vec![sh, ch]]).unwrap();
        assert!(e.distance(&expected).unwrap() < 1e-13);
    }

    #[test]
    fn relative_entropy_examples() {
        let rho = DensityOperator::from_diagonal(&[0.06, 0.04, 0.9]).unwrap();
        let s = relative_entropy(&rho, &rho).unwrap().finite().unwrap();
        assert_abs_diff_eq!(s, 0.0, epsilon = 1e-13);

        let pure = DensityOperator::from_diagonal(&[1.0, 0.0]).unwrap();
        let mixed = DensityOperator::maximally_mixed(2);
        let s = relative_entropy(&pure, &mixed).unwrap().finite().unwrap();
        assert_abs_diff_eq!(s, std::f64::consts::LN_2, epsilon = 1e-13);

        assert_eq!(relative_entropy(&mixed, &pure).unwrap(), Extended::Infinite);
    }

    #[test]
    fn relative_entropy_dimension_mismatch() {
        let a = DensityOperator::maximally_mixed(2);
        let b = DensityOperator::maximally_mixed(3);
        assert!(matches!(
            relative_entropy(&a, &b),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn trace_product_examples() {
        let rho = DensityOperator::from_diagonal(&[0.06, 0.04, 0.9]).unwrap();
        let one = HermitianOperator::identity(3);
        assert_abs_diff_eq!(trace_product(&one, rho.op()).unwrap(), 1.0, epsilon = 1e-14);
        let pi = HermitianOperator::from_diagonal(&[0.0, 0.0, 1.0]).unwrap();
        assert_abs_diff_eq!(trace_product(&pi, rho.op()).unwrap(), 0.9, epsilon = 1e-14);

        let plus = CVector::from_vec(vec![c(1.0), c(1.0)]);
        let pi = HermitianOperator::projector_onto(&plus).unwrap();
        let zero = DensityOperator::basis_state(2, 0).unwrap();
        assert_abs_diff_eq!(trace_product(&pi, zero.op()).unwrap(), 0.5, epsilon = 1e-14);

        assert!(trace_product(&pi, rho.op()).is_err());
    }

    #[test]
    fn density_rejects_bad_inputs() {
        assert!(matches!(
            DensityOperator::from_diagonal(&[0.5, 0.6]),
            Err(Error::InvalidTrace { .. })
        ));
        assert!(matches!(
            DensityOperator::from_diagonal(&[1.2, -0.2]),
            Err(Error::NotPositive { .. })
        ));
    }

    #[test]
    fn serde_literal_round_trip() {
        let m = CMatrix::from_row_slice(
            2,
            2,
            &[
                c(0.5),
                Complex64::new(0.1, -0.2),
                Complex64::new(0.1, 0.2),
                c(0.5),
            ],
        );
        let rho = DensityOperator::new(HermitianOperator::new(m).unwrap()).unwrap();
        let text = serde_json::to_string(&rho).unwrap();
        let back: DensityOperator = serde_json::from_str(&text).unwrap();
        assert_eq!(rho, back);

        let real: HermitianOperator = serde_json::from_str("[[1, 2], [2, 3]]").unwrap();
        assert_eq!(real.get(0, 1), c(2.0));

        let bad: std::result::Result<DensityOperator, _> =
            serde_json::from_str("[[1.5, 0], [0, -0.5]]");
        assert!(bad.unwrap_err().to_string().contains("eigenvalue"));
    }
}
