//! Seeded random instance generators for property checks and verification runs.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::detection::HypothesisPair;
use crate::operator::{CMatrix, DensityOperator, HermitianOperator};

/// Haar-distributed unitary (orthogonal when `complex` is false), from the QR
/// factorisation of a Gaussian matrix with the phases of `R` divided out.
pub fn random_unitary<R: Rng + ?Sized>(dim: usize, complex: bool, rng: &mut R) -> CMatrix {
    let g = CMatrix::from_fn(dim, dim, |_, _| gaussian(complex, rng));
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..dim {
        let rjj = r[(j, j)];
        let phase = if rjj.norm() > 0.0 {
            rjj / rjj.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        for i in 0..dim {
            q[(i, j)] *= phase;
        }
    }
    q
}

fn gaussian<R: Rng + ?Sized>(complex: bool, rng: &mut R) -> Complex64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = if complex {
        StandardNormal.sample(rng)
    } else {
        0.0
    };
    Complex64::new(re, im)
}

/// `U diag(spectrum) U^dag` for a random unitary `U`. The spectrum is
/// normalized to unit sum.
pub fn random_density_with_spectrum<R: Rng + ?Sized>(
    spectrum: &[f64],
    complex: bool,
    rng: &mut R,
) -> DensityOperator {
    let d = spectrum.len();
    let total: f64 = spectrum.iter().sum();
    let u = random_unitary(d, complex, rng);
    let diag = CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
        d,
        spectrum.iter().map(|&p| Complex64::new(p / total, 0.0)),
    ));
    let op = HermitianOperator::from_matrix_unchecked(&u * diag * u.adjoint());
    DensityOperator::normalized(&op).expect("random spectrum is a valid distribution")
}

/// Random full-rank density operator whose eigenvalues are at least
/// `floor / dim` (a mixture of a random spectrum with the maximally mixed state).
pub fn random_density<R: Rng + ?Sized>(
    dim: usize,
    floor: f64,
    complex: bool,
    rng: &mut R,
) -> DensityOperator {
    let raw: Vec<f64> = (0..dim)
        .map(|_| -rng.random::<f64>().max(1e-300).ln())
        .collect();
    let total: f64 = raw.iter().sum();
    let spectrum: Vec<f64> = raw
        .iter()
        .map(|w| (1.0 - floor) * w / total + floor / dim as f64)
        .collect();
    random_density_with_spectrum(&spectrum, complex, rng)
}

/// Random density operator diagonal in the standard basis, with every
/// population at least `floor / dim`.
pub fn random_diagonal_density<R: Rng + ?Sized>(
    dim: usize,
    floor: f64,
    rng: &mut R,
) -> DensityOperator {
    let raw: Vec<f64> = (0..dim)
        .map(|_| -rng.random::<f64>().max(1e-300).ln())
        .collect();
    let total: f64 = raw.iter().sum();
    let p: Vec<f64> = raw
        .iter()
        .map(|w| (1.0 - floor) * w / total + floor / dim as f64)
        .collect();
    DensityOperator::normalized(&HermitianOperator::from_matrix_unchecked(
        CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
            dim,
            p.iter().map(|&x| Complex64::new(x, 0.0)),
        )),
    ))
    .expect("populations form a distribution")
}

/// Random density operator of the given rank (`rank <= dim`).
pub fn random_density_of_rank<R: Rng + ?Sized>(
    dim: usize,
    rank: usize,
    complex: bool,
    rng: &mut R,
) -> DensityOperator {
    let mut spectrum: Vec<f64> = (0..dim)
        .map(|i| {
            if i < rank {
                0.05 + rng.random::<f64>()
            } else {
                0.0
            }
        })
        .collect();
    if spectrum.iter().all(|&p| p == 0.0) {
        spectrum[0] = 1.0;
    }
    random_density_with_spectrum(&spectrum, complex, rng)
}

/// Random orthogonal projector of the given rank in a Haar-random basis.
pub fn random_projector<R: Rng + ?Sized>(
    dim: usize,
    rank: usize,
    complex: bool,
    rng: &mut R,
) -> HermitianOperator {
    let u = random_unitary(dim, complex, rng);
    let cols = u.columns(0, rank.min(dim)).into_owned();
    HermitianOperator::from_matrix_unchecked(&cols * cols.adjoint())
}

/// Random real symmetric / complex Hermitian matrix with Gaussian entries.
pub fn random_hermitian<R: Rng + ?Sized>(
    dim: usize,
    complex: bool,
    rng: &mut R,
) -> HermitianOperator {
    let g = CMatrix::from_fn(dim, dim, |_, _| gaussian(complex, rng));
    HermitianOperator::from_matrix_unchecked(g)
}

/// Log-uniform threshold in `[e^-1.6, e^1.6]`, roughly `[0.2, 5]`.
fn random_threshold<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.random_range(-1.6f64..1.6).exp()
}

/// Random complex pair with a strictly positive `rho1` and a random threshold.
pub fn random_pair<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> HypothesisPair {
    let rho0 = random_density(dim, 0.05, true, rng);
    let rho1 = random_density(dim, 0.2, true, rng);
    let tau = random_threshold(rng);
    HypothesisPair::with_threshold(rho0, rho1, tau).expect("threshold is positive")
}

/// Like [`random_pair`], with both states diagonal in the standard basis.
pub fn random_commuting_pair<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> HypothesisPair {
    let rho0 = random_diagonal_density(dim, 0.05, rng);
    let rho1 = random_diagonal_density(dim, 0.2, rng);
    let tau = random_threshold(rng);
    HypothesisPair::with_threshold(rho0, rho1, tau).expect("threshold is positive")
}

/// Random density operator with a simple spectrum whose consecutive
/// eigenvalues differ by at least `gap`.
pub fn random_gapped_density<R: Rng + ?Sized>(
    dim: usize,
    gap: f64,
    rng: &mut R,
) -> DensityOperator {
    let d = dim as f64;
    assert!(
        0.02 * d + gap * d * (d - 1.0) / 2.0 < 1.0,
        "gap {gap} too large for dimension {dim}"
    );
    let spectrum = loop {
        let mut v = Vec::with_capacity(dim);
        let mut level = rng.random_range(0.02..0.06);
        for _ in 0..dim {
            v.push(level);
            level += gap + rng.random_range(0.0..0.1);
        }
        let total: f64 = v.iter().sum();
        let v: Vec<f64> = v.iter().map(|x| x / total).collect();
        if v.windows(2).all(|w| w[1] - w[0] >= gap) {
            break v;
        }
    };
    random_density_with_spectrum(&spectrum, true, rng)
}
