//! Kraus (operator-sum) channels `rho -> sum_k E_k rho E_k^dag`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operator::{check_dims, CMatrix, DensityOperator, HermitianOperator};

/// Completeness tolerance for constructed channels.
pub const COMPLETENESS_TOL: f64 = 1e-10;
/// Channels whose completeness residual exceeds this are refused by
/// [`apply_channel`].
pub const APPLY_COMPLETENESS_TOL: f64 = 1e-8;
/// Spectral weights of the target at or below this produce no Kraus operator.
pub const REPLACEMENT_DROP_TOL: f64 = 1e-14;

/// A finite list of `d x d` Kraus operators.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawChannel", into = "RawChannel")]
pub struct KrausChannel {
    dim: usize,
    operators: Vec<CMatrix>,
}

#[derive(Serialize, Deserialize)]
struct RawChannel {
    dim: usize,
    #[serde(with = "matrix_list")]
    operators: Vec<CMatrix>,
}

mod matrix_list {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use crate::literal::{self, MatrixLiteral};
    use crate::operator::CMatrix;

    pub fn serialize<S: Serializer>(ops: &[CMatrix], s: S) -> Result<S::Ok, S::Error> {
        ops.iter()
            .map(literal::to_literal)
            .collect::<Vec<_>>()
            .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<CMatrix>, D::Error> {
        Vec::<MatrixLiteral>::deserialize(d)?
            .iter()
            .map(|l| literal::from_literal(l).map_err(serde::de::Error::custom))
            .collect()
    }
}

impl TryFrom<RawChannel> for KrausChannel {
    type Error = Error;

    fn try_from(raw: RawChannel) -> Result<Self> {
        KrausChannel::new(raw.dim, raw.operators)
    }
}

impl From<KrausChannel> for RawChannel {
    fn from(c: KrausChannel) -> Self {
        RawChannel {
            dim: c.dim,
            operators: c.operators,
        }
    }
}

impl KrausChannel {
    /// Checks shapes and completeness within [`COMPLETENESS_TOL`].
    pub fn new(dim: usize, operators: Vec<CMatrix>) -> Result<Self> {
        let channel = Self::from_operators(dim, operators)?;
        let residual = completeness_residual(&channel);
        if residual > COMPLETENESS_TOL {
            return Err(Error::Incomplete { residual });
        }
        Ok(channel)
    }

    /// Checks shapes only. The result may be incomplete; use
    /// [`completeness_residual`] to inspect it.
    pub fn from_operators(dim: usize, operators: Vec<CMatrix>) -> Result<Self> {
        if operators.is_empty() {
            return Err(Error::NoOperators);
        }
        for op in &operators {
            check_dims(dim, op.nrows())?;
            check_dims(dim, op.ncols())?;
        }
        Ok(Self { dim, operators })
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            dim,
            operators: vec![CMatrix::identity(dim, dim)],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn operators(&self) -> &[CMatrix] {
        &self.operators
    }

    pub fn len(&self) -> usize {
        self.operators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.operators.is_empty()
    }

    /// Copy of the channel with operator `k` dropped.
    pub fn without_operator(&self, k: usize) -> Result<Self> {
        let mut operators = self.operators.clone();
        if k < operators.len() {
            operators.remove(k);
        }
        Self::from_operators(self.dim, operators)
    }
}

/// `||sum_k E_k^dag E_k - 1||_F`.
pub fn completeness_residual(channel: &KrausChannel) -> f64 {
    let d = channel.dim;
    let sum = channel
        .operators
        .iter()
        .fold(CMatrix::zeros(d, d), |acc, e| acc + e.adjoint() * e);
    (sum - CMatrix::identity(d, d)).norm()
}

pub fn apply_channel(channel: &KrausChannel, rho: &DensityOperator) -> Result<DensityOperator> {
    check_dims(channel.dim, rho.dim())?;
    let residual = completeness_residual(channel);
    if residual > APPLY_COMPLETENESS_TOL {
        return Err(Error::Incomplete { residual });
    }
    let d = channel.dim;
    let out = channel
        .operators
        .iter()
        .fold(CMatrix::zeros(d, d), |acc, e| {
            acc + e * rho.matrix() * e.adjoint()
        });
    DensityOperator::new(HermitianOperator::new(out)?)
}

/// State-replacement channel sending every density operator to `rho_target`:
/// `E_ij = sqrt(p_i) |v_i><e_j|` for the spectral decomposition
/// `rho_target = sum_i p_i |v_i><v_i|` and the computational basis `|e_j>`.
pub fn realize_channel(
    rho: &DensityOperator,
    rho_target: &DensityOperator,
) -> Result<KrausChannel> {
    check_dims(rho.dim(), rho_target.dim())?;
    let d = rho.dim();
    let spec = rho_target.op().spectral();
    let mut operators = Vec::new();
    for (i, &p) in spec.eigenvalues.iter().enumerate() {
        if p <= REPLACEMENT_DROP_TOL {
            continue;
        }
        let v = spec.eigenvector(i).scale(p.sqrt());
        for j in 0..d {
            let mut e = CMatrix::zeros(d, d);
            e.set_column(j, &v);
            operators.push(e);
        }
    }
    // rescale so the kept weights sum to one
    let kept: f64 = spec
        .eigenvalues
        .iter()
        .filter(|&&p| p > REPLACEMENT_DROP_TOL)
        .sum();
    if kept > 0.0 {
        let s = 1.0 / kept.sqrt();
        for e in &mut operators {
            *e = e.scale(s);
        }
    }
    KrausChannel::new(d, operators)
}
