//! Matrix literals: nested row-major arrays of `[re, im]` pairs.
//!
//! Real entries may be written as a bare number or a one-element array.
//! Serialization always emits `[re, im]`.

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::operator::CMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum EntryLiteral {
    Real(f64),
    Complex([f64; 2]),
    RealArray([f64; 1]),
}

impl EntryLiteral {
    pub fn value(self) -> Complex64 {
        match self {
            EntryLiteral::Real(re) | EntryLiteral::RealArray([re]) => Complex64::new(re, 0.0),
            EntryLiteral::Complex([re, im]) => Complex64::new(re, im),
        }
    }
}

pub type MatrixLiteral = Vec<Vec<EntryLiteral>>;

pub fn to_literal(m: &CMatrix) -> MatrixLiteral {
    (0..m.nrows())
        .map(|i| {
            (0..m.ncols())
                .map(|j| {
                    let z = m[(i, j)];
                    EntryLiteral::Complex([z.re, z.im])
                })
                .collect()
        })
        .collect()
}

pub fn from_literal(lit: &MatrixLiteral) -> Result<CMatrix, String> {
    let rows = lit.len();
    if rows == 0 {
        return Err("matrix literal has no rows".into());
    }
    let cols = lit[0].len();
    if let Some((i, r)) = lit.iter().enumerate().find(|(_, r)| r.len() != cols) {
        return Err(format!(
            "matrix literal row {i} has {} entries, expected {cols}",
            r.len()
        ));
    }
    Ok(CMatrix::from_fn(rows, cols, |i, j| lit[i][j].value()))
}

/// `#[serde(with = "qmitm::literal::cmatrix")]` helper for general complex matrices.
pub mod cmatrix {
    use super::*;

    pub fn serialize<S: Serializer>(m: &CMatrix, s: S) -> Result<S::Ok, S::Error> {
        to_literal(m).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<CMatrix, D::Error> {
        let lit = MatrixLiteral::deserialize(d)?;
        from_literal(&lit).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mixed_entry_forms() {
        let lit: MatrixLiteral = serde_json::from_str("[[1, [2, 3]], [[4], [5, -6]]]").unwrap();
        let m = from_literal(&lit).unwrap();
        assert_eq!(m[(0, 0)], Complex64::new(1.0, 0.0));
        assert_eq!(m[(0, 1)], Complex64::new(2.0, 3.0));
        assert_eq!(m[(1, 0)], Complex64::new(4.0, 0.0));
        assert_eq!(m[(1, 1)], Complex64::new(5.0, -6.0));
        assert_eq!(from_literal(&to_literal(&m)).unwrap(), m);
    }

    #[test]
    fn ragged_rows_rejected() {
        let lit: MatrixLiteral = serde_json::from_str("[[1, 2], [3]]").unwrap();
        assert!(from_literal(&lit).unwrap_err().contains("row 1"));
        assert!(from_literal(&Vec::new()).is_err());
    }
}
