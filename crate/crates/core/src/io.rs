//! JSON file formats for matrices and distributions.
//!
//! A matrix file holds `dim`, an optional bipartite split `dims = [d_A, d_B]`
//! and `matrix`, a row-major `dim × dim` array of `[re, im]` pairs. A
//! distribution file holds `p`, an array of reals. Numbers are written as
//! shortest round-trip decimals, so reading and re-serialising a file
//! reproduces it byte for byte.

use serde::{Deserialize, Serialize};

use crate::classical::ProbabilityVector;
use crate::linalg::HermitianMatrix;
use crate::quantum::DensityMatrix;
use crate::{Error, Result, C64};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixFile {
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dims: Option<[usize; 2]>,
    pub matrix: Vec<Vec<[f64; 2]>>,
}

impl MatrixFile {
    pub fn from_hermitian(m: &HermitianMatrix, dims: Option<(usize, usize)>) -> Self {
        let n = m.dim();
        let matrix = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let z = m.get(i, j);
                        [z.re, z.im]
                    })
                    .collect()
            })
            .collect();
        Self { dim: n, dims: dims.map(|(a, b)| [a, b]), matrix }
    }

    pub fn from_density(rho: &DensityMatrix) -> Self {
        Self::from_hermitian(rho.matrix(), rho.dims())
    }

    pub fn to_hermitian(&self) -> Result<HermitianMatrix> {
        if self.matrix.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, actual: self.matrix.len() });
        }
        if let Some(row) = self.matrix.iter().find(|r| r.len() != self.dim) {
            return Err(Error::NotSquare { rows: self.dim, cols: row.len() });
        }
        if let Some([a, b]) = self.dims {
            if a * b != self.dim {
                return Err(Error::DimensionMismatch { expected: self.dim, actual: a * b });
            }
        }
        let rows: Vec<Vec<C64>> =
            self.matrix.iter().map(|r| r.iter().map(|&[re, im]| C64::new(re, im)).collect()).collect();
        HermitianMatrix::from_rows(&rows)
    }

    /// Parses as a density matrix, carrying over the bipartite split.
    pub fn to_density(&self) -> Result<DensityMatrix> {
        let rho = DensityMatrix::new(self.to_hermitian()?)?;
        match self.dims {
            Some([a, b]) => rho.with_dims(a, b),
            None => Ok(rho),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("matrix file serialises");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DistributionFile {
    pub p: Vec<f64>,
}

impl DistributionFile {
    pub fn from_probability(p: &ProbabilityVector) -> Self {
        Self { p: p.as_slice().to_vec() }
    }

    pub fn to_probability(&self) -> Result<ProbabilityVector> {
        ProbabilityVector::new(self.p.clone())
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("distribution file serialises");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }
}
