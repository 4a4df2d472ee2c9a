//! Dense complex Hermitian linear algebra.
//!
//! All spectral functions clip eigenvalues in `[-PSD_TOL, 0)` to exact zeros
//! and use `0^r = 0` for `r > 0`, `0^0 = 1`.

mod eigen;
mod functions;
mod lemmas;

use nalgebra::DMatrix;

pub use eigen::{spectral_decompose, SpectralDecomposition, JACOBI_REL_TOL, MAX_SWEEPS};
pub use functions::{clip_eigenvalue, kron, log_det, matrix_power, partial_trace_a, partial_trace_b, power_scalar};
pub use lemmas::{lemma2_check, lemma3_check, lemma4_check};

use crate::tol::{HERM_TOL, PSD_TOL};
use crate::{Error, Result, C64};

pub(crate) use eigen::max_abs;

/// A dense complex square matrix that passed the Hermiticity check.
///
/// Construction symmetrises the input to `(A + A†)/2`, so downstream code
/// sees an exactly Hermitian matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    m: DMatrix<C64>,
}

impl HermitianMatrix {
    pub fn new(m: DMatrix<C64>) -> Result<Self> {
        let (rows, cols) = m.shape();
        if rows != cols {
            return Err(Error::NotSquare { rows, cols });
        }
        if rows == 0 {
            return Err(Error::EmptyMatrix);
        }
        for i in 0..rows {
            for j in 0..cols {
                let z = m[(i, j)];
                if !z.re.is_finite() || !z.im.is_finite() {
                    return Err(Error::NonFinite { row: i, col: j });
                }
            }
        }
        let scale = 1.0 + max_abs(&m);
        let mut deviation: f64 = 0.0;
        for i in 0..rows {
            deviation = deviation.max(m[(i, i)].im.abs() * scale);
            for j in (i + 1)..cols {
                deviation = deviation.max((m[(i, j)] - m[(j, i)].conj()).norm());
            }
        }
        if deviation > HERM_TOL * scale {
            return Err(Error::NonHermitianInput { deviation });
        }
        Ok(Self::from_trusted(m))
    }

    /// Symmetrises without validation. For results of operations that are
    /// Hermitian in exact arithmetic.
    pub(crate) fn from_trusted(m: DMatrix<C64>) -> Self {
        let n = m.nrows();
        let m = DMatrix::from_fn(n, n, |i, j| {
            if i == j {
                C64::new(m[(i, i)].re, 0.0)
            } else {
                (m[(i, j)] + m[(j, i)].conj()) * 0.5
            }
        });
        Self { m }
    }

    pub fn identity(n: usize) -> Self {
        Self { m: DMatrix::identity(n, n) }
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Result<Self> {
        let n = diag.len();
        Self::new(DMatrix::from_fn(n, n, |i, j| if i == j { C64::new(diag[i], 0.0) } else { C64::new(0.0, 0.0) }))
    }

    /// Builds from row-major `(re, im)` pairs.
    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let n = rows.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::NotSquare { rows: n, cols: bad.len() });
        }
        Self::new(DMatrix::from_fn(n, n, |i, j| rows[i][j]))
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn as_matrix(&self) -> &DMatrix<C64> {
        &self.m
    }

    pub fn into_inner(self) -> DMatrix<C64> {
        self.m
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.m[(i, j)]
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim()).map(|i| self.m[(i, i)].re).sum()
    }

    pub fn max_abs(&self) -> f64 {
        max_abs(&self.m)
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self { m: &self.m * C64::new(factor, 0.0) }
    }

    /// `max |A − B|` entrywise.
    pub fn max_diff(&self, other: &HermitianMatrix) -> f64 {
        max_abs(&(&self.m - &other.m))
    }

    /// `Re tr(A B)` from the entrywise sum `Σ A[i][j] B[j][i]`.
    pub fn trace_product(&self, other: &HermitianMatrix) -> f64 {
        let n = self.dim();
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                s += (self.m[(i, j)] * other.m[(j, i)]).re;
            }
        }
        s
    }

    /// `A B A` for Hermitian `A`, `B`.
    pub fn sandwich(&self, inner: &HermitianMatrix) -> HermitianMatrix {
        Self::from_trusted(&self.m * &inner.m * &self.m)
    }

    pub fn spectral(&self) -> Result<SpectralDecomposition> {
        spectral_decompose(self)
    }

    pub fn psd_class(&self) -> Result<PsdClass> {
        Ok(PsdClass::from_min_eigenvalue(self.spectral()?.min_eigenvalue()))
    }

    pub fn is_diagonal(&self) -> bool {
        let n = self.dim();
        (0..n).all(|i| (0..n).all(|j| i == j || self.m[(i, j)] == C64::new(0.0, 0.0)))
    }
}

/// Definiteness of a Hermitian matrix, decided by its smallest eigenvalue
/// against `PSD_TOL`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PsdClass {
    PositiveDefinite { min_eigenvalue: f64 },
    PositiveSemiDefinite { min_eigenvalue: f64 },
    Indefinite { min_eigenvalue: f64 },
}

impl PsdClass {
    pub fn from_min_eigenvalue(min_eigenvalue: f64) -> Self {
        if min_eigenvalue > PSD_TOL {
            PsdClass::PositiveDefinite { min_eigenvalue }
        } else if min_eigenvalue >= -PSD_TOL {
            PsdClass::PositiveSemiDefinite { min_eigenvalue }
        } else {
            PsdClass::Indefinite { min_eigenvalue }
        }
    }

    pub fn min_eigenvalue(self) -> f64 {
        match self {
            PsdClass::PositiveDefinite { min_eigenvalue }
            | PsdClass::PositiveSemiDefinite { min_eigenvalue }
            | PsdClass::Indefinite { min_eigenvalue } => min_eigenvalue,
        }
    }

    /// PSD in the wide sense (includes positive definite).
    pub fn is_psd(self) -> bool {
        !matches!(self, PsdClass::Indefinite { .. })
    }

    pub fn is_pd(self) -> bool {
        matches!(self, PsdClass::PositiveDefinite { .. })
    }
}

/// Fails with `NotPsd` unless the spectrum is PSD.
pub(crate) fn require_psd(sd: &SpectralDecomposition) -> Result<()> {
    let min_eigenvalue = sd.min_eigenvalue();
    if PsdClass::from_min_eigenvalue(min_eigenvalue).is_psd() {
        Ok(())
    } else {
        Err(Error::NotPsd { min_eigenvalue })
    }
}

/// Fails with `NotPd` unless the spectrum is PD.
pub(crate) fn require_pd(sd: &SpectralDecomposition) -> Result<()> {
    let min_eigenvalue = sd.min_eigenvalue();
    if PsdClass::from_min_eigenvalue(min_eigenvalue).is_pd() {
        Ok(())
    } else {
        Err(Error::NotPd { min_eigenvalue })
    }
}
