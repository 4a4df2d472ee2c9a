//! Cyclic Jacobi eigensolver for complex Hermitian matrices.
//!
//! Each rotation zeroes one off-diagonal pair `(p, q)`. Writing
//! `A[p][q] = |g| e^{iφ}`, the unitary
//!
//! ```text
//! J = [[ c,          s e^{iφ} ],
//!      [ -s e^{-iφ}, c        ]]
//! ```
//!
//! is the real Jacobi rotation for `[[a_pp, |g|], [|g|, a_qq]]` conjugated by
//! `diag(1, e^{-iφ})`, so `J† A J` has a zero at `(p, q)`. Accumulating the
//! rotations gives `A = V Λ V†`.

use nalgebra::DMatrix;

use super::HermitianMatrix;
use crate::{Error, Result, C64};

/// Relative off-diagonal Frobenius mass at which a sweep sequence stops.
pub const JACOBI_REL_TOL: f64 = 1e-12;
/// Hard cap on full sweeps.
pub const MAX_SWEEPS: usize = 100;

/// Eigenvalues in ascending order and the unitary whose columns are the
/// matching eigenvectors.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralDecomposition {
    eigenvalues: Vec<f64>,
    eigenvectors: DMatrix<C64>,
}

impl SpectralDecomposition {
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn eigenvectors(&self) -> &DMatrix<C64> {
        &self.eigenvectors
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.eigenvalues[self.eigenvalues.len() - 1]
    }

    /// Same eigenvectors with every eigenvalue passed through `f`.
    pub(crate) fn map_eigenvalues<F: Fn(f64) -> f64>(&self, f: F) -> Self {
        Self { eigenvalues: self.eigenvalues.iter().map(|&l| f(l)).collect(), eigenvectors: self.eigenvectors.clone() }
    }

    /// `V · diag(f(λ)) · V†`.
    pub fn map<F: Fn(f64) -> f64>(&self, f: F) -> HermitianMatrix {
        let weights: Vec<f64> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        self.with_eigenvalues(&weights)
    }

    /// `V · diag(values) · V†` for replacement eigenvalues.
    pub fn with_eigenvalues(&self, values: &[f64]) -> HermitianMatrix {
        assert_eq!(values.len(), self.dim());
        let mut scaled = self.eigenvectors.clone();
        for (j, &w) in values.iter().enumerate() {
            scaled.column_mut(j).scale_mut(w);
        }
        HermitianMatrix::from_trusted(scaled * self.eigenvectors.adjoint())
    }

    pub fn reconstruct(&self) -> HermitianMatrix {
        self.with_eigenvalues(&self.eigenvalues)
    }

    /// `max |V Λ V† − A|`, scaled by `1 + max|A|`.
    pub fn reconstruction_error(&self, a: &HermitianMatrix) -> f64 {
        let diff = self.reconstruct().as_matrix() - a.as_matrix();
        max_abs(&diff) / (1.0 + a.max_abs())
    }

    /// `max |V† V − I|`.
    pub fn unitarity_error(&self) -> f64 {
        let n = self.dim();
        let gram = self.eigenvectors.adjoint() * &self.eigenvectors;
        max_abs(&(gram - DMatrix::<C64>::identity(n, n)))
    }
}

pub(crate) fn max_abs(m: &DMatrix<C64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn off_diagonal_norm_sqr(a: &DMatrix<C64>) -> f64 {
    let n = a.nrows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s
}

/// Diagonalises a Hermitian matrix with cyclic Jacobi sweeps.
pub fn spectral_decompose(a: &HermitianMatrix) -> Result<SpectralDecomposition> {
    let n = a.dim();
    let mut m = a.as_matrix().clone();
    let mut v = DMatrix::<C64>::identity(n, n);

    let total = m.iter().map(|z| z.norm_sqr()).sum::<f64>();
    let target = (JACOBI_REL_TOL * total.sqrt()).powi(2);

    let mut off = off_diagonal_norm_sqr(&m);
    let mut sweeps = 0;
    while off > target {
        if sweeps == MAX_SWEEPS {
            return Err(Error::ConvergenceFailure { sweeps, off_diagonal: off.sqrt() });
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut m, &mut v, p, q);
            }
        }
        sweeps += 1;
        off = off_diagonal_norm_sqr(&m);
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| m[(i, i)].re).collect();
    order.sort_by(|&i, &j| diag[i].total_cmp(&diag[j]));
    let eigenvalues = order.iter().map(|&i| diag[i]).collect();
    let eigenvectors = DMatrix::from_fn(n, n, |r, c| v[(r, order[c])]);
    Ok(SpectralDecomposition { eigenvalues, eigenvectors })
}

fn rotate(m: &mut DMatrix<C64>, v: &mut DMatrix<C64>, p: usize, q: usize) {
    let g = m[(p, q)];
    let g_abs = g.norm();
    if g_abs == 0.0 {
        return;
    }
    let app = m[(p, p)].re;
    let aqq = m[(q, q)].re;
    let phase = g / g_abs;

    let tau = (aqq - app) / (2.0 * g_abs);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;

    let jpp = C64::new(c, 0.0);
    let jqq = jpp;
    let jpq = phase * s;
    let jqp = -phase.conj() * s;

    let n = m.nrows();
    // columns: M <- M J
    for k in 0..n {
        let mkp = m[(k, p)];
        let mkq = m[(k, q)];
        m[(k, p)] = mkp * jpp + mkq * jqp;
        m[(k, q)] = mkp * jpq + mkq * jqq;
    }
    // rows: M <- J† M
    for k in 0..n {
        let mpk = m[(p, k)];
        let mqk = m[(q, k)];
        m[(p, k)] = jpp.conj() * mpk + jqp.conj() * mqk;
        m[(q, k)] = jpq.conj() * mpk + jqq.conj() * mqk;
    }
    m[(p, q)] = C64::new(0.0, 0.0);
    m[(q, p)] = C64::new(0.0, 0.0);
    m[(p, p)] = C64::new(app - t * g_abs, 0.0);
    m[(q, q)] = C64::new(aqq + t * g_abs, 0.0);

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * jpp + vkq * jqp;
        v[(k, q)] = vkp * jpq + vkq * jqq;
    }
}
