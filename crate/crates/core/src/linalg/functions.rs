use nalgebra::DMatrix;

use super::{require_pd, require_psd, HermitianMatrix, SpectralDecomposition};
use crate::tol::PSD_TOL;
use crate::{Error, Result, C64};

/// Maps float dust in `[-PSD_TOL, 0)` to an exact zero.
pub fn clip_eigenvalue(lambda: f64) -> f64 {
    if (-PSD_TOL..0.0).contains(&lambda) {
        0.0
    } else {
        lambda
    }
}

/// `x^r` with `0^r = 0` for `r > 0` and `0^0 = 1`.
pub fn power_scalar(x: f64, r: f64) -> f64 {
    if x == 0.0 {
        if r == 0.0 {
            1.0
        } else if r > 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        x.powf(r)
    }
}

pub(crate) fn power_from_spectrum(sd: &SpectralDecomposition, r: f64) -> Result<HermitianMatrix> {
    require_psd(sd)?;
    if r < 0.0 && sd.min_eigenvalue() <= PSD_TOL {
        return Err(Error::SingularPower { exponent: r, min_eigenvalue: sd.min_eigenvalue() });
    }
    Ok(sd.map(|l| power_scalar(clip_eigenvalue(l), r)))
}

/// `A^r` for PSD `A` through its spectral decomposition. Negative powers
/// need a positive definite `A`.
pub fn matrix_power(a: &HermitianMatrix, r: f64) -> Result<HermitianMatrix> {
    power_from_spectrum(&a.spectral()?, r)
}

/// Natural log of the determinant of a positive definite matrix.
pub fn log_det(a: &HermitianMatrix) -> Result<f64> {
    let sd = a.spectral()?;
    require_pd(&sd)?;
    Ok(sd.eigenvalues().iter().map(|l| l.ln()).sum())
}

/// Kronecker product with A-major composite indexing:
/// `(A⊗B)[a·d_B + b][a'·d_B + b'] = A[a][a']·B[b][b']`.
pub fn kron(a: &HermitianMatrix, b: &HermitianMatrix) -> HermitianMatrix {
    HermitianMatrix::from_trusted(a.as_matrix().kronecker(b.as_matrix()))
}

fn check_bipartite(m: &HermitianMatrix, d_a: usize, d_b: usize) -> Result<()> {
    if d_a == 0 || d_b == 0 || m.dim() != d_a * d_b {
        return Err(Error::DimensionMismatch { expected: d_a * d_b, actual: m.dim() });
    }
    Ok(())
}

/// Traces out the second factor: `result[a][a'] = Σ_b M[a·d_B+b][a'·d_B+b]`.
pub fn partial_trace_b(m: &HermitianMatrix, d_a: usize, d_b: usize) -> Result<HermitianMatrix> {
    check_bipartite(m, d_a, d_b)?;
    let src = m.as_matrix();
    let out = DMatrix::from_fn(d_a, d_a, |a, a2| {
        (0..d_b).fold(C64::new(0.0, 0.0), |acc, b| acc + src[(a * d_b + b, a2 * d_b + b)])
    });
    Ok(HermitianMatrix::from_trusted(out))
}

/// Traces out the first factor: `result[b][b'] = Σ_a M[a·d_B+b][a·d_B+b']`.
pub fn partial_trace_a(m: &HermitianMatrix, d_a: usize, d_b: usize) -> Result<HermitianMatrix> {
    check_bipartite(m, d_a, d_b)?;
    let src = m.as_matrix();
    let out = DMatrix::from_fn(d_b, d_b, |b, b2| {
        (0..d_a).fold(C64::new(0.0, 0.0), |acc, a| acc + src[(a * d_b + b, a * d_b + b2)])
    });
    Ok(HermitianMatrix::from_trusted(out))
}
