//! Evaluators for the trace and determinant inequalities between PSD
//! matrices that the entropy bounds rest on.

use super::functions::{clip_eigenvalue, power_from_spectrum};
use super::{require_pd, require_psd, HermitianMatrix, SpectralDecomposition};
use crate::report::BoundReport;
use crate::tol::{CHAIN_TOL, EQ_TOL};
use crate::{Error, Result};

fn same_dim(a: &HermitianMatrix, b: &HermitianMatrix) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim(), actual: b.dim() });
    }
    Ok(())
}

/// `ln det` of a PSD spectrum after clipping; `-inf` when singular.
fn log_det_clipped(sd: &SpectralDecomposition) -> f64 {
    sd.eigenvalues().iter().map(|&l| clip_eigenvalue(l).ln()).sum()
}

/// `0 <= tr(AB) <= tr(A) tr(B)` for PSD `A`, `B`.
pub fn lemma2_check(a: &HermitianMatrix, b: &HermitianMatrix) -> Result<BoundReport> {
    same_dim(a, b)?;
    require_psd(&a.spectral()?)?;
    require_psd(&b.spectral()?)?;
    let tr_ab = a.trace_product(b);
    Ok(BoundReport::chain("trace product", 0.0, tr_ab, a.trace() * b.trace(), CHAIN_TOL))
}

/// `n (det A det B)^{1/n} <= tr(AB)` for PSD `A`, `B`.
///
/// The equality flag is set when `B^{1/2} A B^{1/2}` is a multiple of the
/// identity, checked in max-norm relative to its largest entry.
pub fn lemma3_check(a: &HermitianMatrix, b: &HermitianMatrix) -> Result<BoundReport> {
    same_dim(a, b)?;
    let sa = a.spectral()?;
    let sb = b.spectral()?;
    require_psd(&sa)?;
    require_psd(&sb)?;
    let n = a.dim() as f64;
    let log_dets = log_det_clipped(&sa) + log_det_clipped(&sb);
    let lhs = n * (log_dets / n).exp();
    let rhs = a.trace_product(b);

    let root_b = power_from_spectrum(&sb, 0.5)?;
    let core = root_b.sandwich(a);
    let c = core.trace() / n;
    let scale = core.max_abs();
    let equality = scale == 0.0 || core.max_diff(&HermitianMatrix::identity(a.dim()).scaled(c)) <= EQ_TOL * scale;

    Ok(BoundReport::le("determinant mean", lhs, rhs, CHAIN_TOL).with_equality(equality))
}

/// `tr(I − A^{-1}) <= ln det A <= tr(A − I)` for positive definite `A`;
/// equality exactly at `A = I`.
pub fn lemma4_check(a: &HermitianMatrix) -> Result<BoundReport> {
    let sd = a.spectral()?;
    require_pd(&sd)?;
    let ev = sd.eigenvalues();
    let lower: f64 = ev.iter().map(|l| 1.0 - 1.0 / l).sum();
    let middle: f64 = ev.iter().map(|l| l.ln()).sum();
    let upper: f64 = ev.iter().map(|l| l - 1.0).sum();
    let equality = a.max_diff(&HermitianMatrix::identity(a.dim())) <= EQ_TOL;
    Ok(BoundReport::chain("log det sandwich", lower, middle, upper, CHAIN_TOL).with_equality(equality))
}
