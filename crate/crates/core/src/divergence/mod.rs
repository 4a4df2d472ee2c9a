//! Petz Rényi relative entropy
//! `D_α(ρ‖σ) = (α−1)^{-1} ln tr(ρ^α σ^{1−α})` and the quantities built on it.
//!
//! Everything here is in nats. The reference `σ` is any PSD matrix; unit
//! trace is not required, so `σ = I` is accepted.

mod closed_form;
mod optimize;

pub use closed_form::{t5_closed_form, t6_bound, t6_lower_bound, ClosedForm, Mode, T6Report};
pub use optimize::{
    conditional_entropy, conditional_entropy_with, hermitian_from_params, mutual_information, mutual_information_with,
    nelder_mead, sigma_from_params, MinimizedQuantity, NelderMeadOutcome, OptimizationOutcome, OptimizerConfig,
};

use nalgebra::DMatrix;
use serde::Serialize;

use crate::linalg::{partial_trace_b, power_scalar, require_pd, require_psd, HermitianMatrix, SpectralDecomposition};
use crate::quantum::{renyi_entropy, DensityMatrix};
use crate::report::BoundReport;
use crate::tol::{BETA_ONE_TOL, CHAIN_TOL, EQ_TOL, PSD_TOL};
use crate::{Error, Result, Units, C64};

/// Value of `D_α(ρ‖σ)` in nats.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DivergenceResult {
    pub value: f64,
    pub alpha: f64,
    /// Set when `σ^{1−α} = c ρ^α` holds (only evaluated for α > 1 and
    /// positive definite `σ`).
    pub equality_case: bool,
}

/// Outcome of [`equality_condition_check`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Proportionality {
    pub holds: bool,
    pub c: f64,
}

fn check_alpha_nonneg(alpha: f64) -> Result<()> {
    if !(alpha.is_finite() && alpha >= 0.0) {
        return Err(Error::AlphaOutOfRange { value: alpha, range: "[0, inf)" });
    }
    if (alpha - 1.0).abs() < BETA_ONE_TOL {
        return Err(Error::AlphaOne);
    }
    Ok(())
}

pub(crate) fn check_alpha_above_one(alpha: f64) -> Result<()> {
    if alpha.is_finite() && alpha > 1.0 + BETA_ONE_TOL {
        Ok(())
    } else {
        Err(Error::AlphaOutOfRange { value: alpha, range: "(1, inf)" })
    }
}

fn same_dim(rho: &DensityMatrix, sigma: &HermitianMatrix) -> Result<()> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch { expected: rho.dim(), actual: sigma.dim() });
    }
    Ok(())
}

/// `ρ^α` from the thresholded spectrum of `ρ`.
pub(crate) fn rho_power(rho: &DensityMatrix, alpha: f64) -> HermitianMatrix {
    let powered: Vec<f64> = rho.thresholded_eigenvalues().iter().map(|&l| power_scalar(l, alpha)).collect();
    rho.spectrum().with_eigenvalues(&powered)
}

/// `σ^{1−α}`; zero eigenvalues map to zero for α < 1.
fn sigma_power(sd: &SpectralDecomposition, alpha: f64) -> HermitianMatrix {
    let r = 1.0 - alpha;
    sd.map(|l| if l <= PSD_TOL { power_scalar(0.0, r) } else { l.powf(r) })
}

fn sigma_weights(sd: &SpectralDecomposition, alpha: f64) -> Vec<f64> {
    let r = 1.0 - alpha;
    sd.eigenvalues().iter().map(|&l| if l <= PSD_TOL { power_scalar(0.0, r) } else { l.powf(r) }).collect()
}

/// `|⟨u_i|v_j⟩|²` for the eigenvectors `u` of `ρ` and `v` of `σ`.
fn overlaps(rho: &DensityMatrix, sd: &SpectralDecomposition) -> DMatrix<f64> {
    (rho.spectrum().eigenvectors().adjoint() * sd.eigenvectors()).map(|z| z.norm_sqr())
}

/// `tr(ρ^α σ^{1−α}) = Σ_ij λ_i^α μ_j^{1−α} |⟨u_i|v_j⟩|²`.
///
/// Every term is non-negative, so there is no cancellation even when
/// `σ^{1−α}` has entries many orders of magnitude above those of `ρ^α`.
fn trace_term(rho: &DensityMatrix, sd: &SpectralDecomposition, alpha: f64) -> f64 {
    let a: Vec<f64> = rho.thresholded_eigenvalues().iter().map(|&l| power_scalar(l, alpha)).collect();
    let b = sigma_weights(sd, alpha);
    let w = overlaps(rho, sd);
    let mut t = 0.0;
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0.0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            t += ai * bj * w[(i, j)];
        }
    }
    t
}

/// `D_α(ρ‖σ)` for `α >= 0`, `α != 1`.
pub fn renyi_relative_entropy(rho: &DensityMatrix, sigma: &HermitianMatrix, alpha: f64) -> Result<DivergenceResult> {
    check_alpha_nonneg(alpha)?;
    same_dim(rho, sigma)?;
    let sd = sigma.spectral()?;
    require_psd(&sd)?;
    if alpha > 1.0 && sd.min_eigenvalue() <= PSD_TOL {
        return Err(Error::SigmaSingular);
    }
    let t = trace_term(rho, &sd, alpha);
    if !(t > 0.0) {
        return Err(Error::TraceNonpositive { value: t });
    }
    let equality_case = alpha > 1.0 && proportionality(rho, &sd, alpha).holds;
    Ok(DivergenceResult { value: t.ln() / (alpha - 1.0), alpha, equality_case })
}

fn proportionality(rho: &DensityMatrix, sigma_sd: &SpectralDecomposition, alpha: f64) -> Proportionality {
    let lhs = sigma_power(sigma_sd, alpha);
    let rhs = rho_power(rho, alpha);
    let c = lhs.trace() / rhs.trace();
    let holds = lhs.max_diff(&rhs.scaled(c)) <= EQ_TOL * lhs.max_abs();
    Proportionality { holds, c }
}

/// Tests `σ^{1−α} = c ρ^α` in relative max-norm, with
/// `c = tr σ^{1−α} / tr ρ^α`.
pub fn equality_condition_check(rho: &DensityMatrix, sigma: &HermitianMatrix, alpha: f64) -> Result<Proportionality> {
    check_alpha_above_one(alpha)?;
    same_dim(rho, sigma)?;
    let sd = sigma.spectral()?;
    require_pd(&sd)?;
    Ok(proportionality(rho, &sd, alpha))
}

/// Determinant lower bound on `D_α(ρ‖σ)` for α > 1:
/// `(α−1)^{-1} (ln d + (α/d) ln det ρ + ((1−α)/d) ln det σ)`.
///
/// The bound is the AM–GM inequality applied to the spectrum of
/// `σ^{(1−α)/2} ρ^α σ^{(1−α)/2}`, so the equality flag is set when that
/// spectrum is flat.
pub fn t4_lower_bound(rho: &DensityMatrix, sigma: &HermitianMatrix, alpha: f64) -> Result<BoundReport> {
    check_alpha_above_one(alpha)?;
    same_dim(rho, sigma)?;
    require_pd(rho.spectrum())?;
    let sd = sigma.spectral()?;
    require_pd(&sd)?;

    let d = rho.dim() as f64;
    let log_det_rho: f64 = rho.eigenvalues().iter().map(|l| l.ln()).sum();
    let log_det_sigma: f64 = sd.eigenvalues().iter().map(|l| l.ln()).sum();
    let bound = (d.ln() + alpha / d * log_det_rho + (1.0 - alpha) / d * log_det_sigma) / (alpha - 1.0);
    let divergence = renyi_relative_entropy(rho, sigma, alpha)?.value;

    // σ^{(1−α)/2} ρ^α σ^{(1−α)/2} written in the eigenbasis of σ
    let half: Vec<f64> = sd.eigenvalues().iter().map(|l| l.powf((1.0 - alpha) / 2.0)).collect();
    let powered: Vec<f64> = rho.eigenvalues().iter().map(|l| l.powf(alpha)).collect();
    let w = rho.spectrum().eigenvectors().adjoint() * sd.eigenvectors();
    let n = rho.dim();
    let core = DMatrix::from_fn(n, n, |j, k| {
        let s: C64 = (0..n).map(|i| w[(i, j)].conj() * w[(i, k)] * powered[i]).sum();
        s * (half[j] * half[k])
    });
    let core = HermitianMatrix::new(core)?.spectral()?;
    let flat = core.max_eigenvalue() - core.min_eigenvalue() <= EQ_TOL * core.max_eigenvalue().abs();

    Ok(BoundReport::ge("divergence >= determinant bound", divergence, bound, CHAIN_TOL).with_equality(flat))
}

/// `D_α(ρ‖σ) <= D_α(ρ‖I) + D_α(I‖σ)` for α > 1 and positive definite `σ`.
pub fn triangle_bound_check(rho: &DensityMatrix, sigma: &HermitianMatrix, alpha: f64) -> Result<BoundReport> {
    check_alpha_above_one(alpha)?;
    same_dim(rho, sigma)?;
    let sd = sigma.spectral()?;
    require_pd(&sd)?;
    let lhs = renyi_relative_entropy(rho, sigma, alpha)?.value;
    let to_identity = renyi_relative_entropy(rho, &HermitianMatrix::identity(rho.dim()), alpha)?.value;
    let from_identity = sd.eigenvalues().iter().map(|l| l.powf(1.0 - alpha)).sum::<f64>().ln() / (alpha - 1.0);
    Ok(BoundReport::le("divergence triangle", lhs, to_identity + from_identity, CHAIN_TOL))
}

/// Reduced state on A of a bipartite state.
pub fn marginal_a(rho_ab: &DensityMatrix) -> Result<DensityMatrix> {
    let (d_a, d_b) = rho_ab.dims().ok_or(Error::NotBipartite)?;
    DensityMatrix::new(partial_trace_b(rho_ab.matrix(), d_a, d_b)?)
}

/// Compares `−D_α(ρ_A‖I_A)` with `H_α(ρ_A)`. The two agree for every
/// α > 0, α != 1.
pub fn marginal_entropy_check(rho_ab: &DensityMatrix, alpha: f64) -> Result<BoundReport> {
    let rho_a = marginal_a(rho_ab)?;
    let via_divergence = -renyi_relative_entropy(&rho_a, &HermitianMatrix::identity(rho_a.dim()), alpha)?.value;
    let direct = renyi_entropy(&rho_a, alpha, Units::Nats)?.value;
    Ok(BoundReport::identity("marginal entropy conventions", via_divergence, direct, CHAIN_TOL))
}
