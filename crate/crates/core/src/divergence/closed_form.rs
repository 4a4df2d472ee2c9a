//! Closed forms and lower bounds for the σ_B-minimised quantities.

use serde::Serialize;

use super::optimize::{mutual_information_with, MinimizedQuantity, OptimizerConfig};
use super::{check_alpha_above_one, marginal_a, rho_power};
use crate::linalg::{kron, partial_trace_a, partial_trace_b, HermitianMatrix};
use crate::quantum::DensityMatrix;
use crate::report::BoundReport;
use crate::tol::{EQ_TOL, OPT_TOL};
use crate::{Error, Result};

/// Which σ_B-minimised quantity a closed form refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Conditional,
    Mutual,
}

/// Closed-form value on the proportionality manifold.
#[derive(Debug, Clone, PartialEq)]
pub struct ClosedForm {
    pub value: f64,
    /// Proportionality constant in `X_A^{1−α} ⊗ σ_B^{1−α} = c ρ_AB^α`.
    pub c: f64,
    pub sigma_b: DensityMatrix,
}

/// Looks for `σ_B` and `c` with `X_A^{1−α} ⊗ σ_B^{1−α} = c ρ_AB^α`, where
/// `X_A = I/d_A` (conditional) or `ρ_A` (mutual).
///
/// When `ρ_AB^α` factorises as `R_A ⊗ R_B` with `R_A ∝ X_A^{1−α}`, the choice
/// `σ_B ∝ R_B^{1/(1−α)}` satisfies it and the value is
/// `(α−1)^{-1} (ln d + (2α/d) ln det ρ_AB + ln c)`, subtracted from
/// `ln d_A` for the conditional entropy. Returns `None` whenever the
/// factorisation fails or the inputs are outside the domain (no bipartite
/// tag, α <= 1, singular state).
pub fn t5_closed_form(rho_ab: &DensityMatrix, alpha: f64, mode: Mode) -> Option<ClosedForm> {
    let (d_a, d_b) = rho_ab.dims()?;
    check_alpha_above_one(alpha).ok()?;
    if !rho_ab.is_pd() {
        return None;
    }
    let target = match mode {
        Mode::Conditional => HermitianMatrix::identity(d_a).scaled((d_a as f64).powf(alpha - 1.0)),
        Mode::Mutual => {
            let rho_a = marginal_a(rho_ab).ok()?;
            if !rho_a.is_pd() {
                return None;
            }
            rho_a.spectrum().map(|l| l.powf(1.0 - alpha))
        }
    };

    let r = rho_power(rho_ab, alpha);
    let r_a = partial_trace_b(&r, d_a, d_b).ok()?;
    let r_b = partial_trace_a(&r, d_a, d_b).ok()?;
    let tr_r = r.trace();
    let factored = kron(&r_a, &r_b).scaled(1.0 / tr_r);
    if r.max_diff(&factored) > EQ_TOL * r.max_abs() {
        return None;
    }
    let k = r_a.trace() / target.trace();
    if r_a.max_diff(&target.scaled(k)) > EQ_TOL * r_a.max_abs() {
        return None;
    }

    let sigma_raw = r_b.spectral().ok()?.map(|l| l.powf(1.0 / (1.0 - alpha)));
    let sigma_b = DensityMatrix::new(sigma_raw.scaled(1.0 / sigma_raw.trace())).ok()?;
    let sigma_power_trace: f64 = sigma_b.eigenvalues().iter().map(|l| l.powf(1.0 - alpha)).sum();
    let c = target.trace() * sigma_power_trace / tr_r;

    let d = (d_a * d_b) as f64;
    let log_det: f64 = rho_ab.eigenvalues().iter().map(|l| l.ln()).sum();
    let divergence = (d.ln() + 2.0 * alpha / d * log_det + c.ln()) / (alpha - 1.0);
    let value = match mode {
        Mode::Conditional => (d_a as f64).ln() - divergence,
        Mode::Mutual => divergence,
    };
    Some(ClosedForm { value, c, sigma_b })
}

/// `(α/(α−1)) (ln(d_A d_B) + ln det ρ_AB / (d_A d_B))`, a lower bound on the
/// Rényi mutual information for α > 1.
pub fn t6_bound(rho_ab: &DensityMatrix, alpha: f64) -> Result<f64> {
    let (d_a, d_b) = rho_ab.dims().ok_or(Error::NotBipartite)?;
    check_alpha_above_one(alpha)?;
    if !rho_ab.is_pd() {
        return Err(Error::NotPd { min_eigenvalue: rho_ab.spectrum().min_eigenvalue() });
    }
    let d = (d_a * d_b) as f64;
    let log_det: f64 = rho_ab.eigenvalues().iter().map(|l| l.ln()).sum();
    Ok(alpha / (alpha - 1.0) * (d.ln() + log_det / d))
}

/// Mutual information with its determinant lower bound.
#[derive(Debug, Clone, PartialEq)]
pub struct T6Report {
    pub bound: f64,
    pub mutual_information: MinimizedQuantity,
    /// `I_α >= bound`, checked at `OPT_TOL`.
    pub report: BoundReport,
}

pub fn t6_lower_bound(rho_ab: &DensityMatrix, alpha: f64) -> Result<T6Report> {
    t6_lower_bound_with(rho_ab, alpha, &OptimizerConfig::default())
}

pub(crate) fn t6_lower_bound_with(rho_ab: &DensityMatrix, alpha: f64, config: &OptimizerConfig) -> Result<T6Report> {
    let bound = t6_bound(rho_ab, alpha)?;
    let mutual_information = mutual_information_with(rho_ab, alpha, config)?;
    let report = BoundReport::ge("mutual information >= determinant bound", mutual_information.value, bound, OPT_TOL);
    Ok(T6Report { bound, mutual_information, report })
}
