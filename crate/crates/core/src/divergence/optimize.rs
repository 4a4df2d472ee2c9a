//! Minimisation of `D_α(ρ_AB ‖ X_A ⊗ σ_B)` over density matrices `σ_B`.
//!
//! `σ_B = exp(H)/tr exp(H)` for Hermitian `H`, which keeps `σ_B` strictly
//! positive definite for every parameter vector. `H` has `d_B²` real
//! parameters: the diagonal, then `(re, im)` of each upper off-diagonal entry
//! in row order.
//!
//! With `K = tr_A[ρ^α (X^{1−α} ⊗ I_B)]` the objective collapses to
//! `(α−1)^{-1} ln Re tr(K σ_B^{1−α})`, so each probe only diagonalises a
//! `d_B × d_B` matrix.

use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use super::{check_alpha_above_one, marginal_a, rho_power};
use crate::linalg::{kron, spectral_decompose, HermitianMatrix};
use crate::quantum::DensityMatrix;
use crate::tol::PSD_TOL;
use crate::verify::Seed;
use crate::{Error, Result, C64};

/// Nelder–Mead and restart settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OptimizerConfig {
    pub restarts: usize,
    pub max_iterations: usize,
    /// Stop when `max f − min f` over the simplex falls to this.
    pub spread_tol: f64,
    pub initial_step: f64,
    pub seed: u64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self { restarts: 5, max_iterations: 5000, spread_tol: 1e-10, initial_step: 0.5, seed: 0x5eed_0f_5167_4a_b }
    }
}

/// Result of one Nelder–Mead run.
#[derive(Debug, Clone, PartialEq)]
pub struct NelderMeadOutcome {
    /// Lowest-valued point evaluated during the run.
    pub best_x: Vec<f64>,
    pub best_value: f64,
    pub iterations: usize,
    pub evaluations: usize,
    pub spread: f64,
    pub converged: bool,
}

/// Derivative-free Nelder–Mead minimisation with the standard coefficients
/// (reflection 1, expansion 2, contraction 1/2, shrink 1/2).
///
/// The returned point is the best probe seen, so the reported value never
/// exceeds any evaluated objective value.
pub fn nelder_mead<F>(mut f: F, x0: &[f64], step: f64, spread_tol: f64, max_iterations: usize) -> NelderMeadOutcome
where
    F: FnMut(&[f64]) -> f64,
{
    let n = x0.len();
    let mut best_x = x0.to_vec();
    let mut best_value = f64::INFINITY;
    let mut evaluations = 0usize;
    let mut eval = |x: &[f64], best_x: &mut Vec<f64>, best_value: &mut f64| {
        evaluations += 1;
        let v = f(x);
        let v = if v.is_nan() { f64::INFINITY } else { v };
        if v < *best_value {
            *best_value = v;
            best_x.clear();
            best_x.extend_from_slice(x);
        }
        v
    };

    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    let v0 = eval(x0, &mut best_x, &mut best_value);
    simplex.push((x0.to_vec(), v0));
    for i in 0..n {
        let mut x = x0.to_vec();
        x[i] += step;
        let v = eval(&x, &mut best_x, &mut best_value);
        simplex.push((x, v));
    }

    let mut iterations = 0;
    let mut spread = f64::INFINITY;
    let mut converged = false;
    while iterations < max_iterations {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        spread = simplex[n].1 - simplex[0].1;
        if spread <= spread_tol {
            converged = true;
            break;
        }
        iterations += 1;

        let mut centroid = vec![0.0; n];
        for (x, _) in &simplex[..n] {
            for (c, xi) in centroid.iter_mut().zip(x) {
                *c += xi / n as f64;
            }
        }
        let along = |t: f64, worst: &[f64]| -> Vec<f64> {
            centroid.iter().zip(worst).map(|(c, w)| c + t * (w - c)).collect()
        };

        let worst = simplex[n].0.clone();
        let reflected = along(-1.0, &worst);
        let fr = eval(&reflected, &mut best_x, &mut best_value);
        if fr < simplex[0].1 {
            let expanded = along(-2.0, &worst);
            let fe = eval(&expanded, &mut best_x, &mut best_value);
            simplex[n] = if fe < fr { (expanded, fe) } else { (reflected, fr) };
        } else if fr < simplex[n - 1].1 {
            simplex[n] = (reflected, fr);
        } else {
            let (contracted, fc) = if fr < simplex[n].1 {
                let x = along(-0.5, &worst);
                let v = eval(&x, &mut best_x, &mut best_value);
                (x, v)
            } else {
                let x = along(0.5, &worst);
                let v = eval(&x, &mut best_x, &mut best_value);
                (x, v)
            };
            if fc < fr.min(simplex[n].1) {
                simplex[n] = (contracted, fc);
            } else {
                let anchor = simplex[0].0.clone();
                for (x, v) in simplex.iter_mut().skip(1) {
                    for (xi, ai) in x.iter_mut().zip(&anchor) {
                        *xi = ai + 0.5 * (*xi - ai);
                    }
                    *v = eval(x, &mut best_x, &mut best_value);
                }
            }
        }
    }
    if !converged {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        spread = simplex[n].1 - simplex[0].1;
        converged = spread <= spread_tol;
    }

    NelderMeadOutcome { best_x, best_value, iterations, evaluations, spread, converged }
}

/// Hermitian matrix from `d²` real parameters (diagonal first, then
/// `(re, im)` of each upper off-diagonal entry in row order).
pub fn hermitian_from_params(theta: &[f64], d: usize) -> HermitianMatrix {
    assert_eq!(theta.len(), d * d, "expected d^2 parameters");
    let mut m = DMatrix::<C64>::zeros(d, d);
    for i in 0..d {
        m[(i, i)] = C64::new(theta[i], 0.0);
    }
    let mut k = d;
    for i in 0..d {
        for j in (i + 1)..d {
            let z = C64::new(theta[k], theta[k + 1]);
            m[(i, j)] = z;
            m[(j, i)] = z.conj();
            k += 2;
        }
    }
    HermitianMatrix::from_trusted(m)
}

/// Eigenvectors and normalised eigenvalues of `exp(H)/tr exp(H)`.
fn gibbs_spectrum(theta: &[f64], d: usize) -> Result<(DMatrix<C64>, Vec<f64>)> {
    let sd = spectral_decompose(&hermitian_from_params(theta, d))?;
    let top = sd.max_eigenvalue();
    let weights: Vec<f64> = sd.eigenvalues().iter().map(|h| (h - top).exp()).collect();
    let z: f64 = weights.iter().sum();
    Ok((sd.eigenvectors().clone(), weights.into_iter().map(|w| w / z).collect()))
}

/// `σ = exp(H)/tr exp(H)` as a density matrix.
pub fn sigma_from_params(theta: &[f64], d: usize) -> Result<DensityMatrix> {
    let (v, w) = gibbs_spectrum(theta, d)?;
    let mut scaled = v.clone();
    for (j, &wj) in w.iter().enumerate() {
        scaled.column_mut(j).scale_mut(wj);
    }
    DensityMatrix::new(HermitianMatrix::from_trusted(scaled * v.adjoint()))
}

/// `tr_A` of a (not necessarily Hermitian) operator on `H_A ⊗ H_B`.
fn partial_trace_a_general(m: &DMatrix<C64>, d_a: usize, d_b: usize) -> DMatrix<C64> {
    DMatrix::from_fn(d_b, d_b, |b, b2| (0..d_a).fold(C64::new(0.0, 0.0), |acc, a| acc + m[(a * d_b + b, a * d_b + b2)]))
}

struct ReducedObjective {
    k: DMatrix<C64>,
    alpha: f64,
    d_b: usize,
}

impl ReducedObjective {
    fn new(rho_ab: &DensityMatrix, x_a: &HermitianMatrix, alpha: f64, d_a: usize, d_b: usize) -> Result<Self> {
        let x_power = x_a.spectral()?.map(|l| l.powf(1.0 - alpha));
        let lifted = kron(&x_power, &HermitianMatrix::identity(d_b));
        let product = rho_power(rho_ab, alpha).as_matrix() * lifted.as_matrix();
        Ok(Self { k: partial_trace_a_general(&product, d_a, d_b), alpha, d_b })
    }

    fn value(&self, theta: &[f64]) -> f64 {
        let Ok((v, w)) = gibbs_spectrum(theta, self.d_b) else {
            return f64::INFINITY;
        };
        // Re tr(K V diag(w^{1-α}) V†) = Σ_j w_j^{1-α} Re (V† K V)_jj
        let rotated = v.adjoint() * &self.k * &v;
        let t: f64 = w
            .iter()
            .enumerate()
            .map(|(j, &wj)| if wj > 0.0 { wj.powf(1.0 - self.alpha) * rotated[(j, j)].re } else { f64::INFINITY })
            .sum();
        if t > 0.0 && t.is_finite() {
            t.ln() / (self.alpha - 1.0)
        } else {
            f64::INFINITY
        }
    }
}

/// Summary of a minimisation over `σ_B`.
#[derive(Debug, Clone, PartialEq)]
pub struct OptimizationOutcome {
    /// Smallest divergence found.
    pub optimum_value: f64,
    pub optimizer_sigma: DensityMatrix,
    /// Nelder–Mead iterations summed over restarts.
    pub iterations: usize,
    pub restarts_used: usize,
    /// At least one restart met the spread criterion.
    pub converged: bool,
    pub evaluations: usize,
}

/// An optimised quantity and the run that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct MinimizedQuantity {
    pub value: f64,
    pub outcome: OptimizationOutcome,
}

fn restart_points(config: &OptimizerConfig, dim: usize) -> Vec<Vec<f64>> {
    let base = Seed(config.seed);
    (0..config.restarts)
        .map(|r| {
            if r == 0 {
                vec![0.0; dim]
            } else {
                let mut rng = base.substream(r as u64).rng();
                (0..dim).map(|_| rng.sample::<f64, _>(StandardNormal)).collect()
            }
        })
        .collect()
}

fn minimize(
    rho_ab: &DensityMatrix,
    x_a: &HermitianMatrix,
    alpha: f64,
    d_a: usize,
    d_b: usize,
    config: &OptimizerConfig,
) -> Result<OptimizationOutcome> {
    let objective = ReducedObjective::new(rho_ab, x_a, alpha, d_a, d_b)?;
    let dim = d_b * d_b;
    let runs: Vec<NelderMeadOutcome> = restart_points(config, dim)
        .par_iter()
        .map(|x0| nelder_mead(|x| objective.value(x), x0, config.initial_step, config.spread_tol, config.max_iterations))
        .collect();

    let converged = runs.iter().any(|r| r.converged);
    if !converged {
        let best_spread = runs.iter().map(|r| r.spread).fold(f64::INFINITY, f64::min);
        return Err(Error::OptimizerFailure { best_spread });
    }
    let best = runs
        .iter()
        .min_by(|a, b| a.best_value.total_cmp(&b.best_value))
        .expect("at least one restart");
    Ok(OptimizationOutcome {
        optimum_value: best.best_value,
        optimizer_sigma: sigma_from_params(&best.best_x, d_b)?,
        iterations: runs.iter().map(|r| r.iterations).sum(),
        restarts_used: runs.len(),
        converged,
        evaluations: runs.iter().map(|r| r.evaluations).sum(),
    })
}

fn bipartite(rho_ab: &DensityMatrix, alpha: f64) -> Result<(usize, usize)> {
    let dims = rho_ab.dims().ok_or(Error::NotBipartite)?;
    check_alpha_above_one(alpha)?;
    Ok(dims)
}

/// `H_α(A|B) = ln d_A − min_{σ_B} D_α(ρ_AB ‖ I_A/d_A ⊗ σ_B)` for α > 1.
pub fn conditional_entropy(rho_ab: &DensityMatrix, alpha: f64) -> Result<MinimizedQuantity> {
    conditional_entropy_with(rho_ab, alpha, &OptimizerConfig::default())
}

pub fn conditional_entropy_with(rho_ab: &DensityMatrix, alpha: f64, config: &OptimizerConfig) -> Result<MinimizedQuantity> {
    let (d_a, d_b) = bipartite(rho_ab, alpha)?;
    let mu_a = HermitianMatrix::identity(d_a).scaled(1.0 / d_a as f64);
    let outcome = minimize(rho_ab, &mu_a, alpha, d_a, d_b, config)?;
    Ok(MinimizedQuantity { value: (d_a as f64).ln() - outcome.optimum_value, outcome })
}

/// `I_α(A;B) = min_{σ_B} D_α(ρ_AB ‖ ρ_A ⊗ σ_B)` for α > 1. Needs a
/// positive definite marginal `ρ_A`.
pub fn mutual_information(rho_ab: &DensityMatrix, alpha: f64) -> Result<MinimizedQuantity> {
    mutual_information_with(rho_ab, alpha, &OptimizerConfig::default())
}

pub fn mutual_information_with(rho_ab: &DensityMatrix, alpha: f64, config: &OptimizerConfig) -> Result<MinimizedQuantity> {
    let (d_a, d_b) = bipartite(rho_ab, alpha)?;
    let rho_a = marginal_a(rho_ab)?;
    let min_eigenvalue = rho_a.spectrum().min_eigenvalue();
    if min_eigenvalue <= PSD_TOL {
        return Err(Error::MarginalSingular { min_eigenvalue });
    }
    let outcome = minimize(rho_ab, rho_a.matrix(), alpha, d_a, d_b, config)?;
    Ok(MinimizedQuantity { value: outcome.optimum_value, outcome })
}

/// Full-matrix evaluation of the objective at a given `σ_B`, independent of
/// the reduced form used during the search.
#[cfg(test)]
pub(crate) fn full_objective(rho_ab: &DensityMatrix, x_a: &HermitianMatrix, sigma_b: &DensityMatrix, alpha: f64) -> f64 {
    super::renyi_relative_entropy(rho_ab, &kron(x_a, sigma_b.matrix()), alpha).unwrap().value
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::partial_trace_a;

    fn rosenbrock(x: &[f64]) -> f64 {
        (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2)
    }

    #[test]
    fn nelder_mead_finds_rosenbrock_minimum() {
        let out = nelder_mead(rosenbrock, &[-1.2, 1.0], 0.5, 1e-14, 5000);
        assert!(out.converged);
        assert!((out.best_x[0] - 1.0).abs() < 1e-3 && (out.best_x[1] - 1.0).abs() < 1e-3);
    }

    #[test]
    fn nelder_mead_reports_best_probe() {
        let mut probes = Vec::new();
        let out = nelder_mead(
            |x| {
                let v = (x[0] - 0.3).powi(2) + (x[1] + 0.7).powi(2) + x[2].powi(4);
                probes.push(v);
                v
            },
            &[1.0, 1.0, 1.0],
            0.5,
            1e-12,
            5000,
        );
        assert_eq!(probes.len(), out.evaluations);
        assert!(probes.iter().all(|&p| out.best_value <= p));
        assert!(probes.contains(&out.best_value));
    }

    #[test]
    fn nelder_mead_iteration_cap() {
        let out = nelder_mead(rosenbrock, &[-1.2, 1.0], 0.5, 0.0, 10);
        assert_eq!(out.iterations, 10);
        assert!(!out.converged);
    }

    #[test]
    fn zero_parameters_give_maximally_mixed() {
        for d in 1..=4 {
            let s = sigma_from_params(&vec![0.0; d * d], d).unwrap();
            assert!(s.matrix().max_diff(&HermitianMatrix::identity(d).scaled(1.0 / d as f64)) < 1e-15);
        }
    }

    #[test]
    fn parameters_cover_off_diagonals() {
        let h = hermitian_from_params(&[1.0, 2.0, 3.0, 0.5, -0.25, 0.0, 1.0, 2.0, -1.0], 3);
        assert_eq!(h.get(0, 1), C64::new(0.5, -0.25));
        assert_eq!(h.get(0, 2), C64::new(0.0, 1.0));
        assert_eq!(h.get(1, 2), C64::new(2.0, -1.0));
        assert_eq!(h.get(2, 1), C64::new(2.0, 1.0));
    }

    #[test]
    fn reduced_objective_matches_full_divergence() {
        let mut rng = Seed(3).rng();
        let rho = crate::verify::random_density(4, Seed(11), None).unwrap().with_dims(2, 2).unwrap();
        let rho_a = marginal_a(&rho).unwrap();
        let mu = HermitianMatrix::identity(2).scaled(0.5);
        for x_a in [rho_a.matrix(), &mu] {
            for alpha in [1.5, 2.0, 3.0] {
                let obj = ReducedObjective::new(&rho, x_a, alpha, 2, 2).unwrap();
                for _ in 0..20 {
                    let theta: Vec<f64> = (0..4).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
                    let sigma = sigma_from_params(&theta, 2).unwrap();
                    let full = full_objective(&rho, x_a, &sigma, alpha);
                    assert!((obj.value(&theta) - full).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn maximally_mixed_worked_example() {
        let rho = DensityMatrix::maximally_mixed(4).with_dims(2, 2).unwrap();
        let mi = mutual_information(&rho, 2.0).unwrap();
        assert!(mi.value.abs() < 1e-4);
        let half = HermitianMatrix::identity(2).scaled(0.5);
        assert!(mi.outcome.optimizer_sigma.matrix().max_diff(&half) < 1e-3);
        let ce = conditional_entropy(&rho, 2.0).unwrap();
        assert!((ce.value - 2f64.ln()).abs() < 1e-4);
        assert!(ce.outcome.optimizer_sigma.matrix().max_diff(&half) < 1e-3);
        assert_eq!(ce.outcome.restarts_used, 5);
    }

    #[test]
    fn product_state_has_zero_mutual_information() {
        let rho_a = DensityMatrix::from_diagonal(&[0.7, 0.3]).unwrap();
        let rho_b = crate::verify::random_density(3, Seed(5), None).unwrap();
        let rho = DensityMatrix::new(kron(rho_a.matrix(), rho_b.matrix())).unwrap().with_dims(2, 3).unwrap();
        let mi = mutual_information(&rho, 2.0).unwrap();
        assert!(mi.value.abs() < 1e-4 && mi.value > -1e-12);
        assert!(mi.outcome.optimizer_sigma.matrix().max_diff(rho_b.matrix()) < 1e-3);
        // independent recomputation at the reported optimiser
        let full = full_objective(&rho, rho_a.matrix(), &mi.outcome.optimizer_sigma, 2.0);
        assert!((full - mi.value).abs() < 1e-10);
        assert!(partial_trace_a(rho.matrix(), 2, 3).unwrap().max_diff(rho_b.matrix()) < 1e-15);
    }

    #[test]
    fn conditional_with_pure_b_factor() {
        // rho = I/2 ⊗ |0><0|: the infimum over sigma_B sits on the boundary
        let rho = DensityMatrix::from_diagonal(&[0.5, 0.0, 0.5, 0.0]).unwrap().with_dims(2, 2).unwrap();
        let ce = conditional_entropy(&rho, 2.0).unwrap();
        assert!(ce.value <= 2f64.ln() + 1e-12);
        assert!((ce.value - 2f64.ln()).abs() < 1e-3);
        assert!(ce.outcome.optimizer_sigma.matrix().get(0, 0).re > 0.99);
    }

    #[test]
    fn input_validation() {
        let plain = DensityMatrix::maximally_mixed(4);
        assert!(matches!(mutual_information(&plain, 2.0), Err(Error::NotBipartite)));
        let tagged = plain.clone().with_dims(2, 2).unwrap();
        assert!(matches!(conditional_entropy(&tagged, 0.5), Err(Error::AlphaOutOfRange { .. })));
        let singular_a = DensityMatrix::from_diagonal(&[0.5, 0.5, 0.0, 0.0]).unwrap().with_dims(2, 2).unwrap();
        assert!(matches!(mutual_information(&singular_a, 2.0), Err(Error::MarginalSingular { .. })));
    }
}
