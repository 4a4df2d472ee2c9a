//! Density matrices and the quantum Rényi entropy
//! `H_α(ρ) = (1−α)^{-1} log tr ρ^α`, computed from the spectrum.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::classical::{renyi_entropy as classical_renyi, BetaOrder, ProbabilityVector};
use crate::linalg::{clip_eigenvalue, HermitianMatrix, PsdClass, SpectralDecomposition};
use crate::report::BoundReport;
use crate::tol::{BETA_ONE_TOL, CHAIN_TOL, UNIT_TRACE_TOL, ZERO_THRESHOLD};
use crate::{Error, Result, Units, C64};

/// A unit-trace PSD Hermitian matrix with its spectrum precomputed.
///
/// Eigenvalues in `[-PSD_TOL, 0)` are stored as exact zeros.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: HermitianMatrix,
    spectrum: SpectralDecomposition,
    dims: Option<(usize, usize)>,
}

impl DensityMatrix {
    pub fn new(matrix: HermitianMatrix) -> Result<Self> {
        let spectrum = matrix.spectral()?;
        let class = PsdClass::from_min_eigenvalue(spectrum.min_eigenvalue());
        if !class.is_psd() {
            return Err(Error::NotPsd { min_eigenvalue: class.min_eigenvalue() });
        }
        let trace = matrix.trace();
        if (trace - 1.0).abs() > UNIT_TRACE_TOL {
            return Err(Error::TraceNotOne { trace });
        }
        let spectrum = spectrum.map_eigenvalues(clip_eigenvalue);
        Ok(Self { matrix, spectrum, dims: None })
    }

    /// Tags the state as living on `H_A ⊗ H_B`.
    pub fn with_dims(mut self, d_a: usize, d_b: usize) -> Result<Self> {
        if d_a == 0 || d_b == 0 || d_a * d_b != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), actual: d_a * d_b });
        }
        self.dims = Some((d_a, d_b));
        Ok(self)
    }

    /// `I/d`.
    pub fn maximally_mixed(d: usize) -> Self {
        let matrix = HermitianMatrix::identity(d).scaled(1.0 / d as f64);
        Self::new(matrix).expect("I/d is a density matrix")
    }

    pub fn from_diagonal(p: &[f64]) -> Result<Self> {
        Self::new(HermitianMatrix::from_real_diagonal(p)?)
    }

    pub fn matrix(&self) -> &HermitianMatrix {
        &self.matrix
    }

    pub fn spectrum(&self) -> &SpectralDecomposition {
        &self.spectrum
    }

    pub fn eigenvalues(&self) -> &[f64] {
        self.spectrum.eigenvalues()
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn dims(&self) -> Option<(usize, usize)> {
        self.dims
    }

    pub fn is_pd(&self) -> bool {
        PsdClass::from_min_eigenvalue(self.spectrum.min_eigenvalue()).is_pd()
    }

    /// Eigenvalues with everything at or below `ZERO_THRESHOLD` set to zero.
    pub fn thresholded_eigenvalues(&self) -> Vec<f64> {
        self.eigenvalues().iter().map(|&l| if l > ZERO_THRESHOLD { l } else { 0.0 }).collect()
    }

    /// Number of zero eigenvalues under the `ZERO_THRESHOLD` rule.
    pub fn zero_count(&self) -> usize {
        self.eigenvalues().iter().filter(|&&l| l <= ZERO_THRESHOLD).count()
    }

    /// `U ρ U†` for a unitary `U`. Keeps the bipartite tag.
    pub fn conjugate(&self, unitary: &DMatrix<C64>) -> Result<Self> {
        let m = unitary * self.matrix.as_matrix() * unitary.adjoint();
        let rotated = Self::new(HermitianMatrix::new(m)?)?;
        match self.dims {
            Some((a, b)) => rotated.with_dims(a, b),
            None => Ok(rotated),
        }
    }
}

/// An entropy together with the order and units it was computed in.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EntropyValue {
    pub value: f64,
    pub units: Units,
    pub alpha: f64,
}

pub(crate) fn check_alpha_positive(alpha: f64) -> Result<()> {
    if alpha.is_finite() && alpha > 0.0 {
        Ok(())
    } else {
        Err(Error::AlphaOutOfRange { value: alpha, range: "(0, inf)" })
    }
}

/// `Σ λᵢ^α` over the thresholded spectrum, `0^α = 0`.
pub(crate) fn spectral_power_sum(eigenvalues: &[f64], alpha: f64) -> f64 {
    eigenvalues.iter().filter(|&&l| l > 0.0).map(|&l| l.powf(alpha)).sum()
}

fn entropy_nats(eigenvalues: &[f64], alpha: f64) -> f64 {
    if (alpha - 1.0).abs() < BETA_ONE_TOL {
        -eigenvalues.iter().filter(|&&l| l > 0.0).map(|&l| l * l.ln()).sum::<f64>()
    } else {
        spectral_power_sum(eigenvalues, alpha).ln() / (1.0 - alpha)
    }
}

/// Quantum Rényi entropy of order α > 0; the von Neumann entropy at α = 1.
pub fn renyi_entropy(rho: &DensityMatrix, alpha: f64, units: Units) -> Result<EntropyValue> {
    check_alpha_positive(alpha)?;
    let nats = entropy_nats(&rho.thresholded_eigenvalues(), alpha);
    Ok(EntropyValue { value: units.from_nats(nats), units, alpha })
}

/// Classical Rényi entropy (bits) of the eigenvalue distribution. Used as
/// the diagonal oracle for [`renyi_entropy`].
pub fn spectrum_entropy_bits(rho: &DensityMatrix, alpha: f64) -> Result<f64> {
    let p = ProbabilityVector::new(rho.thresholded_eigenvalues())?;
    Ok(classical_renyi(&p, BetaOrder::new(alpha)?))
}

/// Spectral bounds on `H_α(ρ)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectralBounds {
    pub entropy: EntropyValue,
    /// `(1−α)^{-1} (log(d−d₀) + (α/(d−d₀)) log Π λ′ᵢ)`.
    pub bound: f64,
    pub d: usize,
    pub d0: usize,
    /// `H_α >= bound` for α < 1, `H_α <= bound` for α > 1.
    pub direction: BoundReport,
    /// `H_α <= log d`.
    pub cap: BoundReport,
    /// `bound <= H_α <= log d`, only for α < 1.
    pub sandwich: Option<BoundReport>,
}

impl SpectralBounds {
    pub fn pass(&self) -> bool {
        self.direction.pass && self.cap.pass && self.sandwich.as_ref().is_none_or(|s| s.pass)
    }

    pub fn reports(&self) -> Vec<BoundReport> {
        let mut out = vec![self.direction.clone(), self.cap.clone()];
        out.extend(self.sandwich.clone());
        out
    }
}

/// Evaluates the support-product bound, the `log d` cap and (for α < 1)
/// the sandwich between them.
///
/// `d` is the Hilbert-space dimension and `d₀` the number of zero
/// eigenvalues.
pub fn t3_bound(rho: &DensityMatrix, alpha: f64, units: Units) -> Result<SpectralBounds> {
    check_alpha_positive(alpha)?;
    if (alpha - 1.0).abs() < BETA_ONE_TOL {
        return Err(Error::AlphaOne);
    }
    let eig = rho.thresholded_eigenvalues();
    let d = eig.len();
    let support: Vec<f64> = eig.iter().copied().filter(|&l| l > 0.0).collect();
    let k = support.len() as f64;
    let sum_log: f64 = support.iter().map(|l| l.ln()).sum();
    let bound_nats = (k.ln() + alpha / k * sum_log) / (1.0 - alpha);
    let h_nats = entropy_nats(&eig, alpha);
    let cap_nats = (d as f64).ln();

    let h = units.from_nats(h_nats);
    let bound = units.from_nats(bound_nats);
    let cap = units.from_nats(cap_nats);

    let direction = if alpha < 1.0 {
        BoundReport::ge("entropy >= spectral product bound", h, bound, CHAIN_TOL)
    } else {
        BoundReport::le("entropy <= spectral product bound", h, bound, CHAIN_TOL)
    };
    let cap_report = BoundReport::le("entropy <= log d", h, cap, CHAIN_TOL);
    let sandwich = (alpha < 1.0).then(|| BoundReport::chain("spectral sandwich", bound, h, cap, CHAIN_TOL));

    Ok(SpectralBounds {
        entropy: EntropyValue { value: h, units, alpha },
        bound,
        d,
        d0: d - support.len(),
        direction,
        cap: cap_report,
        sandwich,
    })
}
