//! Entropies of discrete probability distributions.
//!
//! Two families share the parameter β > 0:
//!
//! - the entropy of type β, `(2^{1−β} − 1)^{-1} (Σ pᵢ^β − 1)`, built from the
//!   information function of type β;
//! - the Rényi entropy of order β, `(1 − β)^{-1} log₂ Σ pᵢ^β`, with the
//!   Shannon entropy as its β → 1 limit.
//!
//! They are related by `H_order = (1−β)^{-1} log₂[(2^{1−β} − 1) H_type + 1]`.
//! Everything here is in bits.

use serde::{Deserialize, Serialize};

use crate::report::BoundReport;
use crate::tol::{BETA_ONE_TOL, CHAIN_TOL, UNIT_TRACE_TOL, ZERO_THRESHOLD};
use crate::{Error, Result};

/// Entries in `[-NEGATIVE_CLIP, 0)` are rounded up to zero at construction.
const NEGATIVE_CLIP: f64 = 1e-12;

/// A point of the probability simplex.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct ProbabilityVector {
    p: Vec<f64>,
}

impl ProbabilityVector {
    pub fn new(mut p: Vec<f64>) -> Result<Self> {
        if p.is_empty() {
            return Err(Error::EmptySupport);
        }
        for (index, x) in p.iter_mut().enumerate() {
            if !x.is_finite() {
                return Err(Error::DomainError { field: "p", value: *x, reason: "entries must be finite" });
            }
            if *x < 0.0 {
                if *x >= -NEGATIVE_CLIP {
                    *x = 0.0;
                } else {
                    return Err(Error::NegativeProbability { index, value: *x });
                }
            }
        }
        let sum: f64 = p.iter().sum();
        if (sum - 1.0).abs() > UNIT_TRACE_TOL {
            return Err(Error::NotNormalized { sum });
        }
        Ok(Self { p })
    }

    /// Uniform distribution over `n` outcomes.
    pub fn uniform(n: usize) -> Self {
        Self { p: vec![1.0 / n as f64; n] }
    }

    pub fn len(&self) -> usize {
        self.p.len()
    }

    pub fn is_empty(&self) -> bool {
        self.p.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.p
    }

    pub fn support_stats(&self) -> SupportStats {
        let support: Vec<f64> = self.p.iter().copied().filter(|&x| x > ZERO_THRESHOLD).collect();
        SupportStats { n: self.p.len(), n0: self.p.len() - support.len(), support }
    }
}

impl TryFrom<Vec<f64>> for ProbabilityVector {
    type Error = Error;

    fn try_from(p: Vec<f64>) -> Result<Self> {
        Self::new(p)
    }
}

impl From<ProbabilityVector> for Vec<f64> {
    fn from(p: ProbabilityVector) -> Self {
        p.p
    }
}

/// Zero count and nonzero entries (in input order) of a distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct SupportStats {
    pub n: usize,
    pub n0: usize,
    pub support: Vec<f64>,
}

impl SupportStats {
    pub fn support_size(&self) -> usize {
        self.n - self.n0
    }

    /// Mean of `log₂ p′ᵢ` over the support.
    fn mean_log2(&self) -> f64 {
        self.support.iter().map(|x| x.log2()).sum::<f64>() / self.support.len() as f64
    }
}

/// The order (or type) parameter β > 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct BetaOrder(f64);

impl BetaOrder {
    pub fn new(beta: f64) -> Result<Self> {
        if !(beta.is_finite() && beta > 0.0) {
            return Err(Error::DomainError { field: "beta", value: beta, reason: "must be a finite positive number" });
        }
        Ok(Self(beta))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_one(self) -> bool {
        (self.0 - 1.0).abs() < BETA_ONE_TOL
    }

    fn require_not_one(self) -> Result<f64> {
        if self.is_one() {
            Err(Error::BetaOne { value: self.0 })
        } else {
            Ok(self.0)
        }
    }

    /// `2^{1−β} − 1`, the normaliser of type-β quantities.
    fn type_normalizer(self) -> f64 {
        (1.0 - self.0).exp2() - 1.0
    }
}

impl TryFrom<f64> for BetaOrder {
    type Error = Error;

    fn try_from(beta: f64) -> Result<Self> {
        Self::new(beta)
    }
}

impl From<BetaOrder> for f64 {
    fn from(b: BetaOrder) -> Self {
        b.0
    }
}

/// `x^β` with `0^β = 0`.
fn pow0(x: f64, beta: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x.powf(beta)
    }
}

/// The information function of type β,
/// `f(x) = (2^{1−β} − 1)^{-1} [x^β + (1−x)^β − 1]`.
///
/// `f(0) = f(1) = 0` and `f(1/2) = 1` are returned exactly.
pub fn info_function_beta(x: f64, beta: BetaOrder) -> Result<f64> {
    let b = beta.require_not_one()?;
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::DomainError { field: "x", value: x, reason: "must lie in [0, 1]" });
    }
    if x == 0.0 || x == 1.0 {
        return Ok(0.0);
    }
    if x == 0.5 {
        return Ok(1.0);
    }
    Ok((pow0(x, b) + pow0(1.0 - x, b) - 1.0) / beta.type_normalizer())
}

/// Entropy of type β, closed form.
pub fn entropy_type_beta(p: &ProbabilityVector, beta: BetaOrder) -> Result<f64> {
    let b = beta.require_not_one()?;
    let power_sum: f64 = p.as_slice().iter().map(|&x| pow0(x, b)).sum();
    Ok((power_sum - 1.0) / beta.type_normalizer())
}

/// Entropy of type β from its defining recursion
/// `Σ_{i=2}^{n} sᵢ^β f(pᵢ/sᵢ)` with partial sums `sᵢ = p₁ + … + pᵢ` in input
/// order. Terms with `sᵢ = 0` contribute nothing.
pub fn entropy_type_beta_chain(p: &ProbabilityVector, beta: BetaOrder) -> Result<f64> {
    let b = beta.require_not_one()?;
    let probs = p.as_slice();
    let mut s = probs[0];
    let mut total = 0.0;
    for &pi in &probs[1..] {
        s += pi;
        if s > 0.0 {
            let ratio = (pi / s).min(1.0);
            total += s.powf(b) * info_function_beta(ratio, beta)?;
        }
    }
    Ok(total)
}

/// Rényi entropy of order β in bits; Shannon entropy at β = 1.
pub fn renyi_entropy(p: &ProbabilityVector, beta: BetaOrder) -> f64 {
    let probs = p.as_slice();
    if beta.is_one() {
        return -probs.iter().filter(|&&x| x > 0.0).map(|&x| x * x.log2()).sum::<f64>();
    }
    let b = beta.value();
    let power_sum: f64 = probs.iter().map(|&x| pow0(x, b)).sum();
    power_sum.log2() / (1.0 - b)
}

/// Support-product bound on the Rényi entropy:
/// `(1−β)^{-1} (log₂ k + (β/k) Σ log₂ p′ᵢ)` with `k = n − n₀`.
///
/// A lower bound for `0 < β < 1` and an upper bound for `β > 1`.
pub fn t1_bound(p: &ProbabilityVector, beta: BetaOrder) -> Result<f64> {
    let b = beta.require_not_one()?;
    let stats = p.support_stats();
    if stats.support.is_empty() {
        return Err(Error::EmptySupport);
    }
    let k = stats.support_size() as f64;
    Ok((k.log2() + b * stats.mean_log2()) / (1.0 - b))
}

/// Checks [`renyi_entropy`] against [`t1_bound`] in the direction fixed by β.
pub fn t1_check(p: &ProbabilityVector, beta: BetaOrder) -> Result<BoundReport> {
    let bound = t1_bound(p, beta)?;
    let h = renyi_entropy(p, beta);
    Ok(if beta.value() < 1.0 {
        BoundReport::ge("renyi >= support bound", h, bound, CHAIN_TOL)
    } else {
        BoundReport::le("renyi <= support bound", h, bound, CHAIN_TOL)
    })
}

/// Upper bound on the entropy of type β for `0 < β < 1`:
/// `(2^{1−β} − 1)^{-1} [k (Π p′ᵢ)^{β/k} − 1]`.
pub fn type_beta_upper_bound(p: &ProbabilityVector, beta: BetaOrder) -> Result<f64> {
    let b = beta.value();
    if !(b > 0.0 && b < 1.0) {
        return Err(Error::BetaOutOfRange { value: b });
    }
    let stats = p.support_stats();
    if stats.support.is_empty() {
        return Err(Error::EmptySupport);
    }
    let k = stats.support_size() as f64;
    // (Π p′)^{β/k} = 2^{β · mean log₂ p′}
    let geometric = (b * stats.mean_log2()).exp2();
    Ok((k * geometric - 1.0) / beta.type_normalizer())
}

/// `0 <= H^β <= type_beta_upper_bound` for `0 < β < 1`.
pub fn type_beta_sandwich_check(p: &ProbabilityVector, beta: BetaOrder) -> Result<BoundReport> {
    let upper = type_beta_upper_bound(p, beta)?;
    let h = entropy_type_beta(p, beta)?;
    Ok(BoundReport::chain("type-beta sandwich", 0.0, h, upper, CHAIN_TOL))
}

/// The product form compared the other way round: `H^β >= product form`.
///
/// For `0 < β < 1` the normaliser `2^{1−β} − 1` is positive and
/// `Σ p′^β >= k (Π p′)^{β/k}` by AM-GM, so this direction always holds,
/// with equality exactly on uniform supports.
pub fn type_beta_product_check(p: &ProbabilityVector, beta: BetaOrder) -> Result<BoundReport> {
    let product = type_beta_upper_bound(p, beta)?;
    let h = entropy_type_beta(p, beta)?;
    Ok(BoundReport::ge("type-beta entropy >= product form", h, product, CHAIN_TOL))
}

/// Rényi entropy of order β recovered from the entropy of type β.
pub fn order_from_type(h_type: f64, beta: BetaOrder) -> Result<f64> {
    let b = beta.require_not_one()?;
    let arg = beta.type_normalizer() * h_type + 1.0;
    if !(arg > 0.0) {
        return Err(Error::DomainError {
            field: "h_type",
            value: h_type,
            reason: "(2^(1-beta) - 1) * h_type + 1 must be positive",
        });
    }
    Ok(arg.log2() / (1.0 - b))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pv(p: &[f64]) -> ProbabilityVector {
        ProbabilityVector::new(p.to_vec()).unwrap()
    }

    fn beta(b: f64) -> BetaOrder {
        BetaOrder::new(b).unwrap()
    }

    #[test]
    fn probability_vector_validation() {
        assert_eq!(pv(&[0.5, 0.5 + 1e-12, -1e-13]).as_slice()[2], 0.0);
        assert!(matches!(ProbabilityVector::new(vec![0.6, 0.6, -0.2]), Err(Error::NegativeProbability { index: 2, .. })));
        assert!(matches!(ProbabilityVector::new(vec![0.5, 0.4]), Err(Error::NotNormalized { .. })));
        assert!(matches!(ProbabilityVector::new(vec![]), Err(Error::EmptySupport)));
        assert!(BetaOrder::new(0.0).is_err());
        assert!(BetaOrder::new(f64::NAN).is_err());
    }

    #[test]
    fn support_stats_counts_zeros() {
        let s = pv(&[0.5, 0.0, 0.5, 1e-13 - 1e-13]).support_stats();
        assert_eq!((s.n, s.n0), (4, 2));
        assert_eq!(s.support, vec![0.5, 0.5]);
    }

    #[test]
    fn info_function_examples() {
        assert_eq!(info_function_beta(0.5, beta(2.0)).unwrap(), 1.0);
        assert_eq!(info_function_beta(0.0, beta(0.5)).unwrap(), 0.0);
        assert_eq!(info_function_beta(1.0, beta(0.5)).unwrap(), 0.0);
        // (2^{-1} - 1)^{-1} [0.0625 + 0.5625 - 1] = 0.75
        assert!((info_function_beta(0.25, beta(2.0)).unwrap() - 0.75).abs() < 1e-15);
        assert!(matches!(info_function_beta(1.5, beta(2.0)), Err(Error::DomainError { .. })));
        assert!(matches!(info_function_beta(0.5, beta(1.0 + 1e-10)), Err(Error::BetaOne { .. })));
    }

    #[test]
    fn type_beta_examples() {
        assert!((entropy_type_beta(&pv(&[0.5, 0.5]), beta(2.0)).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(entropy_type_beta(&pv(&[1.0, 0.0]), beta(0.5)).unwrap(), 0.0);
        assert!((entropy_type_beta(&ProbabilityVector::uniform(4), beta(2.0)).unwrap() - 1.5).abs() < 1e-15);
        assert!(matches!(entropy_type_beta(&pv(&[1.0]), beta(1.0)), Err(Error::BetaOne { .. })));
    }

    #[test]
    fn chain_form_matches_closed_form_on_examples() {
        for p in [&[0.5, 0.5][..], &[0.0, 0.3, 0.0, 0.7], &[0.1, 0.2, 0.3, 0.4], &[1.0]] {
            for b in [0.3, 0.5, 2.0, 3.0] {
                let closed = entropy_type_beta(&pv(p), beta(b)).unwrap();
                let chain = entropy_type_beta_chain(&pv(p), beta(b)).unwrap();
                assert!((closed - chain).abs() < 1e-12, "{p:?} {b}: {closed} vs {chain}");
            }
        }
    }

    #[test]
    fn renyi_examples() {
        assert!((renyi_entropy(&ProbabilityVector::uniform(8), beta(2.0)) - 3.0).abs() < 1e-14);
        for b in [0.3, 1.0, 2.0, 7.0] {
            assert_eq!(renyi_entropy(&pv(&[1.0, 0.0, 0.0]), beta(b)), 0.0);
        }
        let h = renyi_entropy(&pv(&[0.75, 0.25]), beta(2.0));
        assert!((h + 0.625f64.log2()).abs() < 1e-15);
        assert!((h - 0.678072).abs() < 1e-6);
        // Shannon limit: H(1/2, 1/4, 1/4) = 1.5 bits
        assert!((renyi_entropy(&pv(&[0.5, 0.25, 0.25]), beta(1.0)) - 1.5).abs() < 1e-15);
    }

    #[test]
    fn t1_examples() {
        for n in [2usize, 3, 5, 8] {
            let u = ProbabilityVector::uniform(n);
            let bound = t1_bound(&u, beta(0.5)).unwrap();
            assert!((bound - (n as f64).log2()).abs() < 1e-13);
            assert!((bound - renyi_entropy(&u, beta(0.5))).abs() < 1e-13);
        }

        let p = pv(&[0.5, 0.5, 0.0]);
        let bound = t1_bound(&p, beta(0.5)).unwrap();
        assert!((bound - 1.0).abs() < 1e-15);
        assert!((renyi_entropy(&p, beta(0.5)) - 1.0).abs() < 1e-15);

        // -(1 + log2 0.75 + log2 0.25) = 1 - log2 0.75
        let p = pv(&[0.75, 0.25]);
        let bound = t1_bound(&p, beta(2.0)).unwrap();
        assert!((bound - (1.0 - 0.75f64.log2())).abs() < 1e-14);
        assert!((bound - 1.415).abs() < 1e-3);
        let report = t1_check(&p, beta(2.0)).unwrap();
        assert!(report.pass && !report.equality);

        assert!(matches!(t1_bound(&p, beta(1.0)), Err(Error::BetaOne { .. })));
    }

    #[test]
    fn upper_bound_examples() {
        let b = type_beta_upper_bound(&ProbabilityVector::uniform(2), beta(0.5)).unwrap();
        assert!((b - 1.0).abs() < 1e-14);
        assert_eq!(type_beta_upper_bound(&pv(&[1.0, 0.0]), beta(0.5)).unwrap(), 0.0);

        let p = pv(&[0.9, 0.1]);
        let upper = type_beta_upper_bound(&p, beta(0.5)).unwrap();
        let expected = (2.0 * 0.09f64.powf(0.25) - 1.0) / (2f64.sqrt() - 1.0);
        assert!((upper - expected).abs() < 1e-14);
        assert!((upper - 0.2304).abs() < 1e-3);
        // sum sqrt(p) >= 2 (p1 p2)^(1/4) by AM-GM, so the entropy sits above
        // the product form and the stated upper sandwich does not hold here
        let h = (0.9f64.sqrt() + 0.1f64.sqrt() - 1.0) / (2f64.sqrt() - 1.0);
        assert!((entropy_type_beta(&p, beta(0.5)).unwrap() - h).abs() < 1e-14);
        assert!(h > upper);
        let stated = type_beta_sandwich_check(&p, beta(0.5)).unwrap();
        assert!(!stated.pass);
        assert!(type_beta_product_check(&p, beta(0.5)).unwrap().pass);
        let uniform = type_beta_sandwich_check(&ProbabilityVector::uniform(3), beta(0.3)).unwrap();
        assert!(uniform.pass && uniform.equality);

        assert!(matches!(type_beta_upper_bound(&p, beta(2.0)), Err(Error::BetaOutOfRange { .. })));
    }

    #[test]
    fn order_from_type_examples() {
        assert_eq!(order_from_type(0.0, beta(3.0)).unwrap(), 0.0);
        assert!((order_from_type(1.0, beta(2.0)).unwrap() - 1.0).abs() < 1e-15);
        let p = pv(&[0.75, 0.25]);
        let h_type = entropy_type_beta(&p, beta(2.0)).unwrap();
        assert!((order_from_type(h_type, beta(2.0)).unwrap() - renyi_entropy(&p, beta(2.0))).abs() < 1e-14);
        // (2^{-1} - 1) * 2 + 1 = 0
        assert!(matches!(order_from_type(2.0, beta(2.0)), Err(Error::DomainError { .. })));
    }
}
