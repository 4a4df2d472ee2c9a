//! Seeded random instances and randomized property suites.
//!
//! Every trial draws from its own substream `Seed::substream(trial)`, so the
//! content of a suite report does not depend on execution order and any
//! trial can be regenerated in isolation.

mod suites;

pub use suites::{replay, run_suite, FailureRecord, Instance, SuiteId, SuiteReport};

use nalgebra::DMatrix;
use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Exp1, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::classical::ProbabilityVector;
use crate::linalg::HermitianMatrix;
use crate::quantum::DensityMatrix;
use crate::{Error, Result, C64};

/// Root of a family of reproducible random streams.
///
/// Streams are ChaCha8 keyed by SplitMix64-mixed seeds, so the same seed
/// yields the same draws on every platform.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Seed(pub u64);

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

impl Seed {
    /// Independent child seed for `index`.
    pub fn substream(self, index: u64) -> Seed {
        Seed(splitmix64(splitmix64(self.0) ^ index.wrapping_mul(0xd6e8_feb8_6659_fd93)))
    }

    pub fn rng(self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.0)
    }
}

fn complex_normal<R: Rng>(rng: &mut R) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

fn ginibre<R: Rng>(rows: usize, cols: usize, rng: &mut R) -> DMatrix<C64> {
    DMatrix::from_fn(rows, cols, |_, _| complex_normal(rng))
}

/// Haar-distributed unitary: QR of a square Ginibre matrix with the phases
/// of `R`'s diagonal folded back into `Q`.
pub fn random_unitary(dim: usize, seed: Seed) -> DMatrix<C64> {
    let mut rng = seed.rng();
    let qr = ginibre(dim, dim, &mut rng).qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..dim {
        let d = r[(j, j)];
        let norm = d.norm();
        if norm > 0.0 {
            let phase = d / norm;
            for z in q.column_mut(j).iter_mut() {
                *z *= phase;
            }
        }
    }
    q
}

/// Hermitian matrix `(G + G†)/2` with standard complex normal `G`.
pub fn random_hermitian(dim: usize, seed: Seed) -> HermitianMatrix {
    let g = ginibre(dim, dim, &mut seed.rng());
    HermitianMatrix::new((&g + g.adjoint()) * C64::new(0.5, 0.0)).expect("symmetrised Ginibre is Hermitian")
}

/// `G G† / tr(G G†)` for a `dim × rank` complex Ginibre matrix `G`.
pub fn random_density(dim: usize, seed: Seed, rank: Option<usize>) -> Result<DensityMatrix> {
    let rank = rank.unwrap_or(dim);
    if rank == 0 || rank > dim {
        return Err(Error::BadRank { rank, dim });
    }
    let g = ginibre(dim, rank, &mut seed.rng());
    let w = &g * g.adjoint();
    let trace: f64 = (0..dim).map(|i| w[(i, i)].re).sum();
    DensityMatrix::new(HermitianMatrix::new(w * C64::new(1.0 / trace, 0.0))?)
}

/// Positive definite matrix with eigenvalues uniform in
/// `[1/√cap, √cap]` and a Haar-random eigenbasis. `cap` below 1 is treated
/// as 1.
pub fn random_pd(dim: usize, seed: Seed, condition_cap: f64) -> HermitianMatrix {
    let root = condition_cap.max(1.0).sqrt();
    let mut rng = seed.substream(0).rng();
    let spectrum: Vec<f64> = (0..dim).map(|_| rng.random_range(1.0 / root..=root)).collect();
    let u = random_unitary(dim, seed.substream(1));
    let mut scaled = u.clone();
    for (j, &l) in spectrum.iter().enumerate() {
        scaled.column_mut(j).scale_mut(l);
    }
    HermitianMatrix::new(scaled * u.adjoint()).expect("unitary conjugation of a real diagonal is Hermitian")
}

/// Uniform (Dirichlet(1, …, 1)) distribution on `n − zeros` random
/// coordinates, exact zeros elsewhere.
pub fn random_simplex(n: usize, seed: Seed, zeros: usize) -> Result<ProbabilityVector> {
    if zeros >= n {
        return Err(Error::BadZeros { zeros, n });
    }
    let mut rng = seed.rng();
    let draws: Vec<f64> = (0..n - zeros).map(|_| rng.sample::<f64, _>(Exp1)).collect();
    let total: f64 = draws.iter().sum();
    let mut p: Vec<f64> = draws.into_iter().map(|x| x / total).collect();
    p.resize(n, 0.0);
    p.shuffle(&mut rng);
    ProbabilityVector::new(p)
}
