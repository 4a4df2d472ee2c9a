//! Rényi entropies of probability vectors and density operators, Rényi
//! relative entropies, and numerical checks of the trace inequalities that
//! bound them.
//!
//! The crate is organised bottom-up:
//!
//! - [`linalg`]: dense complex Hermitian matrices, a cyclic Jacobi
//!   eigensolver, spectral matrix functions, Kronecker products, partial
//!   traces and evaluators for the four matrix inequalities the entropy
//!   bounds are built on.
//! - [`classical`]: entropies of type β and order β for discrete
//!   distributions, with their support-product bounds.
//! - [`quantum`]: density matrices and the quantum Rényi entropy.
//! - [`divergence`]: the Petz Rényi relative entropy, its determinant lower
//!   bounds, and conditional entropy / mutual information obtained by
//!   minimising over the reference state on subsystem B.
//! - [`verify`]: seeded random instance generators and randomized property
//!   suites with replayable counterexamples.
//! - [`io`]: the JSON matrix and distribution file formats.
//!
//! Classical entropies are reported in bits; quantum entropies and
//! divergences default to nats.

#![forbid(unsafe_code)]

pub mod classical;
pub mod divergence;
mod error;
pub mod io;
pub mod linalg;
pub mod quantum;
mod report;
pub mod tol;
pub mod verify;

pub use error::{Error, Result};
pub use report::BoundReport;

/// Complex scalar used for every matrix entry.
pub type C64 = nalgebra::Complex<f64>;

/// Logarithm base of a reported entropy or divergence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Units {
    Nats,
    Bits,
}

impl Units {
    /// Converts a value in nats into these units.
    pub fn from_nats(self, nats: f64) -> f64 {
        match self {
            Units::Nats => nats,
            Units::Bits => nats / std::f64::consts::LN_2,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Units::Nats => "nats",
            Units::Bits => "bits",
        }
    }
}

impl std::str::FromStr for Units {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "nats" => Ok(Units::Nats),
            "bits" => Ok(Units::Bits),
            other => Err(Error::Parse(format!("unknown units `{other}` (expected bits or nats)"))),
        }
    }
}
