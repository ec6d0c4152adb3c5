//! `sppcert`: certified bounds on the single-photon content of a light source.
//!
//! The standard figure of merit for a single-photon source is the zero-delay
//! second-order correlation `g2 < 1/2`. That criterion alone says nothing about
//! the *amplitude* of the single-photon projection (SPP) `p1 = <1|rho|1>`. With
//! one additional observable — either the mean photon number `N` or the vacuum
//! projection `p0` — hard lower and upper bounds on the SPP and on the
//! single-to-multi-photon projection ratio (SMPPR) `p1/q` become available.
//!
//! The crate is organized around photon-number (Fock-diagonal) distributions:
//!
//! - [`fock`] — truncated photon-number distributions and the exact observables
//!   derived from them (`N`, `g2`, Mandel-Q, projections, multi-photon part).
//! - [`families`] — coherent, thermal, Fock, quantum-dot-with-background and
//!   seeded random state constructors.
//! - [`bounds`] — every certified bound: vacuum-based effective correlation
//!   `(1-p0)*g2`, photon-number-based `N*g2`, the `g2`-only fallback, the
//!   floor bound on `g2` over `N`, set classification, and the [`bounds::analyze`]
//!   dispatcher producing a [`bounds::BoundReport`].
//! - [`qd`] — the quantum-dot application: how much coherent laser background a
//!   source tolerates before each criterion stops certifying a nonzero SPP.
//! - [`oracle`] — independent brute-force verification: exact quantities by
//!   direct summation and randomized counterexample hunts for every inequality.
//!
//! All operations are pure functions over immutable values and are safe to call
//! concurrently. All arithmetic is in `f64`; quantities are O(1) and tests use
//! fixed absolute tolerances.

use thiserror::Error;

pub mod bounds;
pub mod families;
pub mod fock;
pub mod oracle;
pub mod qd;

pub use bounds::{analyze, AnalysisInput, BoundReport, Criterion};
pub use families::FamilySpec;
pub use fock::{ObservableSet, PhotonDistribution};
pub use oracle::{exact_quantities, VerificationReport};

/// Errors shared by all modules.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    /// Input probabilities do not form a distribution (negative mass or
    /// normalization off by more than the allowed budget).
    #[error("not a distribution: {0}")]
    NotADistribution(String),

    /// An argument is outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The criterion's range of validity is exceeded. Distinct from a zero
    /// bound: "no information" and "bound = 0" are different outcomes.
    #[error("not applicable: {0}")]
    NotApplicable(String),

    /// Not enough observables were supplied to evaluate any bound.
    #[error("insufficient data: {0}")]
    InsufficientData(String),

    /// A solve step has no admissible root.
    #[error("no solution: {0}")]
    NoSolution(String),
}

pub type Result<T> = core::result::Result<T, Error>;
