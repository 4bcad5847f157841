//! Exact-arithmetic toolkit for symmetric-group–equivariant graph complexes.
//!
//! The crate has three computational pillars, which cross-validate each other:
//!
//! 1. **Chain-level cohomology** ([`graph`], [`homology`]): enumerate
//!    decorated graphs attached to a decoration module (a functor from
//!    finite sets to rational vector spaces), assemble the exact cochain
//!    complex whose differential splits vertices, and compute equivariant
//!    cohomology by exact / multi-modular sparse linear algebra.
//! 2. **Generating functions** ([`euler`]): closed-form equivariant
//!    Euler-characteristic series evaluated in a truncated Laurent-series
//!    ring with capped polynomial coefficients; entirely independent of the
//!    chain-level path.
//! 3. **Weight reports** ([`hodge`]): dimension formulas for holomorphic
//!    forms on compactified moduli of curves and the assembly of
//!    compactly-supported cohomology in the two extremal Hodge weights,
//!    built from the first two pillars.
//!
//! All arithmetic is exact: rationals are arbitrary precision
//! ([`num_rational::BigRational`]) and modular arithmetic is used only
//! inside certified multi-prime rank computations. No floating point is
//! used anywhere in a computational path.

pub mod cache;
pub mod cli;
pub mod euler;
pub mod famod;
pub mod graph;
pub mod hodge;
pub mod homology;
pub mod sym;

use thiserror::Error;

/// Arbitrary-precision rational number used throughout.
pub type Rat = num_rational::BigRational;
/// Arbitrary-precision integer used throughout.
pub type Int = num_bigint::BigInt;

/// Convenience constructor for a [`Rat`] from an `i64`.
pub fn rat(n: i64) -> Rat {
    Rat::from_integer(Int::from(n))
}

/// Convenience constructor for a [`Rat`] from an integer pair `n / d`.
pub fn ratio(n: i64, d: i64) -> Rat {
    Rat::new(Int::from(n), Int::from(d))
}

/// Errors surfaced by the library.
///
/// The CLI maps these to process exit codes: usage errors exit 2, budget
/// exhaustion exits 3 and internal consistency failures exit 4.
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed user input (bad partition string, inconsistent flags...).
    #[error("invalid input: {0}")]
    InvalidInput(String),
    /// A configured resource budget (basis size, time, memory proxy) was
    /// exhausted before the computation finished.
    #[error("budget exhausted: {0}")]
    BudgetExhausted(String),
    /// An internal consistency gate failed (differential does not square to
    /// zero, equivariance violation, modular ranks disagree beyond retry).
    #[error("internal consistency failure: {0}")]
    Consistency(String),
    /// A query fell outside the coverage of a user-supplied dataset.
    #[error("dataset coverage: {0}")]
    Coverage(String),
    /// Underlying I/O failure.
    #[error(transparent)]
    Io(#[from] std::io::Error),
    /// JSON (de)serialization failure.
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
