//! Exact q-series computation and identity verification.
//!
//! Everything in this crate works with truncated formal power series in
//! `u` where `u² = q`, so half-integer exponents of `q` live on a single
//! integer grid ("twice-exponent" units).  Coefficients are arbitrary-
//! precision integers throughout; there is no floating point anywhere.
//!
//! The crate has three layers:
//!
//! * value types: [`series::Series`] (dense, truncated, big-integer) and
//!   the combinatorial carriers [`combinatorics::Partition`] and
//!   [`combinatorics::IndexGrid`];
//! * evaluators: the grid statistics and Hall-Littlewood principal
//!   specializations in [`hall_littlewood`], the Pochhammer/theta product
//!   assembler in [`products`], and the per-family sum sides in
//!   [`identities`];
//! * cross-checks: definition-level reference computations in [`oracle`]
//!   (finite-variable symmetrization, directly coded classical sums) that
//!   validate the fast paths.
//!
//! Internal invariants (negative exponents, non-cancelling denominators)
//! abort via panic: they are provably unreachable, so tripping one means a
//! code bug rather than bad input.  Recoverable conditions (bad arguments,
//! truncation-order misuse, oracle budgets) surface as [`Error`].

pub mod combinatorics;
mod engine;
pub mod family;
pub mod hall_littlewood;
pub mod identities;
pub mod oracle;
pub mod products;
pub mod report;
pub mod series;

pub use family::FamilySpec;
pub use series::{HalfExp, Series};

/// Failure modes that callers can act on.
///
/// Anything not representable here (violated grid invariants, negative
/// computed exponents, a non-integral product assembly) is a bug and
/// panics instead of returning.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    /// The arguments are outside an operation's documented domain.
    #[error("domain error: {0}")]
    Domain(String),
    /// A configured resource budget was exhausted before the result was
    /// certain (currently only the symmetrization oracle's variable-count
    /// budget).
    #[error("resource limit: {0}")]
    Resource(String),
}

/// Shorthand used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
