//! Exact computations around generalized Diophantine tuples.
//!
//! A set of positive integers `{a_1, ..., a_m}` has property `D_k(n)` when
//! `a_i * a_j + n` is a perfect k-th power for every pair `i < j`. This crate
//! verifies and searches such sets exactly, checks the gap-principle
//! inequalities that force super-exponential growth among their large
//! elements, evaluates Gallagher's larger sieve on explicit and a-priori
//! residue data, computes order-k Dirichlet character sums together with the
//! `sqrt(p |A| |B|)` bound, and evaluates every closed-form constant of the
//! surrounding theory (Evertse's exception count, the sine-product `c(k)`,
//! prime-counting thresholds, and the known upper bounds on `M_k(n)`).
//!
//! All mathematical verdicts are decided by exact integer or rational
//! arithmetic; floating point appears only in advisory fields (margins,
//! logarithmic magnitudes) and in sums whose statements are themselves
//! analytic (`theta`, character sums), where compensated summation keeps the
//! error far below every tolerance used.
//!
//! The companion guide under `book/` walks through each module; its code
//! snippets are compiled as doctests so they cannot drift from the API.

pub mod approx;
pub mod arith;
pub mod bounds;
pub mod characters;
pub mod gap;
pub mod jsonnum;
pub mod sieve;
pub mod tuples;

pub use tuples::{PowerPolicy, TupleRecord, VerifyReport};

/// Errors shared by every module.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// An argument violates the operation's domain (wrong parity, zero
    /// modulus, non-prime modulus, out-of-range set elements, ...).
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// A mathematical precondition of a lemma-style check failed; the check
    /// refuses to report a verdict rather than reporting on garbage.
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),

    /// A search exceeded its node budget. Carries everything produced so far
    /// plus a checkpoint from which the run can be resumed.
    #[error("search node budget exceeded; checkpoint after prefix {}", .checkpoint.describe())]
    SearchInterrupted {
        partial: Vec<tuples::TupleRecord>,
        checkpoint: tuples::SearchCheckpoint,
    },

    /// A computation would exceed the desk-scale resource guards
    /// (prime tables beyond 2^40, discrete-log tables beyond 2^20, ...).
    #[error("resource limit: {0}")]
    ResourceLimit(String),
}

pub type Result<T> = std::result::Result<T, Error>;
