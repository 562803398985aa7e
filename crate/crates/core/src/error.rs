//! Error type shared by every layer of the library.

use thiserror::Error;

/// Everything that can go wrong in a computation.
///
/// Operations never panic on user input; impossible requests (an unsupported
/// ring class, an unverifiable prime, a runaway fixpoint iteration) surface as
/// one of these variants.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    /// The requested operation is not available over this ring class.
    #[error("operation `{op}` is not supported over {ring}: {reason}")]
    UnsupportedRing {
        op: &'static str,
        ring: String,
        reason: String,
    },

    /// Two operands live over structurally different rings.
    #[error("ring mismatch: expected {expected}, found {found}")]
    RingMismatch { expected: String, found: String },

    /// Diagonalisation was requested over a ring that is not a principal ideal
    /// ring (nor a quotient of one we can lift through).
    #[error("{ring} is not a principal ideal ring; cannot diagonalise")]
    NotPID { ring: String },

    /// Matrix or module shapes do not line up.
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    /// A map's matrix does not send relations into relations.
    #[error("map is not well defined: column {column} of the lifted matrix does not land in the target relations")]
    IllDefinedMap { column: usize },

    /// An ideal was used where a certified prime is required.
    #[error("ideal ({gens}) is not certified prime: {reason}")]
    NotCertifiedPrime { gens: String, reason: String },

    /// Exact enumeration of associated primes needs a candidate list here.
    #[error("cannot enumerate candidate primes over {ring}; supply an explicit candidate list")]
    NeedCandidates { ring: String },

    /// The divisible-group oracle only speaks about modules over the integers.
    #[error("operation `{op}` requires the ring of integers, found {ring}")]
    NotIntegerRing { op: &'static str, ring: String },

    /// A stabilising iteration exceeded its cap without converging.
    #[error("iteration `{what}` did not stabilise within {cap} steps")]
    IterationCap { what: &'static str, cap: u32 },

    /// An exhaustive enumeration would exceed the configured budget.
    #[error("enumeration of {what} needs {required} steps, exceeding the budget of {budget}")]
    ExplosionGuard {
        what: String,
        required: u128,
        budget: u128,
    },

    /// An integer or polynomial could not be factored with the built-in routines.
    #[error("cannot factor {value}: {reason}")]
    FactorizationFailed { value: String, reason: String },

    /// Division by zero or an attempted inverse of a non-unit.
    #[error("arithmetic error: {0}")]
    Arithmetic(String),

    /// Invalid argument that fits no more specific variant.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// An internal consistency check failed; indicates a bug, not bad input.
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
