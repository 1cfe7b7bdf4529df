use thiserror::Error;

/// Errors raised across the toolkit.
///
/// Variants split into two families: contract violations by the caller
/// (see [`Error::is_usage`]) and internal invariant failures, which indicate
/// a bug rather than bad input.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("modulus {0} outside supported range 5 <= p < 2^62")]
    ModulusOutOfRange(u64),
    #[error("operands belong to different fields (p = {left} vs p = {right})")]
    ContextMismatch { left: u64, right: u64 },
    #[error("operands reduced modulo different polynomials")]
    ModulusMismatch,
    #[error("zero has no multiplicative inverse")]
    NotInvertible,
    #[error("exhaustive oracle refused p = {p} (bound {bound})")]
    OracleBoundExceeded { p: u64, bound: u64 },
    #[error("{n} has a prime factor above the trial-division bound {bound}")]
    FactorBoundExceeded { n: u64, bound: u64 },
    #[error("p = {p} is not congruent to {expected}")]
    WrongResidueClass { p: u64, expected: &'static str },
    #[error("witness t does not satisfy t^2 = D with t != 0")]
    InvalidWitness,
    #[error("cubic is reducible over GF(p)")]
    NotIrreducible,
    #[error("multiplier in the root formula vanishes mod p")]
    DegenerateMultiplier,
    #[error("x^2 coefficient of the Frobenius image vanished")]
    ZeroC2,
    #[error("input is not a quadratic residue")]
    NonResidueInput,
    #[error("parameter out of range: {0}")]
    OutOfRange(String),
    #[error("sum of {terms} terms exceeds cap {cap}")]
    SumCapExceeded { terms: u64, cap: u64 },
    #[error("quadratic sum Q(g, h^2, p) is zero and cannot be inverted")]
    NonInvertibleQSum,
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    /// True when the error stems from caller input rather than a bug.
    pub fn is_usage(&self) -> bool {
        !matches!(self, Error::Invariant(_) | Error::ZeroC2)
    }
}

pub type Result<T> = std::result::Result<T, Error>;
