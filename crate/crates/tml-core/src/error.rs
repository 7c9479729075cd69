//! Error type shared by every module of the crate.

use thiserror::Error;

/// Everything that can go wrong below the CLI layer.
///
/// Variants are deliberately flat: callers match on the variant to decide
/// exit codes and recovery, and the numeric payloads carry enough context
/// to reconstruct the offending call.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Modulus failed the deterministic primality test.
    #[error("modulus {q} is not prime")]
    NotPrime { q: u64 },

    /// Modulus below the smallest supported prime (3).
    #[error("modulus {q} is too small (need q >= 3)")]
    TooSmall { q: u64 },

    /// An exponent that must be nonzero was 0.
    #[error("exponent must be nonzero")]
    ZeroExponent,

    /// A residue argument was divisible by the modulus.
    #[error("residue {u} is 0 mod {q}")]
    BadResidue { u: i64, q: u64 },

    /// An enumeration budget was exceeded.
    #[error("work estimate {estimate} exceeds cap {cap}")]
    TooLarge { estimate: u128, cap: u128 },

    /// Argument outside the mathematical domain of the function.
    #[error("argument outside domain: {what}")]
    DomainError { what: String },

    /// Gamma factor requested at (or numerically on top of) a pole.
    #[error("gamma factor evaluated at a pole (s = {re} + {im}i)")]
    PoleError { re: f64, im: f64 },

    /// Contour quadrature could not certify the requested tolerance.
    #[error("quadrature tail {tail:e} exceeds tolerance {tol:e}")]
    QuadratureFailure { tail: f64, tol: f64 },

    /// The functional-equation form requires χ^a and χ^b nontrivial.
    #[error("character power is trivial (index {j}, exponent {a})")]
    TrivialPower { j: u64, a: i64 },

    /// A stated precondition does not hold for these arguments.
    #[error("precondition violated: {what}")]
    PreconditionViolated { what: String },

    /// Systematic-count exponent degenerates (a = bneg), the series diverges.
    #[error("degenerate exponent: a = bneg = {a}")]
    DegenerateExponent { a: i64 },

    /// Root-twist polynomial is reducible over Q (has a rational root).
    #[error("polynomial is reducible over Q (rational root {num}/{den})")]
    ReducibleHint { num: i64, den: i64 },
}

pub type Result<T> = std::result::Result<T, Error>;
