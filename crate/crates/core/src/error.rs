use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("Gamma has a pole at {0}")]
    GammaPole(f64),
    #[error("pole at s = {0}")]
    Pole(f64),
    #[error("non-finite result evaluating {0}")]
    NonFinite(&'static str),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("both Laurent factors have a pole; the product has a double pole")]
    DoublePole,
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("prime {p} out of range: {reason}")]
    PrimeOutOfRange { p: u64, reason: &'static str },
    #[error("truncation too small: tail bound {tail:e} exceeds tolerance {tol:e}")]
    TruncationTooSmall { tail: f64, tol: f64 },
    #[error("unsupported discriminant {0}")]
    UnsupportedDiscriminant(i64),
    #[error("divisibility violated: {0}")]
    Divisibility(String),
    #[error("trace/discriminant mismatch: {0}")]
    Mismatch(String),
    #[error("Pell parity failure for x = {x}, y = {y}, b = {b}")]
    ParityFailure { x: String, y: String, b: String },
    #[error("class enumeration not stabilized: {0}")]
    NotStabilized(String),
    #[error("kernel has dimension {0}, expected 1")]
    KernelDimension(usize),
    #[error("adjunction sum {got} differs from 2g-2 = {expected}")]
    GenusMismatch { got: String, expected: String },
    #[error("component {0} is not contractible")]
    NotContractible(String),
    #[error("contraction did not terminate in two components ({0} left)")]
    Contraction(usize),
    #[error("genus {0} <= 1")]
    GenusTooSmall(u64),
    #[error("empty prime range [{0}, {1}]")]
    EmptyRange(u64, u64),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
