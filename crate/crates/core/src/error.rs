//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("q = {q} is not prime")]
    NonPrimeQ { q: u64 },
    #[error("modulus is reducible over F_q")]
    ReducibleModulus,
    #[error("modulus is not monic of degree m with digits below q")]
    InvalidModulus,
    #[error("no irreducible modulus found by the scan (internal bug)")]
    NoIrreducibleFound,
    #[error("extension F_{{{q}^{m}}} exceeds the supported size")]
    ExtensionTooLarge { q: u64, m: usize },
    #[error("division by zero field element")]
    DivisionByZero,
    #[error("operands belong to different field contexts")]
    ContextMismatch,
    #[error("element is not normal")]
    NotNormal,
    #[error("basis is singular")]
    SingularBasis,
    #[error("automorphism exponents disagree or a linearized polynomial is required")]
    AutomorphismMismatch,
    #[error("division by the zero polynomial")]
    DivisionByZeroPoly,
    #[error("polynomial degree too large for the operation")]
    DegreeTooLarge,
    #[error("no normal basis available in the context")]
    MissingNormalBasis,
    #[error("matrix or vector shapes do not match")]
    ShapeMismatch,
    #[error("input collection is empty")]
    EmptyInput,
    #[error("interpolation abscissae are linearly dependent")]
    DependentAbscissae,
    #[error("invalid stopping degree for the Euclidean algorithm")]
    InvalidStop,
    #[error("degenerate Euclidean instance has no solution")]
    NoSolution,
    #[error("code locators must form a normal basis with n = m")]
    RequiresNormalBasis,
    #[error("channel weights t + rho + gamma exceed the code length")]
    RadiusInfeasible,
    #[error("block length {s} does not divide the extension degree {m}")]
    BlockLength { s: usize, m: usize },
}
