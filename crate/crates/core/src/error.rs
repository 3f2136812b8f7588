use thiserror::Error;

/// Errors reported by the library. Internal invariant violations that can
/// only come from a bug are reported as [`Error::Internal`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("ell must be at least 3, got {0}")]
    EllTooSmall(i64),

    #[error("q exponent {k} is not coprime to {modulus}")]
    QExponent { k: i64, modulus: u32 },

    #[error("generator index {i} out of range for {n} strands")]
    GeneratorIndex { i: usize, n: usize },

    #[error("boundary mismatch: {left} points against {right}")]
    BoundaryMismatch { left: usize, right: usize },

    #[error("invalid diagram: {0}")]
    InvalidDiagram(String),

    #[error("expected a diagram with no bottom points, found {0}")]
    NonzeroBottom(usize),

    #[error("operands do not live in the same algebra: {0}")]
    Mismatch(String),

    #[error("{t} is not in N' for ell = {ell}: g is defined on N' only")]
    NotInNPrime { t: usize, ell: u32 },

    #[error("quantum integer [{0}]_q vanishes at this root of unity")]
    VanishingQuantumInt(usize),

    #[error("label {label} out of range 0..={max}")]
    LabelOutOfRange { label: usize, max: usize },

    #[error("need at least {min} strands, got {n}")]
    TooFewStrands { n: usize, min: usize },

    #[error("index out of range: {0}")]
    Index(String),

    #[error("series with constant term {0} has no inverse over the integers")]
    SeriesNotInvertible(String),

    #[error("division by zero")]
    DivisionByZero,

    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
