use thiserror::Error;

/// Errors shared by every module of the crate.
///
/// Precision-related variants are recoverable: the caller may rebuild the
/// offending inputs at a higher precision and retry.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("prime mismatch: {0} vs {1}")]
    PrimeMismatch(u64, u64),

    #[error("precision must be at least 1 (got {0})")]
    InvalidPrecision(u32),

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("denominator is zero")]
    ZeroDenominator,

    #[error("division by an element indistinguishable from zero at the current precision")]
    DivisionByZero,

    #[error("operation requires a nonzero element but the input is zero to precision")]
    ZeroInput,

    #[error("insufficient precision: {op} needs {needed} digits, only {available} available")]
    InsufficientPrecision {
        op: &'static str,
        needed: i64,
        available: i64,
    },

    #[error("element is not a square")]
    NotASquare,

    #[error("quadratic form is degenerate at the working precision")]
    DegenerateForm,

    #[error("matrix is singular at the working precision")]
    SingularMatrix,

    #[error("matrix does not preserve the bilinear form at the working precision")]
    NotOrthogonal,

    #[error("matrix is not special orthogonal (determinant -1)")]
    NotSpecial,

    #[error("reflection vector has zero norm at the working precision")]
    NullReflectionVector,

    #[error("vector is not null to the certification threshold")]
    NotNull,

    #[error("vector is null; a nonzero norm is required")]
    UnexpectedNull,

    #[error("inner products of sources and targets disagree; no isometry can extend the pairs")]
    GramMismatch,

    #[error("degenerate configuration at the working precision: {0}")]
    DegenerateConfiguration(&'static str),

    #[error("form is anisotropic; particle classification requires an isotropic form (the construction assumes the form has null vectors)")]
    AnisotropicForm,

    #[error("internal inconsistency: {0}")]
    Internal(&'static str),

    #[error("inconsistent reduction step list: {0}")]
    InconsistentSteps(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("tau must be nonzero to precision")]
    ZeroTau,
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Stable machine-readable code, used by the CLI error stream.
    pub fn code(&self) -> &'static str {
        match self {
            Error::PrimeMismatch(_, _) => "prime_mismatch",
            Error::InvalidPrecision(_) => "invalid_precision",
            Error::NotPrime(_) => "not_prime",
            Error::ZeroDenominator => "zero_denominator",
            Error::DivisionByZero => "division_by_zero",
            Error::ZeroInput => "zero_input",
            Error::InsufficientPrecision { .. } => "insufficient_precision",
            Error::NotASquare => "not_a_square",
            Error::DegenerateForm => "degenerate_form",
            Error::SingularMatrix => "singular_matrix",
            Error::NotOrthogonal => "not_orthogonal",
            Error::NotSpecial => "not_special",
            Error::NullReflectionVector => "null_reflection_vector",
            Error::NotNull => "not_null",
            Error::UnexpectedNull => "unexpected_null",
            Error::GramMismatch => "gram_mismatch",
            Error::DegenerateConfiguration(_) => "degenerate_configuration",
            Error::AnisotropicForm => "anisotropic_form",
            Error::Internal(_) => "internal",
            Error::InconsistentSteps(_) => "inconsistent_steps",
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            Error::Parse(_) => "parse_error",
            Error::ZeroTau => "zero_tau",
        }
    }

    /// True for errors the caller can clear by rebuilding inputs at a higher
    /// precision.
    pub fn is_precision_exhaustion(&self) -> bool {
        matches!(self, Error::InsufficientPrecision { .. })
    }
}
