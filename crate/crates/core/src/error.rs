use thiserror::Error;

/// Every failure the library can report.
///
/// Variants carrying `InternalAssertion` indicate that a proved mathematical
/// fact was violated at runtime; they are never expected on valid input.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands live in different fields")]
    DescriptorMismatch,
    #[error("operation not supported over {0}")]
    UnsupportedField(String),
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("polynomial is not monic")]
    NotMonic,
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("input is cyclic: every conjugator to the transpose is symmetric")]
    CyclicInput,
    #[error("element is not invertible")]
    NonInvertible,
    #[error("element does not belong to the involution's algebra")]
    AlgebraMismatch,
    #[error("not an involution: {0}")]
    NotAnInvolution(String),
    #[error("bad twist: {0}")]
    BadTwist(String),
    #[error("invalid quaternion algebra: {0}")]
    InvalidAlgebra(String),
    #[error("conjugator solution space is empty")]
    EmptySolutionSpace,
    #[error("no invertible point found on the search grid")]
    GridExhausted,
    #[error("search space exhausted: {0}")]
    SearchExhausted(String),
    #[error("internal assertion failed: {0}")]
    InternalAssertion(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Stable machine-readable code used in CLI error payloads.
    pub fn code(&self) -> &'static str {
        match self {
            Error::DivisionByZero => "DivisionByZero",
            Error::DescriptorMismatch => "DescriptorMismatch",
            Error::UnsupportedField(_) => "UnsupportedField",
            Error::InvalidField(_) => "InvalidField",
            Error::NotMonic => "NotMonic",
            Error::NotSquare { .. } => "NotSquare",
            Error::ShapeMismatch(_) => "ShapeMismatch",
            Error::SingularMatrix => "SingularMatrix",
            Error::CyclicInput => "CyclicInput",
            Error::NonInvertible => "NonInvertible",
            Error::AlgebraMismatch => "AlgebraMismatch",
            Error::NotAnInvolution(_) => "NotAnInvolution",
            Error::BadTwist(_) => "BadTwist",
            Error::InvalidAlgebra(_) => "InvalidAlgebra",
            Error::EmptySolutionSpace => "EmptySolutionSpace",
            Error::GridExhausted => "GridExhausted",
            Error::SearchExhausted(_) => "SearchExhausted",
            Error::InternalAssertion(_) => "InternalAssertion",
            Error::Parse(_) => "Parse",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
