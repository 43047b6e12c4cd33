use thiserror::Error;

/// Every failure the library can report.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("exact division failed: {0}")]
    ExactDivisionFailure(String),
    #[error("torus mismatch: {0}")]
    TorusMismatch(String),
    #[error("label `{0}` is missing from the generator order")]
    MissingLabel(String),
    #[error("source commutation matrix is not {n}^2 times the target matrix")]
    MatrixScaleMismatch { n: u32 },
    #[error("invalid quasitriangulation: {0}")]
    InvalidQuasitriangulation(String),
    #[error("edge `{edge}` cannot be flipped: {reason}")]
    NotFlippable { edge: String, reason: String },
    #[error("term has negative exponent {exponent} on flipped edge `{edge}`")]
    NegativeFlippedExponent { edge: String, exponent: i64 },
    #[error("surgery context mismatch: {0}")]
    ContextMismatch(String),
    #[error("`{0}` is not a boundary edge")]
    NotBoundaryEdge(String),
    #[error("`{0}` is not an unmarked boundary component")]
    NotUnmarked(String),
    #[error("negative power of `{0}` requested but its image is not invertible")]
    NonInvertibleImage(String),
    #[error("syntax error at byte {position}: {message}")]
    SyntaxError { position: usize, message: String },
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("surface description contains no data")]
    EmptySurface,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
