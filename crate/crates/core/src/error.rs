use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("action is not transitive: orbit of point 1 has {orbit_size} of {degree} points")]
    IntransitiveAction { orbit_size: usize, degree: usize },

    #[error("invariant violation: {0}")]
    InvariantViolation(String),

    #[error("division by zero")]
    DivisionByZero,

    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),

    #[error("system is not zero-dimensional (Hilbert dimension {0})")]
    NotZeroDimensional(usize),

    #[error("no verified slice solution after {attempts} attempts")]
    SliceExhausted { attempts: usize },

    #[error("dimension {dimension}: Hilbert dimension {hilbert} matches no multiplicity")]
    MultiplicityMismatch { dimension: usize, hilbert: usize },

    #[error("dimensions exhausted with {found} of {degree} accounted for")]
    IncompleteDecomposition { found: usize, degree: usize },

    #[error("projector {candidate} is not orthogonal to accepted projector {accepted}")]
    OrthogonalityViolation { candidate: usize, accepted: usize },

    #[error("degree {degree} exceeds the matrix-level cap {cap}")]
    MatrixCapExceeded { degree: usize, cap: usize },

    #[error("rank {rank} exceeds the configured cap {cap}")]
    RankCapExceeded { rank: usize, cap: usize },

    #[error("{0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
