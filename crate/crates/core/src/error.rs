use thiserror::Error;

/// Errors shared by every layer of the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("division by the zero scalar")]
    DivisionByZero,
    #[error("singular matrix: determinant {det} vanishes identically")]
    SingularMatrix { det: String },
    #[error("normalize_row requires a nonzero row vector")]
    ZeroVector,
    #[error("shape mismatch: {0}")]
    ShapeError(String),
    #[error("pair algebra violates its symmetry invariants: {0}")]
    InvalidPair(String),
    #[error("unknown identity name `{0}`")]
    UnknownIdentity(String),
    #[error("operation requires a commutative algebra, but `{0}` is not commutative")]
    NotCommutative(String),
    #[error("bilinear map fails the cocycle law: {0}")]
    NotACocycle(String),
    #[error("degeneration fails: constant c_{i}{j}^{k} has no limit at t = 0")]
    DegenerationFails { i: usize, j: usize, k: usize },
    #[error("unknown algebra `{0}` in catalog")]
    UnknownAlgebra(String),
    #[error("invalid closed set: {0}")]
    InvalidClosedSet(String),
    #[error("{file}:{line}: parse error: {msg}")]
    Parse {
        file: String,
        line: usize,
        msg: String,
    },
    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn parse(file: &str, line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            file: file.to_string(),
            line,
            msg: msg.into(),
        }
    }
}
