use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("exponent pair ({a2}, {b2}) has mixed parity")]
    Parity { a2: i32, b2: i32 },
    #[error("split obstruction: {0}")]
    SplitObstruction(String),
    #[error("inexact division: {0}")]
    Division(String),
    #[error("class ({0}, {1}) has no slope")]
    ZeroClass(i64, i64),
    #[error("class ({0}, {1}) is not in the positive cone")]
    NotPositive(i64, i64),
    #[error("empty path")]
    EmptyPath,
    #[error("weights differ: {0}")]
    WeightMismatch(String),
    #[error("determinant of ({0}, {1}; {2}, {3}) is not 1")]
    NotUnimodular(i64, i64, i64, i64),
    #[error("segment leaves the positive cone under the transformation")]
    OutOfCone,
    #[error("vectors are collinear: {0}")]
    Collinear(String),
    #[error("triangle is not minimal: {0}")]
    NotMinimalTriangle(String),
    #[error("relation config is incoherent: {0}")]
    ConfigIncoherent(String),
    #[error("singular transition: {0}")]
    SingularTransition(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("i/o error: {0}")]
    Io(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    /// Process exit status for the command-line tool.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::ConfigIncoherent(_) => 2,
            Error::SplitObstruction(_)
            | Error::Division(_)
            | Error::SingularTransition(_)
            | Error::Invariant(_) => 3,
            _ => 1,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
