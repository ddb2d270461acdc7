use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("validation error: {0}")]
    Validation(String),
    #[error("field mismatch: {0}")]
    FieldMismatch(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("zero edge label")]
    ZeroLabel,
    #[error("enumeration exceeded the order bound {0}")]
    OrderBoundExceeded(usize),
    #[error("elements are not comparable in Bruhat order")]
    NotComparable,
    #[error("realization is not reflection faithful (witness {0})")]
    NotReflectionFaithful(String),
    #[error("word is not reduced: {0}")]
    NotReduced(String),
    #[error("vertex set is not closed: {0}")]
    NotClosed(String),
    #[error("vertex set is not open: {0}")]
    NotOpen(String),
    #[error("window [{lo}, {hi}] did not stabilize")]
    WindowNotStabilized { lo: i32, hi: i32 },
    #[error("module is not free in the window: {0}")]
    NotFreeInWindow(String),
    #[error("split failure: {0}")]
    SplitFailure(String),
    #[error("lift failure: {0}")]
    LiftFailure(String),
    #[error("ambiguous lift: {0}")]
    LiftAmbiguous(String),
    #[error("inconclusive: {0}")]
    Inconclusive(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    /// Exit code used by the command line driver.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse(_)
            | Error::Validation(_)
            | Error::FieldMismatch(_)
            | Error::NotComparable
            | Error::NotReduced(_)
            | Error::NotClosed(_)
            | Error::NotOpen(_)
            | Error::ZeroLabel
            | Error::OrderBoundExceeded(_)
            | Error::NotReflectionFaithful(_)
            | Error::Io(_) => 2,
            Error::WindowNotStabilized { .. } => 3,
            _ => 4,
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

pub type Result<T> = std::result::Result<T, Error>;
