use std::fmt;
use std::io;

/// Error type shared by every module of the crate.
#[derive(Debug)]
pub enum Error {
    /// A parameter was outside its documented range.
    InvalidArgument(String),
    /// The d-clique graph is disconnected, so d-distances are undefined.
    NotConnected { d: usize },
    /// A square matrix was required.
    NotSquare { rows: usize, cols: usize },
    /// Input exceeds the size limit of an exhaustive algorithm.
    TooLarge(String),
    /// Inputs that were promised to belong together do not match.
    ContractViolation(String),
    /// Malformed textual input; positions are 1-based.
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    Io(io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidArgument(msg) => write!(f, "invalid argument: {msg}"),
            Error::NotConnected { d } => {
                write!(f, "the {d}-clique graph is not connected")
            }
            Error::NotSquare { rows, cols } => {
                write!(f, "square matrix required, got {rows}x{cols}")
            }
            Error::TooLarge(msg) => write!(f, "input too large: {msg}"),
            Error::ContractViolation(msg) => write!(f, "contract violation: {msg}"),
            Error::Parse {
                line,
                column,
                message,
            } => write!(f, "parse error at line {line}, column {column}: {message}"),
            Error::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

impl std::error::Error for Error {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            Error::Io(e) => Some(e),
            _ => None,
        }
    }
}

impl From<io::Error> for Error {
    fn from(e: io::Error) -> Self {
        Error::Io(e)
    }
}
