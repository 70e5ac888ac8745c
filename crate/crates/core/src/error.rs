use std::fmt;

use crate::triples::Triple;

/// The first Latin-property violation found in an array or triple list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    SymbolOutOfRange { row: usize, col: usize, symbol: usize },
    RowRepeat { row: usize, col: usize, symbol: usize },
    ColumnRepeat { row: usize, col: usize, symbol: usize },
    EmptyCell { row: usize, col: usize },
    /// Two triples agreeing in two coordinates.
    TripleConflict { first: Triple, second: Triple },
    TripleOutOfRange { triple: Triple, n: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::SymbolOutOfRange { row, col, symbol } => {
                write!(f, "symbol {symbol} out of range at ({row}, {col})")
            }
            Violation::RowRepeat { row, col, symbol } => {
                write!(f, "row violation at row {row}: symbol {symbol} repeated at column {col}")
            }
            Violation::ColumnRepeat { row, col, symbol } => {
                write!(f, "column violation at column {col}: symbol {symbol} repeated at row {row}")
            }
            Violation::EmptyCell { row, col } => write!(f, "empty cell at ({row}, {col})"),
            Violation::TripleConflict { first, second } => {
                write!(f, "triples {first} and {second} share two coordinates")
            }
            Violation::TripleOutOfRange { triple, n } => {
                write!(f, "triple {triple} out of range for order {n}")
            }
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("not Latin: {0}")]
    Invalid(Violation),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("{0}")]
    OutOfRange(String),
    #[error("{0}")]
    Incomplete(String),
    #[error("retry budget exhausted after {0} attempts")]
    RetryBudgetExhausted(u64),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("search failed: {0}")]
    SearchFailed(String),
    #[error("boosting diverged at iteration {0}")]
    Diverged(usize),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl From<Violation> for Error {
    fn from(v: Violation) -> Self {
        Error::Invalid(v)
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
