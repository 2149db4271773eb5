use std::fmt;

/// Errors shared across the table, strategy, simulator, and workload modules.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Table capacity failed the trial-division primality check.
    NonPrimeCapacity(usize),
    /// Strategy or layout parameters violate their invariants.
    InvalidParams(String),
    /// A trial specification is unusable (bad load factor, non-prime fixed capacity, ...).
    InvalidSpec(String),
    /// Simulator start cell is outside the board.
    InvalidStart { start: usize, size: usize },
    /// A probe sequence was advanced after it reported exhaustion.
    ContractViolation(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NonPrimeCapacity(m) => write!(f, "table capacity {m} is not prime"),
            Error::InvalidParams(msg) => write!(f, "invalid parameters: {msg}"),
            Error::InvalidSpec(msg) => write!(f, "invalid trial spec: {msg}"),
            Error::InvalidStart { start, size } => {
                write!(f, "start cell {start} out of range for board of size {size}")
            }
            Error::ContractViolation(msg) => write!(f, "contract violation: {msg}"),
        }
    }
}

impl std::error::Error for Error {}
