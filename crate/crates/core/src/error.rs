use thiserror::Error;

/// Errors produced by the averaging library.
#[derive(Error, Debug, Clone, PartialEq)]
pub enum Error {
    #[error("time series must have at least 2 samples, got {0}")]
    TooShort(usize),
    #[error("time series value at index {index} is not finite ({value})")]
    NonFinite { index: usize, value: f64 },
    #[error("dataset must contain at least one series")]
    EmptyDataset,
    #[error("dataset has {series} series but {labels} labels")]
    LabelCount { series: usize, labels: usize },
    #[error("invalid warping path: {0}")]
    InvalidPath(PathViolation),
    #[error("no admissible warping path for lengths {len1}x{len2} within a band of width {band}")]
    InfeasibleBand { len1: usize, len2: usize, band: usize },
    #[error("brute-force enumeration limited to len1 + len2 <= {limit}, got {got}")]
    EnumerationGuard { limit: usize, got: usize },
    #[error("TAM is undefined when one series has length 1 (lengths {len1} and {len2})")]
    DegenerateLength { len1: usize, len2: usize },
    #[error("invalid step pattern: {0}")]
    InvalidStepPattern(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("input file contains no series")]
    EmptyFile,
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

/// The first clause of the warping-path contract a path breaks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PathViolation {
    Empty,
    /// The path does not start at (0, 0).
    BadStart { first: (usize, usize) },
    /// The path does not end at (len1 - 1, len2 - 1).
    BadEnd { last: (usize, usize), expected: (usize, usize) },
    /// A pair lies outside the similarity matrix.
    OutOfBounds { index: usize, pair: (usize, usize) },
    /// Step `index -> index + 1` moves backwards or stands still.
    NotMonotone { index: usize, step: (isize, isize) },
    /// Step is monotone but not one of (1,1), (1,0), (0,1).
    NonBasicStep { index: usize, step: (usize, usize) },
    /// Path length outside max(len1, len2) ..= len1 + len2 - 1.
    BadLength { len: usize, min: usize, max: usize },
}

impl std::fmt::Display for PathViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PathViolation::Empty => write!(f, "path is empty"),
            PathViolation::BadStart { first } => {
                write!(f, "path starts at {first:?} instead of (0, 0)")
            }
            PathViolation::BadEnd { last, expected } => {
                write!(f, "path ends at {last:?} instead of {expected:?}")
            }
            PathViolation::OutOfBounds { index, pair } => {
                write!(f, "pair {index} {pair:?} lies outside the matrix")
            }
            PathViolation::NotMonotone { index, step } => {
                write!(f, "step {index} {step:?} is not monotone")
            }
            PathViolation::NonBasicStep { index, step } => {
                write!(f, "step {index} {step:?} is not in the basic step pattern")
            }
            PathViolation::BadLength { len, min, max } => {
                write!(f, "path length {len} outside [{min}, {max}]")
            }
        }
    }
}
