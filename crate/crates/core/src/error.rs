use core::fmt;

pub type Result<T, E = Error> = core::result::Result<T, E>;

/// Every failure the numerical core can report.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A feature vector or parameter vector has the wrong length.
    Shape {
        expected: usize,
        found: usize,
    },
    /// Total firing strength fell below the degeneracy threshold.
    DegenerateFiring {
        total: f64,
    },
    EmptyDataset,
    /// A structural parameter (width, spread, count, ...) is out of range.
    InvalidParameter(&'static str),
    InvalidConfig(&'static str),
    /// Training produced a non-finite loss.
    Divergence {
        epoch: usize,
    },
    /// A fitness or model evaluation yielded nothing usable.
    Evaluation(&'static str),
    /// No pixel pair exists under the requested GLCM offset.
    DegenerateImage,
    /// Label lists are empty or of different lengths.
    LabelMismatch {
        predicted: usize,
        actual: usize,
    },
    /// A statistical test was given too little data.
    InsufficientData(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Shape { expected, found } => {
                write!(f, "shape mismatch: expected length {expected}, found {found}")
            }
            Error::DegenerateFiring { total } => {
                write!(f, "degenerate input: total firing strength {total:e} is below threshold")
            }
            Error::EmptyDataset => f.write_str("dataset is empty"),
            Error::InvalidParameter(what) => write!(f, "invalid parameter: {what}"),
            Error::InvalidConfig(what) => write!(f, "invalid configuration: {what}"),
            Error::Divergence { epoch } => write!(f, "training diverged at epoch {epoch}"),
            Error::Evaluation(what) => write!(f, "evaluation failed: {what}"),
            Error::DegenerateImage => f.write_str("image has no pixel pair under the offset"),
            Error::LabelMismatch { predicted, actual } => write!(
                f,
                "label lists must be nonempty and equal length (predicted {predicted}, actual {actual})"
            ),
            Error::InsufficientData(what) => write!(f, "insufficient data: {what}"),
        }
    }
}

impl core::error::Error for Error {}
