use std::path::PathBuf;

pub type Result<T, E = PipelineError> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum PipelineError {
    #[error("config error: {0}")]
    Config(String),
    #[error("data error: {0}")]
    Data(String),
    #[error("numeric error: {0}")]
    Numeric(String),
    #[error("I/O error on {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl PipelineError {
    /// Process exit code for this failure class.
    pub fn exit_code(&self) -> i32 {
        match self {
            PipelineError::Config(_) => 2,
            PipelineError::Data(_) | PipelineError::Io { .. } => 3,
            PipelineError::Numeric(_) => 4,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        PipelineError::Io {
            path: path.into(),
            source,
        }
    }

    /// Classifies a core error, prefixing `context`.
    pub(crate) fn from_core(context: &str, err: tnfin_core::Error) -> Self {
        use tnfin_core::Error as E;
        let msg = if context.is_empty() {
            err.to_string()
        } else {
            format!("{context}: {err}")
        };
        match err {
            E::InvalidConfig(_) => PipelineError::Config(msg),
            E::EmptyDataset | E::Shape { .. } | E::DegenerateImage | E::LabelMismatch { .. } => {
                PipelineError::Data(msg)
            }
            E::InsufficientData(_) => PipelineError::Data(msg),
            E::DegenerateFiring { .. }
            | E::Divergence { .. }
            | E::Evaluation(_)
            | E::InvalidParameter(_) => PipelineError::Numeric(msg),
        }
    }
}

/// Untagged conversion; callers prefix their own context.
impl From<tnfin_core::Error> for PipelineError {
    fn from(e: tnfin_core::Error) -> Self {
        PipelineError::from_core("", e)
    }
}
