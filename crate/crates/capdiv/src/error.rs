use std::path::PathBuf;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    /// A malformed or invalid record in an input file.
    #[error("{file}: line {line}: {message}")]
    Record { file: String, line: usize, message: String },
    /// A requested metric needs a reference file that was not given.
    #[error("{0}")]
    ReferencesRequired(String),
    /// A requested metric needs embeddings that were not configured.
    #[error("{0}")]
    EmbeddingsRequired(String),
    #[error(transparent)]
    Metric(#[from] capdiv_core::Error),
}

impl Error {
    /// Process exit status for this failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::EmbeddingsRequired(_) | Error::Metric(capdiv_core::Error::MissingEmbedding(_)) => 3,
            Error::ReferencesRequired(_) | Error::Metric(capdiv_core::Error::MissingReferences(_)) => 4,
            _ => 2,
        }
    }
}
