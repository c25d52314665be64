use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Unknown group spec, missing relator bound and similar setup mistakes.
    #[error("configuration error: {0}")]
    Config(String),

    #[error("invalid argument: {0}")]
    Argument(String),

    /// A vertex or size budget was hit before the computation finished.
    #[error("resource limit: {message}")]
    Resource { message: String },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("unsupported presentation: {0}")]
    UnsupportedPresentation(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn resource(message: impl Into<String>) -> Self {
        Error::Resource {
            message: message.into(),
        }
    }
}
