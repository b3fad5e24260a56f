use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A matrix function was asked for outside its domain (e.g. sqrt of a
    /// matrix with a negative eigenvalue), or a closed form was used outside
    /// the state family it is valid for.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("range error: {0}")]
    Range(String),

    #[error("internal consistency check failed: {0}")]
    Consistency(String),

    #[error("state is not of X form: {0}")]
    Shape(String),

    #[error("unsupported state: {0}")]
    UnsupportedState(String),

    #[error("at {axis} = {value}: {source}")]
    AtGridPoint {
        axis: &'static str,
        value: f64,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    /// Strips any grid-point context and returns the underlying error.
    pub fn root(&self) -> &Error {
        match self {
            Error::AtGridPoint { source, .. } => source.root(),
            e => e,
        }
    }

    pub fn is_argument_error(&self) -> bool {
        matches!(self.root(), Error::InvalidArgument(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
