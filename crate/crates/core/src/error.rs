use std::path::PathBuf;

use thiserror::Error;

use crate::listing::{ListingParseError, PriceParseError, QuantityParseError};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    /// A record in an input file violates its format. `line` is 1-based.
    #[error("{source_name}:{line}: {}{message}", field.as_deref().map(|f| format!("field `{f}`: ")).unwrap_or_default())]
    Parse {
        source_name: String,
        line: usize,
        field: Option<String>,
        message: String,
    },

    /// Failure writing an artifact.
    #[error("cannot write {}: {source}", path.display())]
    Output {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("configuration: `{field}`: {message}")]
    Config { field: String, message: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("term `{0}` is not in the vocabulary")]
    UnknownTerm(String),

    #[error("class `{0}` has no examples")]
    EmptyClass(String),

    #[error("class `{0}` is not declared by the model")]
    UndeclaredClass(String),

    #[error("non-finite loss at epoch {epoch}")]
    NonFiniteLoss { epoch: usize },

    #[error("dimension mismatch: model expects {expected}, input has {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("polarity score {0} is outside [-1, 1]")]
    ScoreOutOfRange(f64),

    #[error("no label for post `{0}`")]
    MissingLabel(String),

    #[error(transparent)]
    Quantity(#[from] QuantityParseError),

    #[error(transparent)]
    Price(#[from] PriceParseError),

    #[error(transparent)]
    Listing(#[from] ListingParseError),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn parse(
        source_name: impl Into<String>,
        line: usize,
        field: Option<&str>,
        message: impl Into<String>,
    ) -> Self {
        Error::Parse {
            source_name: source_name.into(),
            line,
            field: field.map(str::to_owned),
            message: message.into(),
        }
    }

    pub(crate) fn config(field: &str, message: impl Into<String>) -> Self {
        Error::Config {
            field: field.to_owned(),
            message: message.into(),
        }
    }

    /// Process exit status for the command-line front end:
    /// 1 usage/config, 2 data, 3 internal.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config { .. } | Error::InvalidArgument(_) => 1,
            Error::Io { .. }
            | Error::Parse { .. }
            | Error::UnknownTerm(_)
            | Error::EmptyClass(_)
            | Error::UndeclaredClass(_)
            | Error::NonFiniteLoss { .. }
            | Error::DimensionMismatch { .. }
            | Error::ScoreOutOfRange(_)
            | Error::MissingLabel(_)
            | Error::Quantity(_)
            | Error::Price(_)
            | Error::Listing(_)
            | Error::Csv(_) => 2,
            Error::Output { .. } => 3,
            Error::Json(e) if e.is_io() => 3,
            Error::Json(_) => 2,
        }
    }
}
