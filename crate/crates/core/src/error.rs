use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Broad failure class, used by front ends to pick an exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Input,
    Config,
    Degenerate,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("no parseable data rows")]
    EmptyInput,

    #[error("header is missing mapped column '{0}'")]
    MissingColumn(String),

    #[error("series too short: {got} {what}, need at least {need}")]
    TooShort {
        what: &'static str,
        got: usize,
        need: usize,
    },

    #[error("length mismatch: {0} != {1}")]
    LengthMismatch(usize, usize),

    #[error("non-finite value at position {0}")]
    NonFinite(usize),

    #[error("non-positive price on {date}: {field} = {value}")]
    NonPositivePrice {
        date: chrono::NaiveDate,
        field: &'static str,
        value: f64,
    },

    #[error("degenerate sample: {0}")]
    Degenerate(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("unknown {kind} '{name}'")]
    Unknown { kind: &'static str, name: String },

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::EmptyInput
            | Error::TooShort { .. }
            | Error::LengthMismatch(..)
            | Error::NonFinite(_)
            | Error::NonPositivePrice { .. }
            | Error::Csv(_)
            | Error::Json(_)
            | Error::Io(_) => ErrorClass::Input,
            Error::MissingColumn(_) | Error::Config(_) | Error::Unknown { .. } => ErrorClass::Config,
            Error::Degenerate(_) => ErrorClass::Degenerate,
        }
    }

    /// Short kebab-case token identifying the failure.
    pub fn reason(&self) -> &'static str {
        match self {
            Error::EmptyInput => "empty-input",
            Error::MissingColumn(_) => "missing-column",
            Error::TooShort { .. } => "too-short",
            Error::LengthMismatch(..) => "length-mismatch",
            Error::NonFinite(_) => "non-finite",
            Error::NonPositivePrice { .. } => "non-positive-price",
            Error::Degenerate(_) => "degenerate-sample",
            Error::Config(_) => "invalid-config",
            Error::Unknown { .. } => "unknown-name",
            Error::Csv(_) => "csv",
            Error::Json(_) => "json",
            Error::Io(_) => "io",
        }
    }
}
