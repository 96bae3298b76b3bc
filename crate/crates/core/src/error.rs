use thiserror::Error;

/// Errors raised by every fallible operation in the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// A value fell outside the domain of a representation or formula.
    #[error("domain error at index {index}: {what} (value {value})")]
    Domain {
        index: usize,
        value: f64,
        what: &'static str,
    },

    /// A representation-scale value cannot be mapped back to a density value.
    #[error("range error: {what} (value {value})")]
    Range { value: f64, what: &'static str },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("support mismatch: {0}")]
    SupportMismatch(String),

    #[error("density has zero mass")]
    ZeroMass,

    #[error("non-finite mass ({0})")]
    NonFiniteMass(f64),

    /// Arithmetic produced an infinity or NaN where a finite value is required.
    #[error("overflow: {0}")]
    Overflow(String),

    /// A representation-scale search left its bracket.
    #[error("bracket violation: {0}")]
    BracketViolation(String),

    /// A pointwise failure while evaluating a path or family at a given beta.
    #[error("at beta = {beta}: {source}")]
    AtBeta {
        beta: f64,
        #[source]
        source: Box<Error>,
    },

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    pub(crate) fn at_beta(self, beta: f64) -> Self {
        Error::AtBeta {
            beta,
            source: Box::new(self),
        }
    }

    /// Attach a support index to a pointwise domain error.
    pub(crate) fn at_index(self, i: usize) -> Self {
        match self {
            Error::Domain { value, what, .. } => Error::Domain {
                index: i,
                value,
                what,
            },
            other => other,
        }
    }

    /// True for errors caused by numerics or domains rather than configuration.
    pub fn is_numeric(&self) -> bool {
        match self {
            Error::Domain { .. }
            | Error::Range { .. }
            | Error::ZeroMass
            | Error::NonFiniteMass(_)
            | Error::Overflow(_)
            | Error::BracketViolation(_)
            | Error::SupportMismatch(_) => true,
            Error::AtBeta { source, .. } => source.is_numeric(),
            _ => false,
        }
    }
}

pub type Result<T> = core::result::Result<T, Error>;
