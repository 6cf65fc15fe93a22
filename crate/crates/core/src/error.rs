use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("characteristic {0} is not a prime below 2^31")]
    NonPrimeCharacteristic(u64),

    #[error("relation on line {line} is not homogeneous")]
    Inhomogeneous { line: usize },

    #[error("line {line}: {message}")]
    Invalid { line: usize, message: String },

    #[error("line {line}: `{word}` is not a path in the quiver")]
    NotAPath { line: usize, word: String },

    #[error("degree {degree} lies outside the certified window (bound {bound})")]
    OutsideWindow { degree: usize, bound: usize },

    #[error("homological degree {needed} lies beyond the window length {length}")]
    BeyondLength { needed: usize, length: usize },

    #[error("resource limit exceeded: {what} (cap {cap})")]
    ResourceLimit { what: String, cap: usize },

    #[error("modules do not share an ambient free module")]
    AmbientMismatch,

    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(String, String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("matrix entry ({row}, {column}) violates the degree law")]
    DegreeLaw { row: usize, column: usize },

    #[error("F_{step} is not admissible: row {row} of the coupling block has no witness in degree {degree}")]
    NotAdmissible { step: usize, row: usize, degree: usize },

    #[error("no admissible block partition: {0}")]
    NoPartition(String),

    #[error("internal consistency failure: {0}")]
    Internal(String),
}

impl Error {
    /// Stable short code used by the command-line front end.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Syntax { .. } => "E-SYNTAX",
            Error::NonPrimeCharacteristic(_) => "E-FIELD",
            Error::Inhomogeneous { .. } => "E-INHOMOGENEOUS",
            Error::Invalid { .. } => "E-INVALID",
            Error::NotAPath { .. } => "E-PATH",
            Error::OutsideWindow { .. } | Error::BeyondLength { .. } => "E-WINDOW",
            Error::ResourceLimit { .. } => "E-RESOURCE",
            Error::AmbientMismatch => "E-AMBIENT",
            Error::FieldMismatch(..) => "E-FIELD",
            Error::Precondition(_) => "E-PRECONDITION",
            Error::DegreeLaw { .. } => "E-DEGREE-LAW",
            Error::NotAdmissible { .. } => "E-ADMISSIBLE",
            Error::NoPartition(_) => "E-PARTITION",
            Error::Internal(_) => "E-INTERNAL",
        }
    }

    /// Errors that are a negative answer about valid input rather than a failure.
    pub fn is_negative_verdict(&self) -> bool {
        matches!(self, Error::NotAdmissible { .. } | Error::NoPartition(_))
    }

    /// Window and resource failures are reported differently from input errors.
    pub fn is_window_or_resource(&self) -> bool {
        matches!(
            self,
            Error::OutsideWindow { .. } | Error::BeyondLength { .. } | Error::ResourceLimit { .. }
        )
    }

    pub(crate) fn internal(msg: impl Into<String>) -> Self {
        Error::Internal(msg.into())
    }
}
