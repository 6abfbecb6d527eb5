use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed or inconsistent input data.
    #[error("input error: {0}")]
    Input(String),

    #[error("unknown object `{0}`")]
    UnknownObject(String),

    #[error("unknown morphism `{0}`")]
    UnknownMorphism(String),

    #[error("dimension cap mismatch: {0}")]
    CapMismatch(String),

    #[error("base category mismatch: {0}")]
    BaseMismatch(String),

    #[error("degree {degree} out of range (available up to {available})")]
    DegreeOutOfRange { degree: usize, available: usize },

    /// A structural law failed on data that was supposed to satisfy it.
    #[error("validation failed: {0}")]
    Validation(String),

    /// An internal consistency check failed; this indicates a bug.
    #[error("internal invariant breached: {0}")]
    Invariant(String),
}

impl Error {
    pub fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub fn validation(msg: impl std::fmt::Display) -> Self {
        Error::Validation(msg.to_string())
    }

    pub fn invariant(msg: impl Into<String>) -> Self {
        Error::Invariant(msg.into())
    }

    /// Short machine-readable tag.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Input(_) => "input",
            Error::UnknownObject(_) => "unknown_object",
            Error::UnknownMorphism(_) => "unknown_morphism",
            Error::CapMismatch(_) => "cap_mismatch",
            Error::BaseMismatch(_) => "base_mismatch",
            Error::DegreeOutOfRange { .. } => "degree_out_of_range",
            Error::Validation(_) => "validation",
            Error::Invariant(_) => "invariant",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
