use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A physical parameter is outside its domain. `field` is the JSON key.
    #[error("invalid parameter `{field}`: {reason}")]
    Param { field: &'static str, reason: String },

    /// A closed form hit a vanishing denominator such as `omega - e0`.
    #[error("singular closed form: {0}")]
    Singular(String),

    /// The requested state needs photon numbers outside the truncation.
    #[error("truncation headroom: {0}")]
    Headroom(String),

    #[error("ambiguous dressed-state match: {0}")]
    Ambiguous(String),

    #[error("eigensolver diagnostics: {0}")]
    Solver(String),

    #[error("state is not normalized (norm^2 = {0})")]
    NotNormalized(f64),

    #[error("invalid argument: {0}")]
    Argument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
