use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("invalid system dimensions: {0}")]
    InvalidDims(String),
    #[error("invalid site set: {0}")]
    InvalidSites(String),
    #[error("generator {index} is not a phase-free product of pure X or Z powers")]
    NotGPrime { index: usize },
    #[error("generators {i} and {j} do not commute")]
    NonCommuting { i: usize, j: usize },
    #[error("operator is outside the supported domain: {0}")]
    Precondition(String),
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("invalid sector label: {0}")]
    InvalidSector(String),
    #[error("{what} exceeds cap ({size} > {cap})")]
    CapExceeded { what: &'static str, size: u128, cap: u128 },
    #[error("stabilized subspace is empty")]
    EmptySubspace,
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unknown catalog entry: {0}")]
    UnknownCatalog(String),
    #[error("rule does not fit the records: {0}")]
    RuleMismatch(String),
    #[error("protocol invalid: {0}")]
    InvalidProtocol(String),
}

impl Error {
    /// Short machine-readable tag.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DimensionMismatch(_) => "dimension_mismatch",
            Error::InvalidDims(_) => "invalid_dims",
            Error::InvalidSites(_) => "invalid_sites",
            Error::NotGPrime { .. } => "not_gprime",
            Error::NonCommuting { .. } => "non_commuting",
            Error::Precondition(_) => "precondition",
            Error::InvalidPartition(_) => "invalid_partition",
            Error::InvalidSector(_) => "invalid_sector",
            Error::CapExceeded { .. } => "cap_exceeded",
            Error::EmptySubspace => "empty_subspace",
            Error::Parse { .. } => "parse",
            Error::UnknownCatalog(_) => "unknown_catalog",
            Error::RuleMismatch(_) => "rule_mismatch",
            Error::InvalidProtocol(_) => "invalid_protocol",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
