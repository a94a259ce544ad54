use std::fmt;

/// Errors reported by the combinatorial engines.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Malformed or out-of-range textual input.
    Parse(String),
    /// An operation was applied outside its domain (e.g. a dyadic angle where
    /// a periodic one is required).
    Domain(String),
    /// A parameter outside the supported catalog of Hubbard-tree data.
    CatalogMiss(String),
    /// A computation would exceed the configured memory or work budget.
    Resource(String),
    /// A pullback branch choice could not be resolved.
    AmbiguousBranch(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Parse(m) => write!(f, "parse error: {m}"),
            Error::Domain(m) => write!(f, "domain error: {m}"),
            Error::CatalogMiss(m) => write!(f, "catalog miss: {m}"),
            Error::Resource(m) => write!(f, "resource limit: {m}"),
            Error::AmbiguousBranch(m) => write!(f, "ambiguous branch: {m}"),
        }
    }
}

impl std::error::Error for Error {}
