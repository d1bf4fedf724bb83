//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by the library.
///
/// The split between variants mirrors how callers react: parse errors are
/// caused by malformed input text, everything else by data that violates an
/// operation contract or an enumeration guard.
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed group spec string (grammar `Z<d>(xZ<d>)*`).
    #[error("group spec parse error: {0}")]
    GroupParse(String),

    /// Malformed link, surface or presentation input.
    #[error("input parse error: {0}")]
    InputParse(String),

    /// Vector or matrix dimensions do not match.
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    /// Roles and labels are inconsistent (a surgery component with a label,
    /// a Wilson component without one, and so on).
    #[error("label/role mismatch: {0}")]
    Labels(String),

    /// An operation was called outside its contract.
    #[error("contract violation: {0}")]
    Contract(String),

    /// An index into the components of a link is out of range.
    #[error("index out of range: {0}")]
    Index(String),

    /// A brute-force or pairing-matrix enumeration would exceed its guard.
    #[error("enumeration guard exceeded: {0}")]
    Guard(String),

    /// A linear system that should be solvable is not (e.g. pairing values
    /// not in the row space of the pairing matrix).
    #[error("inconsistent data: {0}")]
    Inconsistent(String),

    /// A pairing closure failed while evaluating a matrix entry.
    #[error("pairing closure failed at generator pair ({row}, {col}): {source}")]
    Closure {
        row: usize,
        col: usize,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    /// True for errors caused by unparseable input text rather than by
    /// well-formed data violating a contract. CLI front ends map these to
    /// usage errors.
    pub fn is_parse_error(&self) -> bool {
        matches!(self, Error::GroupParse(_) | Error::InputParse(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
