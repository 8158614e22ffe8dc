use crate::config::ConfigClause;
use crate::launchpad::SaleStatus;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Errors signaled by the launchpad functions. Nothing in this crate panics on
/// bad input; every rejected call maps to one of these.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    /// A documented precondition of the operation does not hold.
    #[error("precondition violated: {0}")]
    Precondition(&'static str),

    /// An exact result does not fit the 128-bit amount range.
    #[error("arithmetic overflow")]
    Overflow,

    /// The action is not permitted in the current sale status.
    #[error("{action} not permitted while sale is {status}")]
    InvalidStatus {
        action: &'static str,
        status: SaleStatus,
    },

    /// The embedded configuration is not valid.
    #[error("invalid configuration: {}", clause_names(.0))]
    InvalidConfig(Vec<ConfigClause>),
}

impl Error {
    pub fn is_precondition(&self) -> bool {
        matches!(self, Error::Precondition(_))
    }
}

fn clause_names(clauses: &[ConfigClause]) -> String {
    clauses
        .iter()
        .map(|c| c.name())
        .collect::<Vec<_>>()
        .join(", ")
}
