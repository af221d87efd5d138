use thiserror::Error;

use crate::search::Solution;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("cannot-factor: {value} has a cofactor beyond the trial-division bound {bound}")]
    CannotFactor { value: String, bound: u64 },
    #[error("field mismatch: Q(sqrt {left}) vs Q(sqrt {right})")]
    FieldMismatch { left: String, right: String },
    #[error("division by zero")]
    DivisionByZero,
    #[error("not-quadratic-irrational: input is rational")]
    NotQuadraticIrrational,
    #[error("invalid input: {0}")]
    InvalidInput(String),
    /// An interval comparison could not be decided at the available precision.
    #[error("indeterminate: {0}")]
    Indeterminate(String),
    #[error("pw-precondition: {0}")]
    PwPrecondition(String),
    #[error("g2l-domain: |x - 1| must be at most 1/2")]
    G2lDomain,
    #[error("no convergence after {0} iterations")]
    NonConvergence(usize),
    #[error("inapplicable: {0}")]
    Inapplicable(String),
    #[error("malformed path: {0}")]
    MalformedPath(String),
    #[error("N0 search exceeded cap {0}")]
    N0Cap(u64),
    #[error("search budget of {budget} tuples exceeded; completed N1 < {next_n1}")]
    BudgetExceeded {
        budget: u64,
        next_n1: usize,
        partial: Vec<Solution>,
    },
}

impl Error {
    /// Short machine-readable code, used by the CLI error object.
    pub fn code(&self) -> &'static str {
        match self {
            Error::CannotFactor { .. } => "cannot-factor",
            Error::FieldMismatch { .. } => "field-mismatch",
            Error::DivisionByZero => "division-by-zero",
            Error::NotQuadraticIrrational => "not-quadratic-irrational",
            Error::InvalidInput(_) => "invalid-input",
            Error::Indeterminate(_) => "indeterminate",
            Error::PwPrecondition(_) => "pw-precondition",
            Error::G2lDomain => "g2l-domain",
            Error::NonConvergence(_) => "non-convergence",
            Error::Inapplicable(_) => "inapplicable",
            Error::MalformedPath(_) => "malformed-path",
            Error::N0Cap(_) => "n0-cap",
            Error::BudgetExceeded { .. } => "budget-exceeded",
        }
    }
}
