use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Operands live on different groups, or vectors/matrices disagree in shape.
    #[error("input mismatch: {0}")]
    InputMismatch(String),

    /// An argument violates a documented precondition.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("unsupported quotient: {0}")]
    UnsupportedQuotient(String),

    /// The question is outside what the procedure can answer for this input.
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// The zero function was passed where a non-zero one is required.
    #[error("degenerate input: {0}")]
    Degenerate(String),

    /// A configured capacity (expansion length or root-of-unity enumeration) is too small.
    /// This is never a "no" answer.
    #[error("capacity exceeded: {what} needs {needed}, limit is {limit}")]
    CapacityExceeded {
        what: String,
        needed: u64,
        limit: u64,
    },

    /// A backtracking search ran out of nodes before reaching a conclusion.
    #[error("search budget exhausted after {nodes} nodes")]
    BudgetExceeded { nodes: u64 },

    /// A checked precondition of a verifier does not hold.
    #[error("precondition failed: {0}")]
    Precondition(String),
}
