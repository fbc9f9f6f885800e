use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An input violates an operation's precondition.
    #[error("domain error: {0}")]
    Domain(String),

    /// The requested work exceeds the configured budget.
    #[error("capacity exceeded: {what} needs {needed}, budget is {budget}")]
    Capacity {
        what: &'static str,
        needed: String,
        budget: String,
    },

    /// The answer depends on Fermat numbers whose primality status is not settled.
    #[error("unsettled: Fermat number F_{index} has unknown status (settled through index {max_settled_index})")]
    Unsettled {
        index: u64,
        max_settled_index: u64,
    },

    /// A structural guarantee failed on concrete data.
    #[error("contract violation: {0}")]
    Contract(String),

    #[error("invalid witness data at line {line}: {reason}")]
    Witness { line: usize, reason: String },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn capacity(
        what: &'static str,
        needed: impl ToString,
        budget: impl ToString,
    ) -> Self {
        Error::Capacity {
            what,
            needed: needed.to_string(),
            budget: budget.to_string(),
        }
    }
}
