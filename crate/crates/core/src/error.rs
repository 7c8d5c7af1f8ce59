use thiserror::Error;

/// Errors raised by the library.
///
/// Variants fall in three groups: validation failures for inputs, guard
/// violations where an exhaustive step would exceed a configured limit, and
/// solver precondition failures.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("agent index {index} is out of range for {n} agents")]
    AgentOutOfRange { index: usize, n: usize },

    #[error("order relation contains a cycle through agents {cycle:?}")]
    CycleDetected { cycle: Vec<usize> },

    #[error("pair ({a}, {b}) is supplied in both directions")]
    DuplicateContradiction { a: usize, b: usize },

    #[error("tuple sets have different sizes ({left} vs {right})")]
    SizeMismatch { left: usize, right: usize },

    #[error("agent {agent} appears in its own tuple set")]
    SelfInclusion { agent: usize },

    #[error("tuple set is not acceptable to agent {agent}")]
    UnacceptableSet { agent: usize },

    #[error("compared tuple sets are identical")]
    IdenticalSets,

    #[error("fewer than d-1 agents remain outside the excluded set")]
    InsufficientAgents,

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("invalid matching: {0}")]
    InvalidMatching(String),

    #[error("{what}: {count} exceeds the configured limit {limit}")]
    TooLarge { what: &'static str, count: u128, limit: u128 },

    #[error("window of {window} agents exceeds the enumeration cap {cap}")]
    WindowTooLarge { window: usize, cap: usize },

    #[error("master poset is not a strict order (kappa = {kappa})")]
    NotStrictOrder { kappa: usize },

    #[error("solver requires complete preferences")]
    Incomplete,

    #[error("solver requires a master poset preference source")]
    UnsupportedSource,

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("greedy step {step}: best candidate realised by {multiplicity} agents, need {required}")]
    CertificateFailure {
        step: usize,
        multiplicity: usize,
        required: usize,
    },

    #[error("no deletion set of size at most {budget} yields a strict-order profile")]
    BudgetExceeded { budget: usize },

    #[error("dynamic program witness is blocked by {blocking:?}")]
    WitnessRejected { blocking: Vec<usize> },

    #[error("malformed formula: {0}")]
    MalformedFormula(String),

    #[error("invalid assignment: {0}")]
    InvalidAssignment(String),

    #[error("matching does not have the structure of the reduction: {0}")]
    NotWellFormed(String),

    #[error("malformed SMTI instance: {0}")]
    MalformedSmti(String),

    #[error("SMTI matching is not perfect: {0}")]
    NotPerfect(String),

    #[error("SMTI matching is blocked by pair ({man}, {woman})")]
    NotStable { man: usize, woman: usize },

    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },
}

impl Error {
    /// True for errors that signal an exceeded enumeration guard.
    pub fn is_guard(&self) -> bool {
        matches!(self, Error::TooLarge { .. } | Error::WindowTooLarge { .. })
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInstance(msg.into())
    }

    pub(crate) fn parse(location: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse {
            location: location.into(),
            message: message.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
