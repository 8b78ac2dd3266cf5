use thiserror::Error;

/// Errors raised by the choreography layer.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChorError {
    #[error("procedure X{0} is called but not in the procedure universe")]
    UnknownProcedure(String),
    #[error("runtime call to X{0} has an empty pending list")]
    EmptyPending(String),
    #[error("no transition labelled {0} is enabled")]
    NoSuchTransition(String),
    #[error("exploration exceeded the budget of {0} configurations")]
    BudgetExceeded(usize),
}

/// Errors raised while building or evaluating partial recursive functions.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PrfError {
    #[error("projection index {index} out of range for arity {arity}")]
    ProjectionOutOfRange { index: usize, arity: usize },
    #[error("composition expects {expected} inner functions, got {found}")]
    CompositionWidth { expected: usize, found: usize },
    #[error("inner function {position} of a composition has arity {found}, expected {expected}")]
    CompositionArity {
        position: usize,
        expected: usize,
        found: usize,
    },
    #[error("recursion step has arity {found}, expected {expected}")]
    RecursionArity { expected: usize, found: usize },
    #[error("minimisation needs a function of positive arity")]
    MinimizationArity,
    #[error("function of arity {expected} applied to {found} arguments")]
    ArityMismatch { expected: usize, found: usize },
}

/// Errors raised by the compiler from partial recursive functions.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EncodingError {
    #[error("output process {0} is also an input process")]
    OutputAmongInputs(u64),
    #[error("input process {0} is listed twice")]
    DuplicateInput(u64),
    #[error("expected {expected} input processes, got {found}")]
    InputCount { expected: usize, found: usize },
    #[error("procedure X{name} is outside the block [X{start}, X{end})")]
    OutsideBlock { name: u64, start: u64, end: u64 },
    #[error("process {0} cannot communicate with itself")]
    SelfCommunication(u64),
}
