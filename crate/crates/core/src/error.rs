use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("cap exceeded: {0}")]
    CapExceeded(String),
    #[error("unsupported operation: {0}")]
    Unsupported(String),
    #[error("support enumeration exceeded {cap} entries for {labels}")]
    SupportOverflow { cap: usize, labels: String },
    #[error("register `{register}` released with leakage {leakage:e}")]
    Leakage { register: String, leakage: f64 },
    #[error("matrix is not unitary (deviation {0:e})")]
    NotUnitary(f64),
    #[error("cost factor {cost} exceeds budget {budget}")]
    BudgetExceeded { cost: u64, budget: u64 },
    #[error("malformed plan: {0}")]
    MalformedPlan(String),
}

pub type Result<T> = std::result::Result<T, Error>;
