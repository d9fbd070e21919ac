use thiserror::Error;

/// Errors raised by the model, estimators, simulator and fitter.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid channel parameters: {0}")]
    InvalidParams(String),

    #[error("degenerate model: {0}")]
    DegenerateModel(String),

    #[error("degenerate state: {0}")]
    DegenerateState(String),

    #[error("no solution: {0}")]
    NoSolution(String),

    #[error("empty coincidence table{}", .0.map(|i| format!(" (setting {i})")).unwrap_or_default())]
    EmptyTable(Option<usize>),

    #[error("insufficient statistics: table {table} ({label}) has {count} coincidences")]
    InsufficientStatistics { table: usize, label: &'static str, count: u64 },

    #[error("resource limit: {requested} trial-bins requested, budget is {budget}")]
    ResourceLimit { requested: u128, budget: u64 },

    #[error("fit did not converge after {0} iterations")]
    Convergence(usize),

    #[error("parameter is not identifiable from the data: {0}")]
    Unidentifiable(String),

    #[error("not enough degrees of freedom: {points} points for {params} parameters")]
    DegreesOfFreedom { points: usize, params: usize },

    #[error("line {line}: {message}")]
    Parse { line: u64, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
