use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("{what}: size {got} exceeds cap {cap}")]
    CapExceeded {
        what: &'static str,
        got: usize,
        cap: usize,
    },

    #[error("knapsack table needs {cells} cells, guard is {limit}")]
    TableTooLarge { cells: u128, limit: u128 },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("invalid schedule: {0}")]
    InvalidSchedule(String),

    #[error("job {job} has maximum component size {size} < 1; online mode requires every job to have size at least 1")]
    NotOnline { job: usize, size: String },

    #[error("{solver} does not support the {model} model")]
    Unsupported {
        solver: &'static str,
        model: &'static str,
    },

    #[error(
        "round {round}: schedule of the selected set has makespan {makespan} which exceeds the interval length {limit}"
    )]
    IntervalOverflow {
        round: i64,
        makespan: String,
        limit: String,
    },

    #[error("online run did not finish within {0} rounds")]
    NoProgress(usize),

    #[error("lp: {0}")]
    Lp(String),
}
