use std::fmt;

use crate::solvers::SolveResult;

/// A single invariant violation found while validating raw instance data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    NoTasks,
    NoVoters,
    NonPositiveLength {
        task: usize,
        length: i64,
    },
    WrongPreferenceLength {
        voter: usize,
        expected: usize,
        found: usize,
    },
    TaskOutOfRange {
        voter: usize,
        task: u32,
    },
    DuplicateTask {
        voter: usize,
        task: u32,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NoTasks => write!(f, "instance has no tasks"),
            Violation::NoVoters => write!(f, "instance has no voters"),
            Violation::NonPositiveLength { task, length } => {
                write!(f, "task {task} has non-positive length {length}")
            }
            Violation::WrongPreferenceLength {
                voter,
                expected,
                found,
            } => write!(
                f,
                "preference of voter {voter} lists {found} tasks, expected {expected}"
            ),
            Violation::TaskOutOfRange { voter, task } => {
                write!(f, "preference of voter {voter} names unknown task {task}")
            }
            Violation::DuplicateTask { voter, task } => {
                write!(f, "preference of voter {voter} repeats task {task}")
            }
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid instance: {}", join(.0))]
    InvalidInstance(Vec<Violation>),

    #[error("invalid schedule: {0}")]
    InvalidSchedule(String),

    #[error("size mismatch: expected {expected}, found {found}")]
    SizeMismatch { expected: usize, found: usize },

    #[error("arithmetic overflow while computing {0}")]
    Overflow(&'static str),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("instance has {n} tasks, brute force is capped at {cap}")]
    TooLarge { n: usize, cap: usize },

    #[error("node budget of {budget} exhausted; best incumbent is not proven optimal")]
    BudgetExceeded {
        budget: u64,
        incumbent: Option<Box<SolveResult>>,
    },

    #[error("invalid 3-Partition data: {0}")]
    InvalidPartition(String),

    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("unsupported header {found:?}, expected {expected:?}")]
    Version { expected: String, found: String },
}

fn join(violations: &[Violation]) -> String {
    violations
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}

impl Error {
    /// Resource errors (overflow, exhausted budgets) as opposed to bad input.
    pub fn is_resource(&self) -> bool {
        matches!(self, Error::Overflow(_) | Error::BudgetExceeded { .. })
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
