//! Consensus scheduling under the total-deviation rule.
//!
//! Voters submit preferred orders of tasks with lengths; the deviation of a
//! schedule sums, over tasks and voters, how far each task completes from
//! its completion time in the voter's order.

pub mod cli;
pub mod error;
pub mod instances;
pub mod metrics;
pub mod model;
pub mod reductions;
pub mod solvers;

pub use error::{Error, Result, Violation};
pub use metrics::{deviation, weighted_deviation, Objective};
pub use model::{Instance, Schedule, TaskId};
pub use solvers::{solve, Method, MethodChoice, SolveResult, SolverConfig};
