//! Exact optimizers for the deviation objectives.
//!
//! Every solver returns the same [`SolveResult`] shape. Brute force, branch
//! and bound and the assignment solver all return the lexicographically
//! smallest optimal order; the two-voter rule returns the first voter's
//! preference, which is always optimal when there are exactly two voters.

mod assignment;
mod bnb;
mod brute;
mod costing;

use std::fmt;
use std::str::FromStr;

pub use assignment::{solve_assignment, Hungarian};
pub use bnb::{solve_bnb, solve_bnb_with};
pub use brute::{solve_brute, solve_brute_with};

use crate::error::{Error, Result};
use crate::metrics::{evaluate, Objective};
use crate::model::{Instance, Schedule};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Brute,
    Bnb,
    Assignment,
    TwoVoter,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Brute => "brute",
            Method::Bnb => "bnb",
            Method::Assignment => "assignment",
            Method::TwoVoter => "two_voter",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Solver selection, including the automatic choice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MethodChoice {
    #[default]
    Auto,
    Fixed(Method),
}

impl FromStr for MethodChoice {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Ok(match s {
            "auto" => MethodChoice::Auto,
            "brute" => MethodChoice::Fixed(Method::Brute),
            "bnb" => MethodChoice::Fixed(Method::Bnb),
            "assignment" => MethodChoice::Fixed(Method::Assignment),
            "two-voter" | "two_voter" => MethodChoice::Fixed(Method::TwoVoter),
            other => return Err(format!("unknown method {other:?}")),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveResult {
    pub schedule: Schedule,
    pub objective: i64,
    pub method: Method,
    /// Search nodes entered, for the search-based methods.
    pub nodes_explored: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolverConfig {
    /// Largest instance brute force accepts.
    pub brute_cap: usize,
    /// Maximum number of branch-and-bound nodes before giving up.
    pub node_budget: u64,
    /// Worker threads for brute force. Results do not depend on it.
    pub threads: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            brute_cap: 10,
            node_budget: 10_000_000,
            threads: 1,
        }
    }
}

/// Returns the first voter's preference. Only valid with exactly two voters.
pub fn solve_two_voter(inst: &Instance, objective: Objective) -> Result<SolveResult> {
    if inst.v() != 2 {
        return Err(Error::Precondition(format!(
            "two-voter rule needs exactly 2 voters, instance has {}",
            inst.v()
        )));
    }
    let schedule = inst.prefs()[0].clone();
    let objective = evaluate(inst, &schedule, objective)?.total;
    Ok(SolveResult {
        schedule,
        objective,
        method: Method::TwoVoter,
        nodes_explored: None,
    })
}

/// Picks the cheapest exact method whose preconditions hold.
pub fn auto_method(inst: &Instance, objective: Objective) -> Method {
    if inst.v() == 2 {
        Method::TwoVoter
    } else if inst.is_unit() && objective == Objective::Deviation {
        Method::Assignment
    } else {
        Method::Bnb
    }
}

pub fn solve(
    inst: &Instance,
    choice: MethodChoice,
    objective: Objective,
    config: &SolverConfig,
) -> Result<SolveResult> {
    let method = match choice {
        MethodChoice::Auto => auto_method(inst, objective),
        MethodChoice::Fixed(m) => m,
    };
    match method {
        Method::Brute => solve_brute_with(inst, objective, config),
        Method::Bnb => solve_bnb_with(inst, objective, config),
        Method::TwoVoter => solve_two_voter(inst, objective),
        Method::Assignment => {
            if objective == Objective::Weighted {
                return Err(Error::Precondition(
                    "the assignment solver only handles the unweighted objective; use bnb or brute"
                        .to_string(),
                ));
            }
            solve_assignment(inst)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_voter_examples() {
        let i = Instance::from_raw(vec![2, 1], vec![vec![1, 2], vec![2, 1]]).unwrap();
        let r = solve_two_voter(&i, Objective::Deviation).unwrap();
        assert_eq!(r.schedule, Schedule::from_ids(&[1, 2]).unwrap());
        assert_eq!(r.objective, 3);

        let same = Instance::from_raw(vec![2, 1, 4], vec![vec![3, 1, 2]; 2]).unwrap();
        assert_eq!(
            solve_two_voter(&same, Objective::Weighted)
                .unwrap()
                .objective,
            0
        );

        let three = Instance::from_raw(vec![1, 1], vec![vec![1, 2]; 3]).unwrap();
        assert!(matches!(
            solve_two_voter(&three, Objective::Deviation),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn auto_picks_by_preconditions() {
        let two = Instance::from_raw(vec![1, 1], vec![vec![1, 2], vec![2, 1]]).unwrap();
        assert_eq!(auto_method(&two, Objective::Deviation), Method::TwoVoter);
        let unit = Instance::from_raw(vec![1, 1], vec![vec![1, 2]; 3]).unwrap();
        assert_eq!(auto_method(&unit, Objective::Deviation), Method::Assignment);
        assert_eq!(auto_method(&unit, Objective::Weighted), Method::Bnb);
        let mixed = Instance::from_raw(vec![2, 1], vec![vec![1, 2]; 3]).unwrap();
        assert_eq!(auto_method(&mixed, Objective::Deviation), Method::Bnb);
    }

    #[test]
    fn method_names_parse() {
        assert_eq!("auto".parse::<MethodChoice>(), Ok(MethodChoice::Auto));
        assert_eq!(
            "two-voter".parse::<MethodChoice>(),
            Ok(MethodChoice::Fixed(Method::TwoVoter))
        );
        assert!("greedy".parse::<MethodChoice>().is_err());
    }
}
