//! Depth-first branch and bound over "which task runs next".
//!
//! A node fixes a prefix of the schedule. Its bound is the exact cost of the
//! prefix plus, for every unscheduled task, the cheapest cost that task can
//! reach when completing no earlier than `makespan + p_i`. Each per-task
//! cost is convex in the completion time, so that minimum is the median
//! minimum when the median interval is still reachable and the cost at the
//! earliest completion otherwise.
//!
//! The search runs twice. The first pass branches on tasks sorted by
//! `(median_lo, id)` and prunes any node whose bound reaches the incumbent,
//! which yields the optimal value. The second pass branches in id order and
//! keeps only nodes whose bound does not exceed that value; its first leaf is
//! the lexicographically smallest optimal order.

use super::costing::Costing;
use super::{Method, SolveResult, SolverConfig};
use crate::error::{Error, Result};
use crate::metrics::Objective;
use crate::model::{Instance, Schedule};

pub fn solve_bnb(inst: &Instance, objective: Objective) -> Result<SolveResult> {
    solve_bnb_with(inst, objective, &SolverConfig::default())
}

pub fn solve_bnb_with(
    inst: &Instance,
    objective: Objective,
    config: &SolverConfig,
) -> Result<SolveResult> {
    let costing = Costing::new(inst, objective)?;
    let n = costing.n();
    let mut by_median: Vec<usize> = (0..n).collect();
    by_median.sort_by_key(|&i| (costing.median_lo[i], i));

    let mut search = Search {
        costing: &costing,
        scheduled: vec![false; n],
        prefix: Vec::with_capacity(n),
        nodes: 0,
        budget: config.node_budget,
    };

    let mut best = None;
    if search.improve(&by_median, 0, 0, &mut best).is_err() {
        return Err(search.exhausted(best));
    }
    let (optimum, first_found) = best.expect("the first descent always reaches a leaf");

    let id_order: Vec<usize> = (0..n).collect();
    let order = match search.first_at(&id_order, 0, 0, optimum) {
        Ok(true) => search.prefix.clone(),
        Ok(false) => unreachable!("the optimum is attained by some leaf"),
        Err(Exhausted) => return Err(search.exhausted(Some((optimum, first_found)))),
    };

    Ok(SolveResult {
        schedule: Schedule::from_indices_unchecked(&order),
        objective: optimum,
        method: Method::Bnb,
        nodes_explored: Some(search.nodes),
    })
}

struct Exhausted;

struct Search<'a> {
    costing: &'a Costing,
    scheduled: Vec<bool>,
    prefix: Vec<usize>,
    nodes: u64,
    budget: u64,
}

impl Search<'_> {
    fn enter(&mut self) -> Result<(), Exhausted> {
        self.nodes += 1;
        if self.nodes > self.budget {
            Err(Exhausted)
        } else {
            Ok(())
        }
    }

    /// Bound of the child that appends `task` to the current prefix.
    fn child(&self, task: usize, makespan: i64, cost: i64) -> (i64, i64, i64) {
        let c = &self.costing;
        let end = makespan + c.lengths[task];
        let child_cost = cost + c.cost_at(task, end);
        let rest: i64 = (0..c.n())
            .filter(|&j| j != task && !self.scheduled[j])
            .map(|j| c.min_cost_from(j, end + c.lengths[j]))
            .sum();
        (end, child_cost, child_cost + rest)
    }

    fn improve(
        &mut self,
        order: &[usize],
        makespan: i64,
        cost: i64,
        best: &mut Option<(i64, Vec<usize>)>,
    ) -> Result<(), Exhausted> {
        if self.prefix.len() == self.costing.n() {
            if best.as_ref().is_none_or(|b| cost < b.0) {
                *best = Some((cost, self.prefix.clone()));
            }
            return Ok(());
        }
        for &task in order {
            if self.scheduled[task] {
                continue;
            }
            let (end, child_cost, bound) = self.child(task, makespan, cost);
            if best.as_ref().is_some_and(|b| bound >= b.0) {
                continue;
            }
            self.enter()?;
            self.push(task);
            let r = self.improve(order, end, child_cost, best);
            self.pop(task);
            r?;
        }
        Ok(())
    }

    /// Leaves the first (in `order`) leaf of cost `target` in `self.prefix`.
    fn first_at(
        &mut self,
        order: &[usize],
        makespan: i64,
        cost: i64,
        target: i64,
    ) -> Result<bool, Exhausted> {
        if self.prefix.len() == self.costing.n() {
            return Ok(cost == target);
        }
        for &task in order {
            if self.scheduled[task] {
                continue;
            }
            let (end, child_cost, bound) = self.child(task, makespan, cost);
            if bound > target {
                continue;
            }
            self.enter()?;
            self.push(task);
            if self.first_at(order, end, child_cost, target)? {
                return Ok(true);
            }
            self.pop(task);
        }
        Ok(false)
    }

    fn push(&mut self, task: usize) {
        self.scheduled[task] = true;
        self.prefix.push(task);
    }

    fn pop(&mut self, task: usize) {
        self.scheduled[task] = false;
        self.prefix.pop();
    }

    fn exhausted(&self, best: Option<(i64, Vec<usize>)>) -> Error {
        Error::BudgetExceeded {
            budget: self.budget,
            incumbent: best.map(|(objective, order)| {
                Box::new(SolveResult {
                    schedule: Schedule::from_indices_unchecked(&order),
                    objective,
                    method: Method::Bnb,
                    nodes_explored: Some(self.nodes),
                })
            }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::{deviation, median_info};
    use crate::model::{completion_times, TaskId};
    use crate::solvers::solve_brute;

    #[test]
    fn single_voter_is_found_by_the_first_descent() {
        let i = Instance::from_raw(vec![2, 5, 1, 3, 1, 4], vec![vec![3, 6, 1, 5, 2, 4]]).unwrap();
        let r = solve_bnb(&i, Objective::Deviation).unwrap();
        assert_eq!(r.objective, 0);
        assert_eq!(r.schedule, i.prefs()[0]);
        // n nodes for the descent, at most n more for the tie-breaking pass.
        assert!(r.nodes_explored.unwrap() <= 2 * i.n() as u64);
    }

    #[test]
    fn budget_exhaustion_reports_incumbent() {
        let i = Instance::from_raw(
            vec![1, 2, 3, 1, 2, 3, 1],
            vec![
                vec![1, 2, 3, 4, 5, 6, 7],
                vec![7, 6, 5, 4, 3, 2, 1],
                vec![4, 1, 7, 2, 6, 3, 5],
            ],
        )
        .unwrap();
        let cfg = SolverConfig {
            node_budget: 10,
            ..SolverConfig::default()
        };
        match solve_bnb_with(&i, Objective::Deviation, &cfg) {
            Err(Error::BudgetExceeded { budget, incumbent }) => {
                assert_eq!(budget, 10);
                let inc = incumbent.expect("descent reaches a leaf within 10 nodes");
                assert_eq!(deviation(&i, &inc.schedule).unwrap().total, inc.objective);
            }
            other => panic!("expected budget error, got {other:?}"),
        }
    }

    #[test]
    fn matches_brute_on_fixed_instance() {
        let i = Instance::from_raw(
            vec![3, 1, 2, 2, 1],
            vec![
                vec![1, 2, 3, 4, 5],
                vec![5, 3, 1, 2, 4],
                vec![2, 4, 5, 1, 3],
            ],
        )
        .unwrap();
        for obj in [Objective::Deviation, Objective::Weighted] {
            assert_eq!(
                solve_bnb(&i, obj).unwrap().schedule,
                solve_brute(&i, obj).unwrap().schedule
            );
        }
    }

    /// Every completion of a prefix costs at least the clipped bound.
    #[test]
    fn clipped_bound_is_admissible() {
        let i = Instance::from_raw(
            vec![2, 1, 3, 1, 2],
            vec![
                vec![1, 2, 3, 4, 5],
                vec![5, 4, 3, 2, 1],
                vec![3, 5, 1, 4, 2],
            ],
        )
        .unwrap();
        let infos: Vec<_> = (1..=5)
            .map(|t| median_info(&i, TaskId::new(t).unwrap()).unwrap())
            .collect();
        // Prefix: tasks 2 then 4 (makespan 2).
        let makespan = 2;
        let mut rest = vec![1u32, 3, 5];
        let bound: i64 = rest
            .iter()
            .map(|&t| {
                infos[t as usize - 1].min_deviation_from(makespan + i.lengths()[t as usize - 1])
            })
            .sum();
        rest.sort();
        loop {
            let mut order = vec![2, 4];
            order.extend(&rest);
            let s = Schedule::from_ids(&order).unwrap();
            let c = completion_times(&i, &s).unwrap();
            let tail: i64 = rest
                .iter()
                .map(|&t| infos[t as usize - 1].deviation_at(c[t as usize - 1]))
                .sum();
            assert!(tail >= bound, "order {order:?}: {tail} < {bound}");
            let mut idx: Vec<usize> = rest.iter().map(|&x| x as usize).collect();
            if !super::super::brute::next_permutation(&mut idx) {
                break;
            }
            rest = idx.into_iter().map(|x| x as u32).collect();
        }
    }
}
