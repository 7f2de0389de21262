//! Exhaustive search over all `n!` orders; the reference oracle for the
//! other solvers.

use rayon::prelude::*;

use super::costing::Costing;
use super::{Method, SolveResult, SolverConfig};
use crate::error::{Error, Result};
use crate::metrics::Objective;
use crate::model::{Instance, Schedule};

pub fn solve_brute(inst: &Instance, objective: Objective) -> Result<SolveResult> {
    solve_brute_with(inst, objective, &SolverConfig::default())
}

pub fn solve_brute_with(
    inst: &Instance,
    objective: Objective,
    config: &SolverConfig,
) -> Result<SolveResult> {
    let n = inst.n();
    if n > config.brute_cap {
        return Err(Error::TooLarge {
            n,
            cap: config.brute_cap,
        });
    }
    let costing = Costing::new(inst, objective)?;

    // One subtree per leading task; each is enumerated in lexicographic order
    // and the subtrees are reduced in leading-task order, so ties resolve to
    // the lexicographically smallest order whatever the thread count.
    let subtree = |first: usize| best_with_prefix(&costing, first);
    let best = if config.threads > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(config.threads)
            .build()
            .map_err(|e| Error::Precondition(format!("thread pool: {e}")))?;
        pool.install(|| (0..n).into_par_iter().map(subtree).collect::<Vec<_>>())
    } else {
        (0..n).map(subtree).collect()
    }
    .into_iter()
    .reduce(|a, b| if b.0 < a.0 { b } else { a })
    .expect("instances have at least one task");

    Ok(SolveResult {
        schedule: Schedule::from_indices_unchecked(&best.1),
        objective: best.0,
        method: Method::Brute,
        nodes_explored: Some(factorial(n)),
    })
}

fn best_with_prefix(costing: &Costing, first: usize) -> (i64, Vec<usize>) {
    let mut order: Vec<usize> = std::iter::once(first)
        .chain((0..costing.n()).filter(|&i| i != first))
        .collect();
    let mut best = (score(costing, &order), order.clone());
    while next_permutation(&mut order[1..]) {
        let s = score(costing, &order);
        if s < best.0 {
            best = (s, order.clone());
        }
    }
    best
}

fn score(costing: &Costing, order: &[usize]) -> i64 {
    let mut t = 0;
    let mut total = 0;
    for &i in order {
        t += costing.lengths[i];
        total += costing.cost_at(i, t);
    }
    total
}

/// Advances `xs` to the next permutation in lexicographic order.
pub(crate) fn next_permutation(xs: &mut [usize]) -> bool {
    let Some(i) = xs.windows(2).rposition(|w| w[0] < w[1]) else {
        return false;
    };
    let j = xs
        .iter()
        .rposition(|&x| x > xs[i])
        .expect("pivot has a successor");
    xs.swap(i, j);
    xs[i + 1..].reverse();
    true
}

fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}
