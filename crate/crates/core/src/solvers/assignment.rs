//! Unit-length instances as a task-to-slot assignment problem.
//!
//! With unit tasks the completion time of the task in slot `t` is `t`, so the
//! objective separates into `cost(i, t) = sum_k |t - d_i^k|` and the optimum
//! is a minimum-cost perfect matching.

use super::costing::Costing;
use super::{Method, SolveResult};
use crate::error::{Error, Result};
use crate::metrics::Objective;
use crate::model::{Instance, Schedule};

pub fn solve_assignment(inst: &Instance) -> Result<SolveResult> {
    if !inst.is_unit() {
        return Err(Error::Precondition(
            "the assignment solver needs unit task lengths; use bnb or brute".to_string(),
        ));
    }
    // Also proves the matrix entries and their sums fit in i64.
    let costing = Costing::new(inst, Objective::Deviation)?;
    let n = costing.n();
    let costs: Vec<Vec<i64>> = (0..n)
        .map(|i| (1..=n as i64).map(|t| costing.cost_at(i, t)).collect())
        .collect();

    let solution = Hungarian::solve(&costs);
    let slot_to_task = solution.lexicographic_optimum(&costs);
    Ok(SolveResult {
        schedule: Schedule::from_indices_unchecked(&slot_to_task),
        objective: solution.total,
        method: Method::Assignment,
        nodes_explored: None,
    })
}

/// Minimum-cost perfect matching on a square matrix (rows to columns),
/// shortest augmenting paths with potentials, `O(n^3)`.
#[derive(Debug, Clone)]
pub struct Hungarian {
    pub total: i64,
    /// Column assigned to each row.
    pub row_to_col: Vec<usize>,
    /// Optimal dual values: `cost[r][c] >= row_potential[r] + col_potential[c]`.
    pub row_potential: Vec<i64>,
    pub col_potential: Vec<i64>,
}

impl Hungarian {
    pub fn solve(cost: &[Vec<i64>]) -> Self {
        let n = cost.len();
        assert!(
            cost.iter().all(|r| r.len() == n),
            "cost matrix must be square"
        );
        const INF: i64 = i64::MAX / 4;
        // 1-based internally; index 0 is the virtual root column.
        let mut u = vec![0i64; n + 1];
        let mut v = vec![0i64; n + 1];
        let mut col_row = vec![0usize; n + 1];
        let mut way = vec![0usize; n + 1];
        for row in 1..=n {
            col_row[0] = row;
            let mut j0 = 0;
            let mut minv = vec![INF; n + 1];
            let mut used = vec![false; n + 1];
            loop {
                used[j0] = true;
                let i0 = col_row[j0];
                let mut delta = INF;
                let mut j1 = 0;
                for j in 1..=n {
                    if used[j] {
                        continue;
                    }
                    let cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                    if cur < minv[j] {
                        minv[j] = cur;
                        way[j] = j0;
                    }
                    if minv[j] < delta {
                        delta = minv[j];
                        j1 = j;
                    }
                }
                for j in 0..=n {
                    if used[j] {
                        u[col_row[j]] += delta;
                        v[j] -= delta;
                    } else {
                        minv[j] -= delta;
                    }
                }
                j0 = j1;
                if col_row[j0] == 0 {
                    break;
                }
            }
            loop {
                let j1 = way[j0];
                col_row[j0] = col_row[j1];
                j0 = j1;
                if j0 == 0 {
                    break;
                }
            }
        }
        let mut row_to_col = vec![0; n];
        for j in 1..=n {
            row_to_col[col_row[j] - 1] = j - 1;
        }
        let total = row_to_col
            .iter()
            .enumerate()
            .map(|(r, &c)| cost[r][c])
            .sum();
        Hungarian {
            total,
            row_to_col,
            row_potential: u[1..].to_vec(),
            col_potential: v[1..].to_vec(),
        }
    }

    /// Among all optimal matchings, the one whose column-by-column row
    /// sequence is lexicographically smallest. Returns the row of each column.
    ///
    /// Optimal matchings are exactly the perfect matchings on edges that are
    /// tight for the optimal duals, so this fixes columns left to right,
    /// choosing the smallest row that still admits a tight perfect matching
    /// of the remainder.
    pub fn lexicographic_optimum(&self, cost: &[Vec<i64>]) -> Vec<usize> {
        let n = cost.len();
        let tight =
            |r: usize, c: usize| cost[r][c] - self.row_potential[r] - self.col_potential[c] == 0;
        let mut row_col = self.row_to_col.clone();
        let mut col_row = vec![0; n];
        for (r, &c) in row_col.iter().enumerate() {
            col_row[c] = r;
        }
        let mut row_fixed = vec![false; n];

        for col in 0..n {
            for cand in 0..n {
                if row_fixed[cand] || !tight(cand, col) {
                    continue;
                }
                if col_row[col] == cand {
                    break;
                }
                // Move `cand` into `col`: the row it displaces must reach the
                // column `cand` frees through an alternating tight path.
                let displaced = col_row[col];
                let freed = row_col[cand];
                if let Some(path) =
                    alternating_path(n, displaced, freed, col, &col_row, &row_fixed, &tight)
                {
                    // path: columns taken in turn by `displaced` and the rows it evicts
                    let mut row = displaced;
                    for &c in &path {
                        let next = col_row[c];
                        row_col[row] = c;
                        col_row[c] = row;
                        row = next;
                    }
                    row_col[cand] = col;
                    col_row[col] = cand;
                    break;
                }
            }
            row_fixed[col_row[col]] = true;
        }
        col_row
    }
}

/// Columns visited by an alternating path from free row `start` to free
/// column `target`, avoiding fixed rows, the current column and columns
/// already fixed (`< current`).
fn alternating_path(
    n: usize,
    start: usize,
    target: usize,
    current: usize,
    col_row: &[usize],
    row_fixed: &[bool],
    tight: &impl Fn(usize, usize) -> bool,
) -> Option<Vec<usize>> {
    let mut parent_col: Vec<Option<usize>> = vec![None; n]; // column -> previous column
    let mut seen = vec![false; n];
    let mut queue = std::collections::VecDeque::from([(start, None::<usize>)]);
    while let Some((row, via)) = queue.pop_front() {
        for c in current + 1..n {
            if seen[c] || !tight(row, c) {
                continue;
            }
            seen[c] = true;
            parent_col[c] = via;
            if c == target {
                let mut path = vec![c];
                let mut at = c;
                while let Some(p) = parent_col[at] {
                    path.push(p);
                    at = p;
                }
                path.reverse();
                return Some(path);
            }
            let next = col_row[c];
            if !row_fixed[next] {
                queue.push_back((next, Some(c)));
            }
        }
    }
    None
}
