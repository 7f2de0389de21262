//! Objective functions and per-task bounds.
//!
//! The plain objective sums `|C_i(S) - d_i^k|` over tasks and voters; the
//! weighted objective multiplies each task's term by its length.

use crate::error::{Error, Result};
use crate::model::{completion_times, DeviationBreakdown, Instance, Schedule, TaskId};

/// Which of the two objectives to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Objective {
    /// Sum of absolute deviations.
    #[default]
    Deviation,
    /// Same sum with each task's term weighted by its length.
    Weighted,
}

impl Objective {
    pub fn from_flag(weighted: bool) -> Self {
        if weighted {
            Objective::Weighted
        } else {
            Objective::Deviation
        }
    }

    /// Multiplier applied to a task of the given length.
    pub fn weight(self, length: i64) -> i64 {
        match self {
            Objective::Deviation => 1,
            Objective::Weighted => length,
        }
    }
}

/// Itemized deviation of `sched` under the chosen objective.
pub fn evaluate(
    inst: &Instance,
    sched: &Schedule,
    objective: Objective,
) -> Result<DeviationBreakdown> {
    let completion = completion_times(inst, sched)?;
    let mut per_task = vec![0i64; inst.n()];
    let mut per_voter = vec![0i64; inst.v()];
    let overflow = || Error::Overflow("deviation");
    for (k, voter_total) in per_voter.iter_mut().enumerate() {
        let due = inst.due_dates(k);
        for (i, task_total) in per_task.iter_mut().enumerate() {
            let gap = completion[i]
                .checked_sub(due[i])
                .ok_or_else(overflow)?
                .checked_abs()
                .ok_or_else(overflow)?;
            let term = gap
                .checked_mul(objective.weight(inst.lengths()[i]))
                .ok_or_else(overflow)?;
            *task_total = task_total.checked_add(term).ok_or_else(overflow)?;
            *voter_total = voter_total.checked_add(term).ok_or_else(overflow)?;
        }
    }
    let total = per_voter
        .iter()
        .try_fold(0i64, |acc, &x| acc.checked_add(x))
        .ok_or_else(overflow)?;
    Ok(DeviationBreakdown {
        total,
        per_task: Some(per_task),
        per_voter: Some(per_voter),
    })
}

/// Total deviation `D(S, P)`.
pub fn deviation(inst: &Instance, sched: &Schedule) -> Result<DeviationBreakdown> {
    evaluate(inst, sched, Objective::Deviation)
}

/// Weighted deviation where each task's weight is its length.
pub fn weighted_deviation(inst: &Instance, sched: &Schedule) -> Result<DeviationBreakdown> {
    evaluate(inst, sched, Objective::Weighted)
}

fn check_pair(a: &Schedule, b: &Schedule, n: usize) -> Result<()> {
    for s in [a, b] {
        if s.len() != n {
            return Err(Error::SizeMismatch {
                expected: n,
                found: s.len(),
            });
        }
    }
    Ok(())
}

/// Spearman footrule distance: `sum_i |pos_i(a) - pos_i(b)|`.
pub fn spearman_distance(a: &Schedule, b: &Schedule, n: usize) -> Result<u64> {
    check_pair(a, b, n)?;
    let (pa, pb) = (a.positions(), b.positions());
    Ok(pa
        .iter()
        .zip(&pb)
        .map(|(&x, &y)| x.abs_diff(y) as u64)
        .sum())
}

/// Number of task pairs ordered differently by `a` and `b`.
///
/// Counts inversions of `b` relabelled by positions in `a` with a merge sort.
pub fn kendall_tau(a: &Schedule, b: &Schedule, n: usize) -> Result<u64> {
    check_pair(a, b, n)?;
    let pa = a.positions();
    let mut seq: Vec<usize> = b.order().iter().map(|t| pa[t.index()]).collect();
    let mut buf = vec![0; seq.len()];
    Ok(count_inversions(&mut seq, &mut buf))
}

fn count_inversions(seq: &mut [usize], buf: &mut [usize]) -> u64 {
    let len = seq.len();
    if len < 2 {
        return 0;
    }
    let mid = len / 2;
    let mut count = {
        let (left, right) = seq.split_at_mut(mid);
        let (bl, br) = buf.split_at_mut(mid);
        count_inversions(left, bl) + count_inversions(right, br)
    };
    let (mut i, mut j, mut k) = (0, mid, 0);
    while i < mid && j < len {
        if seq[i] <= seq[j] {
            buf[k] = seq[i];
            i += 1;
        } else {
            buf[k] = seq[j];
            count += (mid - i) as u64;
            j += 1;
        }
        k += 1;
    }
    buf[k..k + mid - i].copy_from_slice(&seq[i..mid]);
    k += mid - i;
    buf[k..].copy_from_slice(&seq[j..]);
    seq.copy_from_slice(&buf[..len]);
    count
}

/// Where a single task would like to complete.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MedianInfo {
    pub task: TaskId,
    pub sorted_due_dates: Vec<i64>,
    /// The `ceil(v/2)`-th smallest due date.
    pub median_lo: i64,
    /// The `floor(v/2)+1`-th smallest due date.
    pub median_hi: i64,
    /// Unweighted deviation of the task anywhere in `[median_lo, median_hi]`.
    pub min_deviation: i64,
}

impl MedianInfo {
    /// Unweighted deviation if the task completes at `c`.
    pub fn deviation_at(&self, c: i64) -> i64 {
        self.sorted_due_dates.iter().map(|&d| (c - d).abs()).sum()
    }

    /// Smallest unweighted deviation over completion times `>= earliest`.
    pub fn min_deviation_from(&self, earliest: i64) -> i64 {
        if earliest <= self.median_hi {
            self.min_deviation
        } else {
            self.deviation_at(earliest)
        }
    }

    pub fn contains(&self, c: i64) -> bool {
        self.median_lo <= c && c <= self.median_hi
    }
}

/// Median completion interval and minimum attainable deviation of `task`.
pub fn median_info(inst: &Instance, task: TaskId) -> Result<MedianInfo> {
    if task.index() >= inst.n() {
        return Err(Error::Precondition(format!(
            "task {task} outside 1..={}",
            inst.n()
        )));
    }
    let mut sorted = inst.task_due_dates(task);
    sorted.sort_unstable();
    let v = sorted.len();
    let median_lo = sorted[v.div_ceil(2) - 1];
    let median_hi = sorted[v / 2];
    let min_deviation = (0..v / 2)
        .map(|i| sorted[v - 1 - i] - sorted[i])
        .try_fold(0i64, |acc, x| acc.checked_add(x))
        .ok_or(Error::Overflow("median deviation"))?;
    Ok(MedianInfo {
        task,
        sorted_due_dates: sorted,
        median_lo,
        median_hi,
        min_deviation,
    })
}

/// Median information for every task, in task order.
pub fn median_table(inst: &Instance) -> Result<Vec<MedianInfo>> {
    (0..inst.n())
        .map(|i| median_info(inst, TaskId::from_index(i)))
        .collect()
}

/// Deviation of the (usually infeasible) schedule that puts every task at its median.
pub fn ideal_lower_bound(inst: &Instance) -> Result<i64> {
    ideal_lower_bound_for(inst, Objective::Deviation)
}

/// [`ideal_lower_bound`] under either objective.
pub fn ideal_lower_bound_for(inst: &Instance, objective: Objective) -> Result<i64> {
    let overflow = || Error::Overflow("ideal lower bound");
    let mut total = 0i64;
    for info in median_table(inst)? {
        let w = objective.weight(inst.length(info.task));
        let term = info.min_deviation.checked_mul(w).ok_or_else(overflow)?;
        total = total.checked_add(term).ok_or_else(overflow)?;
    }
    Ok(total)
}
