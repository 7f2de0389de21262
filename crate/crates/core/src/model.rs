//! Tasks, preference profiles and schedules.
//!
//! Everything here is an immutable value once constructed. Times are exact
//! `i64` quantities starting at 0; the first task of a schedule completes at
//! its own length. Task identifiers are 1-based in every external format.

use std::fmt;

use crate::error::{Error, Result, Violation};

/// Identifier of a task, 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TaskId(u32);

impl TaskId {
    /// Builds an id from its 1-based value. Returns `None` for 0.
    pub fn new(one_based: u32) -> Option<Self> {
        (one_based >= 1).then_some(TaskId(one_based))
    }

    /// Builds an id from a 0-based slot index.
    pub fn from_index(index: usize) -> Self {
        TaskId(u32::try_from(index + 1).expect("task index exceeds u32"))
    }

    /// The 1-based value.
    pub fn get(self) -> u32 {
        self.0
    }

    /// The 0-based index used for internal arrays.
    pub fn index(self) -> usize {
        self.0 as usize - 1
    }
}

impl fmt::Display for TaskId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A permutation of the tasks `1..=n`, executed back to back from time 0.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Schedule {
    order: Vec<TaskId>,
}

impl Schedule {
    /// Validates that `order` is a permutation of `1..=order.len()`.
    pub fn new(order: Vec<TaskId>) -> Result<Self> {
        let n = order.len();
        let mut seen = vec![false; n];
        for (pos, id) in order.iter().enumerate() {
            let idx = id.index();
            if idx >= n {
                return Err(Error::InvalidSchedule(format!(
                    "position {} names task {id}, outside 1..={n}",
                    pos + 1
                )));
            }
            if std::mem::replace(&mut seen[idx], true) {
                return Err(Error::InvalidSchedule(format!(
                    "task {id} appears more than once"
                )));
            }
        }
        Ok(Schedule { order })
    }

    /// Convenience constructor from raw 1-based ids.
    pub fn from_ids(ids: &[u32]) -> Result<Self> {
        let order = ids
            .iter()
            .map(|&i| TaskId::new(i).ok_or_else(|| Error::InvalidSchedule("task id 0".to_string())))
            .collect::<Result<Vec<_>>>()?;
        Schedule::new(order)
    }

    /// The identity order `1, 2, ..., n`.
    pub fn identity(n: usize) -> Self {
        Schedule {
            order: (0..n).map(TaskId::from_index).collect(),
        }
    }

    pub(crate) fn from_indices_unchecked(indices: &[usize]) -> Self {
        Schedule {
            order: indices.iter().map(|&i| TaskId::from_index(i)).collect(),
        }
    }

    pub fn order(&self) -> &[TaskId] {
        &self.order
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// 1-based position of every task, indexed by task index.
    pub fn positions(&self) -> Vec<usize> {
        let mut pos = vec![0; self.order.len()];
        for (p, id) in self.order.iter().enumerate() {
            pos[id.index()] = p + 1;
        }
        pos
    }

    /// The same order read backwards.
    pub fn reversed(&self) -> Self {
        Schedule {
            order: self.order.iter().rev().copied().collect(),
        }
    }

    pub fn ids(&self) -> impl Iterator<Item = u32> + '_ {
        self.order.iter().map(|t| t.get())
    }
}

/// Task lengths plus one preferred schedule per voter.
///
/// Due dates `d_i^k` (completion time of task `i` in voter `k`'s preference)
/// are computed once at construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    lengths: Vec<i64>,
    prefs: Vec<Schedule>,
    due: Vec<Vec<i64>>,
}

/// Reports every invariant violation of raw instance data.
pub fn validate_instance(lengths: &[i64], prefs: &[Vec<u32>]) -> Result<(), Vec<Violation>> {
    let n = lengths.len();
    let mut violations = Vec::new();
    if n == 0 {
        violations.push(Violation::NoTasks);
    }
    if prefs.is_empty() {
        violations.push(Violation::NoVoters);
    }
    for (i, &p) in lengths.iter().enumerate() {
        if p < 1 {
            violations.push(Violation::NonPositiveLength {
                task: i + 1,
                length: p,
            });
        }
    }
    for (k, pref) in prefs.iter().enumerate() {
        let voter = k + 1;
        if pref.len() != n {
            violations.push(Violation::WrongPreferenceLength {
                voter,
                expected: n,
                found: pref.len(),
            });
        }
        let mut seen = vec![false; n];
        for &task in pref {
            if task == 0 || task as usize > n {
                violations.push(Violation::TaskOutOfRange { voter, task });
            } else if std::mem::replace(&mut seen[task as usize - 1], true) {
                violations.push(Violation::DuplicateTask { voter, task });
            }
        }
    }
    if violations.is_empty() {
        Ok(())
    } else {
        Err(violations)
    }
}

impl Instance {
    /// Validates and builds an instance from raw lengths and 1-based preference lists.
    pub fn from_raw(lengths: Vec<i64>, prefs: Vec<Vec<u32>>) -> Result<Self> {
        validate_instance(&lengths, &prefs).map_err(Error::InvalidInstance)?;
        let prefs = prefs
            .iter()
            .map(|p| Schedule::from_ids(p))
            .collect::<Result<Vec<_>>>()?;
        Instance::new(lengths, prefs)
    }

    pub fn new(lengths: Vec<i64>, prefs: Vec<Schedule>) -> Result<Self> {
        let raw: Vec<Vec<u32>> = prefs.iter().map(|s| s.ids().collect()).collect();
        validate_instance(&lengths, &raw).map_err(Error::InvalidInstance)?;
        let due = prefs
            .iter()
            .map(|s| prefix_completion(&lengths, s))
            .collect::<Result<Vec<_>>>()?;
        Ok(Instance {
            lengths,
            prefs,
            due,
        })
    }

    /// Number of tasks.
    pub fn n(&self) -> usize {
        self.lengths.len()
    }

    /// Number of voters.
    pub fn v(&self) -> usize {
        self.prefs.len()
    }

    pub fn lengths(&self) -> &[i64] {
        &self.lengths
    }

    pub fn length(&self, task: TaskId) -> i64 {
        self.lengths[task.index()]
    }

    pub fn prefs(&self) -> &[Schedule] {
        &self.prefs
    }

    /// Due dates of voter `k` (0-based), indexed by task index.
    pub fn due_dates(&self, voter: usize) -> &[i64] {
        &self.due[voter]
    }

    /// Due dates of one task across all voters, in voter order.
    pub fn task_due_dates(&self, task: TaskId) -> Vec<i64> {
        self.due.iter().map(|d| d[task.index()]).collect()
    }

    /// Sum of all lengths (the makespan of every schedule).
    pub fn total_length(&self) -> i64 {
        // Cannot overflow: construction computed the same prefix sums.
        self.lengths.iter().sum()
    }

    pub fn is_unit(&self) -> bool {
        self.lengths.iter().all(|&p| p == 1)
    }

    /// Checks that `sched` is a schedule of this instance's tasks.
    pub fn check_schedule(&self, sched: &Schedule) -> Result<()> {
        if sched.len() != self.n() {
            return Err(Error::SizeMismatch {
                expected: self.n(),
                found: sched.len(),
            });
        }
        Ok(())
    }
}

fn prefix_completion(lengths: &[i64], sched: &Schedule) -> Result<Vec<i64>> {
    let mut out = vec![0; lengths.len()];
    let mut t: i64 = 0;
    for id in sched.order() {
        t = t
            .checked_add(lengths[id.index()])
            .ok_or(Error::Overflow("completion times"))?;
        out[id.index()] = t;
    }
    Ok(out)
}

/// Completion time of every task under `sched`, indexed by task index.
pub fn completion_times(inst: &Instance, sched: &Schedule) -> Result<Vec<i64>> {
    inst.check_schedule(sched)?;
    prefix_completion(inst.lengths(), sched)
}

/// Exact total deviation, itemized per task and per voter when available.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeviationBreakdown {
    pub total: i64,
    pub per_task: Option<Vec<i64>>,
    pub per_voter: Option<Vec<i64>>,
}

impl DeviationBreakdown {
    pub fn total_only(total: i64) -> Self {
        DeviationBreakdown {
            total,
            per_task: None,
            per_voter: None,
        }
    }

    /// True when every present itemization sums to `total`.
    pub fn is_consistent(&self) -> bool {
        let ok = |items: &Option<Vec<i64>>| {
            items
                .as_ref()
                .is_none_or(|v| v.iter().sum::<i64>() == self.total)
        };
        ok(&self.per_task) && ok(&self.per_voter)
    }
}
