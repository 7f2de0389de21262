use crate::error::{Error, Result};
use crate::metrics::{median_table, Objective};
use crate::model::Instance;

/// Task-major copy of the data the search loops touch.
///
/// Construction proves that no objective value of any schedule can exceed
/// `i64::MAX`, so the hot loops use plain arithmetic.
pub(crate) struct Costing {
    pub lengths: Vec<i64>,
    pub weights: Vec<i64>,
    /// `due[i]` holds task `i`'s due dates, sorted.
    pub due: Vec<Vec<i64>>,
    pub median_lo: Vec<i64>,
    pub median_hi: Vec<i64>,
    /// Weighted minimum deviation per task.
    pub min_cost: Vec<i64>,
}

impl Costing {
    pub fn new(inst: &Instance, objective: Objective) -> Result<Self> {
        let overflow = || Error::Overflow("objective bound");
        let total = inst.total_length();
        let v = i64::try_from(inst.v()).map_err(|_| overflow())?;
        let mut worst = 0i64;
        for &p in inst.lengths() {
            let term = objective
                .weight(p)
                .checked_mul(v)
                .and_then(|x| x.checked_mul(total))
                .ok_or_else(overflow)?;
            worst = worst.checked_add(term).ok_or_else(overflow)?;
        }

        let table = median_table(inst)?;
        let weights: Vec<i64> = inst
            .lengths()
            .iter()
            .map(|&p| objective.weight(p))
            .collect();
        Ok(Costing {
            lengths: inst.lengths().to_vec(),
            min_cost: table
                .iter()
                .zip(&weights)
                .map(|(m, &w)| m.min_deviation * w)
                .collect(),
            median_lo: table.iter().map(|m| m.median_lo).collect(),
            median_hi: table.iter().map(|m| m.median_hi).collect(),
            due: table.into_iter().map(|m| m.sorted_due_dates).collect(),
            weights,
        })
    }

    pub fn n(&self) -> usize {
        self.lengths.len()
    }

    /// Weighted cost of task `i` completing at `c`.
    #[inline]
    pub fn cost_at(&self, i: usize, c: i64) -> i64 {
        self.weights[i] * self.due[i].iter().map(|&d| (c - d).abs()).sum::<i64>()
    }

    /// Cheapest weighted cost of task `i` over completion times `>= earliest`.
    #[inline]
    pub fn min_cost_from(&self, i: usize, earliest: i64) -> i64 {
        if earliest <= self.median_hi[i] {
            self.min_cost[i]
        } else {
            self.cost_at(i, earliest)
        }
    }
}
