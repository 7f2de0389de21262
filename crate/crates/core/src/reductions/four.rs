//! Four voters: one task per integer, four blocks of `qB` unit tasks and
//! `q - 1` unit separators.
//!
//! Every voter puts one designated block `C_k` in the middle region, split
//! into `q` runs of `B` unit tasks with the separators between the runs:
//!
//! ```text
//! voter 1:  J    C2   [C1 | a_1 | ... | a_{q-1} | C1]  C3  C4
//! voter 2:  C1   J    [C2 | ...                   ]  C3  C4
//! voter 3:  C1   C2   [C3 | ...                   ]  J   C4
//! voter 4:  C1   C2   [C4 | ...                   ]  C3  J
//! ```
//!
//! A schedule reaches the per-task median bound exactly when the integer
//! tasks fill the `q` runs of the middle region, i.e. when the integers split
//! into triples of sum `B`.

use super::exact::{add, mul, product, to_i64};
use super::{
    check_partition, Breakdown, Constants, FillerSet, ReducedInstance, Role, SlotPlan,
    ThreePartitionInstance, TripletPartition, Variant,
};
use crate::error::{Error, Result};
use crate::metrics::{ideal_lower_bound, median_table};
use crate::model::{Instance, Schedule};

/// Per-role contributions to the all-median deviation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FourVoterCosts {
    pub c: [i64; 4],
    pub separators: i64,
    pub integers: i64,
}

impl FourVoterCosts {
    pub fn total(&self) -> i64 {
        self.c.iter().sum::<i64>() + self.separators + self.integers
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FourVoterBreakdown {
    /// Published closed form, component by component.
    pub closed_form: FourVoterCosts,
    /// The same components summed from per-task medians.
    pub oracle: FourVoterCosts,
}

impl FourVoterBreakdown {
    pub fn closed_form_z(&self) -> i64 {
        self.closed_form.total()
    }

    /// Names of the components where the closed form disagrees with the medians.
    pub fn mismatches(&self) -> Vec<String> {
        let (a, b) = (&self.closed_form, &self.oracle);
        let mut out = Vec::new();
        for k in 0..4 {
            if a.c[k] != b.c[k] {
                out.push(format!(
                    "C{}: closed form {} vs medians {}",
                    k + 1,
                    a.c[k],
                    b.c[k]
                ));
            }
        }
        if a.separators != b.separators {
            out.push(format!(
                "separators: closed form {} vs medians {}",
                a.separators, b.separators
            ));
        }
        if a.integers != b.integers {
            out.push(format!(
                "integer tasks: closed form {} vs medians {}",
                a.integers, b.integers
            ));
        }
        out
    }
}

/// Task numbering of the four-voter instance.
#[derive(Debug, Clone, Copy)]
pub(crate) struct FourLayout {
    q: usize,
    b: usize,
}

impl FourLayout {
    fn new(q: usize, b: usize) -> Self {
        FourLayout { q, b }
    }

    fn qb(&self) -> usize {
        self.q * self.b
    }

    pub fn n(&self) -> usize {
        3 * self.q + 4 * self.qb() + (self.q - 1)
    }

    /// Integer task for `x_i`, `i` 1-based.
    fn integer(&self, i: usize) -> usize {
        i - 1
    }

    /// Task `j` (1-based) of block `C_k` (`k` in 1..=4).
    fn filler(&self, k: usize, j: usize) -> usize {
        3 * self.q + (k - 1) * self.qb() + j - 1
    }

    /// Separator `a_s`, `s` in 1..q.
    fn separator(&self, s: usize) -> usize {
        3 * self.q + 4 * self.qb() + s - 1
    }

    fn block(&self, k: usize) -> impl Iterator<Item = usize> + '_ {
        (1..=self.qb()).map(move |j| self.filler(k, j))
    }

    fn integers(&self) -> impl Iterator<Item = usize> + '_ {
        (1..=3 * self.q).map(|i| self.integer(i))
    }

    /// `C_k` cut into runs of `B` with the separators in between.
    fn middle(&self, k: usize) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.qb() + self.q - 1);
        for run in 0..self.q {
            out.extend((run * self.b + 1..=(run + 1) * self.b).map(|j| self.filler(k, j)));
            if run + 1 < self.q {
                out.push(self.separator(run + 1));
            }
        }
        out
    }

    fn roles(&self) -> Vec<Role> {
        let mut roles = Vec::with_capacity(self.n());
        roles.extend((1..=3 * self.q).map(|source| Role::Integer { source }));
        for set in [FillerSet::C1, FillerSet::C2, FillerSet::C3, FillerSet::C4] {
            roles.extend((1..=self.qb()).map(|index| Role::Filler { set, index }));
        }
        roles.extend((1..self.q).map(|set| Role::Separator { set, index: 1 }));
        roles
    }

    fn preferences(&self) -> Vec<Vec<usize>> {
        let cat = |parts: Vec<Vec<usize>>| parts.concat();
        let c = |k| self.block(k).collect::<Vec<_>>();
        let j = || self.integers().collect::<Vec<_>>();
        vec![
            cat(vec![j(), c(2), self.middle(1), c(3), c(4)]),
            cat(vec![c(1), j(), self.middle(2), c(3), c(4)]),
            cat(vec![c(1), c(2), self.middle(3), j(), c(4)]),
            cat(vec![c(1), c(2), self.middle(4), c(3), j()]),
        ]
    }

    pub fn slot_plan(&self) -> SlotPlan {
        SlotPlan {
            separators: (1..self.q).map(|s| vec![self.separator(s)]).collect(),
            gap_slot: (0..self.q).map(Some).collect(),
        }
    }
}

/// Builds the four-voter instance. `z` is the per-task median bound; the
/// published closed form is kept alongside and any disagreement is reported
/// in [`ReducedInstance::warnings`].
pub fn build_reduction4(tp: &ThreePartitionInstance) -> Result<ReducedInstance> {
    let q = tp.q();
    let b = usize::try_from(tp.b()).map_err(|_| Error::Overflow("block size"))?;
    let qb = q.checked_mul(b).ok_or(Error::Overflow("task count"))?;
    qb.checked_mul(4)
        .and_then(|x| x.checked_add(4 * q))
        .filter(|&n| n <= u32::MAX as usize)
        .ok_or(Error::Overflow("task count"))?;
    let layout = FourLayout::new(q, b);

    let mut lengths = vec![1i64; layout.n()];
    for (i, &x) in tp.xs().iter().enumerate() {
        lengths[layout.integer(i + 1)] = x;
    }
    let prefs = layout
        .preferences()
        .iter()
        .map(|order| Schedule::from_indices_unchecked(order))
        .collect();
    let instance = Instance::new(lengths, prefs)?;
    let roles = layout.roles();

    let z = ideal_lower_bound(&instance)?;
    let breakdown = FourVoterBreakdown {
        closed_form: closed_form(q, tp.b())?,
        oracle: oracle_costs(&instance, &roles)?,
    };
    let warnings = breakdown
        .mismatches()
        .into_iter()
        .map(|m| format!("closed-form threshold disagrees with per-task medians ({m}); using the median bound"))
        .collect();

    Ok(ReducedInstance {
        instance,
        variant: Variant::FourVoter,
        z,
        roles,
        source: tp.clone(),
        constants: Constants::FourVoter { q, b: tp.b() },
        breakdown: Breakdown::FourVoter(breakdown),
        warnings,
        strict_bounds: tp.strict_bounds(),
    })
}

/// The published per-set terms: `2(qB)^2 + S`, `(qB)^2 + S`, `(qB)^2 + S`,
/// `2(qB)^2 + S` with `S = sum_{i<q} iB`, and `3q(qB + q - 1 + 2qB)` for
/// the integer tasks.
pub fn closed_form(q: usize, b: i64) -> Result<FourVoterCosts> {
    let (q, b) = (q as i128, i128::from(b));
    let qb_sq = product(&[q, b, q, b])?;
    let s = mul(b, q * (q - 1) / 2)?;
    let outer = to_i64(add(mul(2, qb_sq)?, s)?)?;
    let inner = to_i64(add(qb_sq, s)?)?;
    let integers = to_i64(product(&[
        3,
        q,
        add(add(mul(q, b)?, q - 1)?, product(&[2, q, b])?)?,
    ])?)?;
    Ok(FourVoterCosts {
        c: [outer, inner, inner, outer],
        separators: 0,
        integers,
    })
}

fn oracle_costs(instance: &Instance, roles: &[Role]) -> Result<FourVoterCosts> {
    let mut costs = FourVoterCosts {
        c: [0; 4],
        separators: 0,
        integers: 0,
    };
    for (info, role) in median_table(instance)?.iter().zip(roles) {
        let slot = match role {
            Role::Integer { .. } => &mut costs.integers,
            Role::Separator { .. } => &mut costs.separators,
            Role::Filler { set, .. } => match set {
                FillerSet::C1 => &mut costs.c[0],
                FillerSet::C2 => &mut costs.c[1],
                FillerSet::C3 => &mut costs.c[2],
                FillerSet::C4 => &mut costs.c[3],
                _ => unreachable!("four-voter instances only use C blocks"),
            },
        };
        *slot = slot
            .checked_add(info.min_deviation)
            .ok_or(Error::Overflow("median costs"))?;
    }
    Ok(costs)
}

/// `C_1`, `C_2`, then triplet `b` between `a_{b-1}` and `a_b`, then `C_3`, `C_4`.
pub fn build_witness4(red: &ReducedInstance, sol: &TripletPartition) -> Result<Schedule> {
    if red.variant() != Variant::FourVoter {
        return Err(Error::Precondition("not a four-voter reduction".into()));
    }
    check_partition(red.source(), sol)?;
    let tp = red.source();
    let layout = FourLayout::new(tp.q(), tp.b() as usize);
    let mut order = Vec::with_capacity(layout.n());
    order.extend(layout.block(1));
    order.extend(layout.block(2));
    for (slot, triple) in sol.triplets.iter().enumerate() {
        let mut triple = *triple;
        triple.sort_unstable();
        order.extend(triple.iter().map(|&i| layout.integer(i)));
        if slot + 1 < tp.q() {
            order.push(layout.separator(slot + 1));
        }
    }
    order.extend(layout.block(3));
    order.extend(layout.block(4));
    Ok(Schedule::from_indices_unchecked(&order))
}

pub(crate) fn layout_of(tp: &ThreePartitionInstance) -> FourLayout {
    FourLayout::new(tp.q(), tp.b() as usize)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::deviation;

    fn small() -> ThreePartitionInstance {
        ThreePartitionInstance::new(2, 6, vec![1, 2, 3, 1, 2, 3]).unwrap()
    }

    #[test]
    fn task_count() {
        let red = build_reduction4(&small()).unwrap();
        assert_eq!(red.instance().n(), 55);
        assert_eq!(red.instance().v(), 4);
        assert_eq!(red.roles().len(), 55);
    }

    #[test]
    fn closed_form_value_and_disagreement() {
        let red = build_reduction4(&small()).unwrap();
        let Breakdown::FourVoter(bd) = red.breakdown() else {
            panic!("wrong breakdown")
        };
        // 6(qB)^2 + 4 * sum_{i<q} iB + 3q(3qB + q - 1)
        assert_eq!(bd.closed_form_z(), 864 + 24 + 222);
        assert_eq!(bd.closed_form_z(), 1110);
        // Each integer task in its median interval costs 2(3qB + q - 1).
        assert_eq!(bd.oracle.integers, 6 * 2 * 37);
        assert_eq!(bd.oracle.c, bd.closed_form.c);
        assert_eq!(bd.oracle.separators, 0);
        assert_eq!(red.z(), bd.oracle.total());
        assert_eq!(red.z(), 1332);
        assert_eq!(bd.mismatches().len(), 1);
        assert_eq!(red.warnings().len(), 1);
    }

    #[test]
    fn witness_meets_threshold_and_perturbation_does_not() {
        let red = build_reduction4(&small()).unwrap();
        let sol = TripletPartition::new(vec![[1, 2, 3], [4, 5, 6]]);
        let w = build_witness4(&red, &sol).unwrap();
        assert_eq!(deviation(red.instance(), &w).unwrap().total, red.z());

        // Swap one integer task with the separator.
        let mut ids: Vec<u32> = w.ids().collect();
        let sep = ids
            .iter()
            .position(|&t| t as usize == layout_of(red.source()).separator(1) + 1)
            .unwrap();
        ids.swap(sep - 1, sep);
        let bad = Schedule::from_ids(&ids).unwrap();
        assert!(deviation(red.instance(), &bad).unwrap().total > red.z());
    }

    #[test]
    fn invalid_partition_is_rejected() {
        let red = build_reduction4(&small()).unwrap();
        let sol = TripletPartition::new(vec![[1, 2, 4], [3, 5, 6]]);
        assert!(matches!(
            build_witness4(&red, &sol),
            Err(Error::InvalidPartition(_))
        ));
    }
}
