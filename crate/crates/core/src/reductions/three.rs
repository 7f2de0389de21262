//! Three voters: integer tasks of length `K x_i`, unit blocks `L`, `R`, `M`
//! of `qB'` tasks, small separator sets `S^1..S^q` of `O` tasks and two
//! large ones `S^0`, `S^{q+2}` of `O'` tasks.
//!
//! Each voter splits one block into `q` runs of `B'` tasks placed between
//! the small separators, `q/2` runs on each side of a central interval:
//!
//! ```text
//! voter 1:  T  S^0  [L .. S^{q/2}  M  S^{q/2+1} .. L]  S^{q+2}  R
//! voter 2:  L  S^0  [R .. S^{q/2}  M  S^{q/2+1} .. R]  S^{q+2}  T
//! voter 3:  L  S^0  [M .. S^{q/2}  T  S^{q/2+1} .. M]  S^{q+2}  R
//! ```
//!
//! Separators sit at the same positions for every voter because `T`, `L`,
//! `R` and `M` all have total length `qB'`.

use super::exact::{add, div_ceil, div_exact, mul, product, sub, to_i64, to_usize};
use super::{
    check_partition, Breakdown, Constants, FillerSet, ReducedInstance, Role, SlotPlan,
    ThreePartitionInstance, TripletPartition, Variant,
};
use crate::error::{Error, Result};
use crate::metrics::ideal_lower_bound;
use crate::model::{Instance, Schedule};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ThreeVoterConstants {
    pub q: usize,
    pub b: i64,
    /// Length multiplier of the integer tasks.
    pub k: i64,
    /// `B * K`, the size of one run.
    pub b_prime: i64,
    /// Size of a small separator set.
    pub o: i64,
    /// Size of a large separator set.
    pub o_prime: i64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThreeVoterBreakdown {
    pub d_l: i64,
    pub d_r: i64,
    pub d_m: i64,
    pub d_t: i64,
    /// `D_L + D_R + D_M + D_T`, the cost of the all-median schedule.
    pub d_nf: i64,
    pub slack: i64,
    /// Sum of per-task median costs of the built instance.
    pub ideal_lower_bound: i64,
    /// Number of small separator sets in the built layout.
    pub small_separator_sets: usize,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Reduction3Options {
    /// Accept integers outside `(B/4, B/2)`. The instance is still built
    /// and [`ReducedInstance::strict_bounds`] reports the violation.
    pub allow_weak_bounds: bool,
}

/// `K = 4 ceil(3q^2/4 + 3q/2)`.
pub(crate) fn k_factor(q: usize) -> Result<i64> {
    let q = q as i128;
    to_i64(mul(4, div_ceil(add(mul(3, mul(q, q)?)?, mul(6, q)?)?, 4))?)
}

/// The constants for `(q, B)`, with `O = 2 ceil(51 q^2 B / 16 + qB / 8)`
/// and `O' = 3(qO + 2qB')`.
pub fn three_voter_constants(q: usize, b: i64) -> Result<ThreeVoterConstants> {
    let k = k_factor(q)?;
    let (qi, bi) = (q as i128, i128::from(b));
    let b_prime = mul(bi, i128::from(k))?;
    let o = mul(
        2,
        div_ceil(
            add(product(&[51, qi, qi, bi])?, product(&[2, qi, bi])?)?,
            16,
        ),
    )?;
    let o_prime = mul(3, add(mul(qi, o)?, product(&[2, qi, b_prime])?)?)?;
    Ok(ThreeVoterConstants {
        q,
        b,
        k,
        b_prime: to_i64(b_prime)?,
        o: to_i64(o)?,
        o_prime: to_i64(o_prime)?,
    })
}

struct ClosedForm {
    d_l: i128,
    d_m: i128,
    d_t: i128,
    slack: i128,
}

impl ClosedForm {
    fn d_nf(&self) -> Result<i128> {
        add(add(mul(2, self.d_l)?, self.d_m)?, self.d_t)
    }
}

fn closed_form(c: &ThreeVoterConstants) -> Result<ClosedForm> {
    let q = c.q as i128;
    let h = q / 2;
    let (bp, o, op) = (
        i128::from(c.b_prime),
        i128::from(c.o),
        i128::from(c.o_prime),
    );
    let q_bp = mul(q, bp)?;
    let half_q_bp = div_exact(q_bp, 2, "qB'/2")?;

    let mut d_l = 0i128;
    let mut d_m = 0i128;
    for i in 0..h {
        let before = add(add(q_bp, op)?, mul(i, o)?)?;
        let after = add(add(mul(2, q_bp)?, op)?, mul(add(h + 1, i)?, o)?)?;
        d_l = add(d_l, mul(bp, add(before, after)?)?)?;
        let mid = add(add(o, half_q_bp)?, mul(i, o)?)?;
        d_m = add(d_m, mul(bp, mid)?)?;
    }
    d_m = mul(2, d_m)?;
    let per_t = mul(2, add(add(op, mul(h, add(o, bp)?)?)?, q_bp)?)?;
    let d_t = mul(3 * q, per_t)?;

    // 51 q^2 B'/16 - qB'/8 + 3 q^2 O/4 + 3qO/2, over a common denominator.
    let sixteenths = add(
        sub(product(&[51, q, q, bp])?, product(&[2, q, bp])?)?,
        add(product(&[12, q, q, o])?, product(&[24, q, o])?)?,
    )?;
    let slack = div_exact(sixteenths, 16, "threshold slack")?;
    Ok(ClosedForm {
        d_l,
        d_m,
        d_t,
        slack,
    })
}

/// Task numbering of the three-voter instance.
#[derive(Debug, Clone, Copy)]
pub(crate) struct ThreeLayout {
    q: usize,
    bp: usize,
    o: usize,
    op: usize,
    /// Small separator sets; `q + 1` places an extra set just before `S^{q+2}`.
    small: usize,
}

impl ThreeLayout {
    fn new(c: &ThreeVoterConstants, small: usize) -> Result<Self> {
        let layout = ThreeLayout {
            q: c.q,
            bp: to_usize(i128::from(c.b_prime))?,
            o: to_usize(i128::from(c.o))?,
            op: to_usize(i128::from(c.o_prime))?,
            small,
        };
        let n = add(
            add(
                product(&[3, layout.q as i128, layout.bp as i128])?,
                product(&[2, layout.op as i128])?,
            )?,
            add(
                product(&[small as i128, layout.o as i128])?,
                3 * layout.q as i128,
            )?,
        )?;
        if n > i128::from(u32::MAX) {
            return Err(Error::Overflow("task count"));
        }
        Ok(layout)
    }

    fn qbp(&self) -> usize {
        self.q * self.bp
    }

    pub fn n(&self) -> usize {
        3 * self.q + 3 * self.qbp() + 2 * self.op + self.small * self.o
    }

    fn integer(&self, i: usize) -> usize {
        i - 1
    }

    fn filler_base(&self, set: FillerSet) -> usize {
        let k = match set {
            FillerSet::L => 0,
            FillerSet::R => 1,
            FillerSet::M => 2,
            _ => unreachable!("three-voter instances only use L, R and M"),
        };
        3 * self.q + k * self.qbp()
    }

    fn block(&self, set: FillerSet) -> std::ops::Range<usize> {
        let base = self.filler_base(set);
        base..base + self.qbp()
    }

    /// Run `r` (0-based) of a filler block.
    fn run(&self, set: FillerSet, r: usize) -> std::ops::Range<usize> {
        let base = self.filler_base(set) + r * self.bp;
        base..base + self.bp
    }

    fn integers(&self) -> std::ops::Range<usize> {
        0..3 * self.q
    }

    /// Separator set `s`: 0 and `q + 2` are the large ones.
    fn separator(&self, s: usize) -> std::ops::Range<usize> {
        let base = 3 * self.q + 3 * self.qbp();
        if s == 0 {
            base..base + self.op
        } else if s == self.q + 2 {
            let start = base + self.op + self.small * self.o;
            start..start + self.op
        } else {
            debug_assert!(s <= self.small);
            let start = base + self.op + (s - 1) * self.o;
            start..start + self.o
        }
    }

    fn separator_order(&self) -> Vec<usize> {
        let mut sets = vec![0];
        sets.extend(1..=self.small);
        sets.push(self.q + 2);
        sets
    }

    fn roles(&self) -> Vec<Role> {
        let mut roles = Vec::with_capacity(self.n());
        roles.extend((1..=3 * self.q).map(|source| Role::Integer { source }));
        for set in [FillerSet::L, FillerSet::R, FillerSet::M] {
            roles.extend((1..=self.qbp()).map(|index| Role::Filler { set, index }));
        }
        for set in self.separator_order() {
            roles.extend(
                (1..=self.separator(set).len()).map(|index| Role::Separator { set, index }),
            );
        }
        roles
    }

    fn middle(&self, runs: FillerSet, center: std::ops::Range<usize>) -> Vec<usize> {
        let h = self.q / 2;
        let mut out = Vec::new();
        for r in 0..h {
            out.extend(self.run(runs, r));
            out.extend(self.separator(r + 1));
        }
        out.extend(center);
        for r in h..self.q {
            out.extend(self.separator(r + 1));
            out.extend(self.run(runs, r));
        }
        if self.small > self.q {
            out.extend(self.separator(self.q + 1));
        }
        out
    }

    fn preferences(&self) -> Vec<Vec<usize>> {
        use FillerSet::{L, M, R};
        let voter = |head: Vec<usize>, mid: Vec<usize>, tail: Vec<usize>| {
            let mut out = Vec::with_capacity(self.n());
            out.extend(head);
            out.extend(self.separator(0));
            out.extend(mid);
            out.extend(self.separator(self.q + 2));
            out.extend(tail);
            out
        };
        let t = || self.integers().collect::<Vec<_>>();
        let blk = |s| self.block(s).collect::<Vec<_>>();
        vec![
            voter(t(), self.middle(L, self.block(M)), blk(R)),
            voter(blk(L), self.middle(R, self.block(M)), t()),
            voter(blk(L), self.middle(M, self.integers()), blk(R)),
        ]
    }

    pub fn slot_plan(&self) -> SlotPlan {
        let h = self.q / 2;
        let sets = self.separator_order();
        let gap_slot = (0..=sets.len())
            .map(|g| match g {
                g if (1..=h).contains(&g) => Some(g - 1),
                g if (h + 2..=self.q + 1).contains(&g) => Some(g - 2),
                _ => None,
            })
            .collect();
        SlotPlan {
            separators: sets
                .into_iter()
                .map(|s| self.separator(s).collect())
                .collect(),
            gap_slot,
        }
    }
}

pub(crate) fn layout_of(red: &ReducedInstance) -> Result<ThreeLayout> {
    match (&red.constants, &red.breakdown) {
        (Constants::ThreeVoter(c), Breakdown::ThreeVoter(bd)) => {
            ThreeLayout::new(c, bd.small_separator_sets)
        }
        _ => Err(Error::Precondition("not a three-voter reduction".into())),
    }
}

/// [`build_reduction3_with`] with strict bounds required.
pub fn build_reduction3(tp: &ThreePartitionInstance) -> Result<ReducedInstance> {
    build_reduction3_with(tp, Reduction3Options::default())
}

/// Builds the three-voter instance with threshold `z = D_NF + slack`.
///
/// The layout with an extra small separator set before `S^{q+2}` is tried
/// first and kept only if its per-task median bound equals `D_NF`; otherwise
/// exactly `q` small sets are used. The choice is recorded in the breakdown.
pub fn build_reduction3_with(
    tp: &ThreePartitionInstance,
    opts: Reduction3Options,
) -> Result<ReducedInstance> {
    if !tp.is_normalized() {
        return Err(Error::Precondition(format!(
            "three-voter reduction needs even q, B >= 8 and 4 | B (got q = {}, B = {}); normalize first",
            tp.q(),
            tp.b()
        )));
    }
    if !tp.strict_bounds() && !opts.allow_weak_bounds {
        return Err(Error::Precondition(format!(
            "three-voter reduction needs B/4 < x_i < B/2 for every integer (B = {})",
            tp.b()
        )));
    }
    let c = three_voter_constants(tp.q(), tp.b())?;
    let cf = closed_form(&c)?;
    let d_nf = cf.d_nf()?;
    let z = add(d_nf, cf.slack)?;
    let gap = product(&[2, i128::from(c.k), i128::from(c.o)])?;
    if add(d_nf, gap)? <= z {
        return Err(Error::Precondition(format!(
            "D_NF + 2KO = {} does not exceed Z = {z}",
            add(d_nf, gap)?
        )));
    }

    let mut chosen = None;
    for small in [tp.q() + 1, tp.q()] {
        let layout = ThreeLayout::new(&c, small)?;
        let instance = instance_for(&layout, tp, c.k)?;
        let ideal = ideal_lower_bound(&instance)?;
        let fits = i128::from(ideal) == d_nf;
        if fits || small == tp.q() {
            chosen = Some((layout, instance, ideal, fits));
            if fits {
                break;
            }
        }
    }
    let (layout, instance, ideal, fits) = chosen.expect("the q-set layout is always tried");
    let mut warnings = Vec::new();
    if !fits {
        warnings.push(format!(
            "per-task median bound {ideal} differs from D_NF = {d_nf}"
        ));
    }

    let breakdown = ThreeVoterBreakdown {
        d_l: to_i64(cf.d_l)?,
        d_r: to_i64(cf.d_l)?,
        d_m: to_i64(cf.d_m)?,
        d_t: to_i64(cf.d_t)?,
        d_nf: to_i64(d_nf)?,
        slack: to_i64(cf.slack)?,
        ideal_lower_bound: ideal,
        small_separator_sets: layout.small,
    };
    Ok(ReducedInstance {
        instance,
        variant: Variant::ThreeVoter,
        z: to_i64(z)?,
        roles: layout.roles(),
        source: tp.clone(),
        constants: Constants::ThreeVoter(c),
        breakdown: Breakdown::ThreeVoter(breakdown),
        warnings,
        strict_bounds: tp.strict_bounds(),
    })
}

fn instance_for(layout: &ThreeLayout, tp: &ThreePartitionInstance, k: i64) -> Result<Instance> {
    let mut lengths = vec![1i64; layout.n()];
    for (i, &x) in tp.xs().iter().enumerate() {
        lengths[layout.integer(i + 1)] = x.checked_mul(k).ok_or(Error::Overflow("task lengths"))?;
    }
    let prefs = layout
        .preferences()
        .iter()
        .map(|order| Schedule::from_indices_unchecked(order))
        .collect();
    Instance::new(lengths, prefs)
}

/// `L`, `S^0`, then triplets `1..q/2` each followed by its separator set
/// (longest task first), `M`, then triplets `q/2+1..q` each after its
/// separator set (shortest first), `S^{q+2}`, `R`.
pub fn build_witness3(red: &ReducedInstance, sol: &TripletPartition) -> Result<Schedule> {
    let layout = layout_of(red)?;
    check_partition(red.source(), sol)?;
    let xs = red.source().xs();
    let sorted = |triple: &[usize; 3], longest_first: bool| {
        let mut t = *triple;
        t.sort_by_key(|&i| {
            let x = xs[i - 1];
            (if longest_first { -x } else { x }, i)
        });
        t.map(|i| layout.integer(i))
    };

    let h = layout.q / 2;
    let mut order = Vec::with_capacity(layout.n());
    order.extend(layout.block(FillerSet::L));
    order.extend(layout.separator(0));
    for (b, triple) in sol.triplets.iter().enumerate().take(h) {
        order.extend(sorted(triple, true));
        order.extend(layout.separator(b + 1));
    }
    order.extend(layout.block(FillerSet::M));
    for (b, triple) in sol.triplets.iter().enumerate().skip(h) {
        order.extend(layout.separator(b + 1));
        order.extend(sorted(triple, false));
    }
    if layout.small > layout.q {
        order.extend(layout.separator(layout.q + 1));
    }
    order.extend(layout.separator(layout.q + 2));
    order.extend(layout.block(FillerSet::R));
    Ok(Schedule::from_indices_unchecked(&order))
}
