//! 3-Partition inputs and the two reduced voting instances built from them.

mod exact;
mod four;
mod partition;
mod three;

use std::fmt;
use std::str::FromStr;

pub use four::{build_reduction4, build_witness4, closed_form as four_voter_closed_form};
pub use four::{FourVoterBreakdown, FourVoterCosts};
pub use partition::{
    check_partition, normalize_3partition, verify_partition, ThreePartitionInstance,
    TripletPartition,
};
pub use three::{
    build_reduction3, build_reduction3_with, build_witness3, three_voter_constants,
    Reduction3Options, ThreeVoterBreakdown, ThreeVoterConstants,
};

use crate::error::{Error, Result};
use crate::model::{Instance, Schedule, TaskId};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    FourVoter,
    ThreeVoter,
}

impl Variant {
    pub fn as_str(self) -> &'static str {
        match self {
            Variant::FourVoter => "four_voter",
            Variant::ThreeVoter => "three_voter",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Unit-task blocks of the constructions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FillerSet {
    C1,
    C2,
    C3,
    C4,
    L,
    R,
    M,
}

impl FillerSet {
    fn tag(self) -> &'static str {
        match self {
            FillerSet::C1 => "c1",
            FillerSet::C2 => "c2",
            FillerSet::C3 => "c3",
            FillerSet::C4 => "c4",
            FillerSet::L => "l",
            FillerSet::R => "r",
            FillerSet::M => "m",
        }
    }

    fn from_tag(s: &str) -> Option<Self> {
        Some(match s {
            "c1" => FillerSet::C1,
            "c2" => FillerSet::C2,
            "c3" => FillerSet::C3,
            "c4" => FillerSet::C4,
            "l" => FillerSet::L,
            "r" => FillerSet::R,
            "m" => FillerSet::M,
            _ => return None,
        })
    }
}

/// What a task of a reduced instance stands for. Indices are 1-based.
///
/// Separator sets are numbered as in the construction: `a_s` is set `s` with
/// a single member in the four-voter case, `S^s` in the three-voter case.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Role {
    Integer { source: usize },
    Filler { set: FillerSet, index: usize },
    Separator { set: usize, index: usize },
}

impl Role {
    pub fn is_separator(&self) -> bool {
        matches!(self, Role::Separator { .. })
    }
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Role::Integer { source } => write!(f, "int:{source}"),
            Role::Filler { set, index } => write!(f, "{}:{index}", set.tag()),
            Role::Separator { set, index } => write!(f, "sep:{set}:{index}"),
        }
    }
}

impl FromStr for Role {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let num = |p: &str| {
            p.parse::<usize>()
                .map_err(|_| format!("bad number {p:?} in role {s:?}"))
        };
        let parts: Vec<&str> = s.split(':').collect();
        match parts.as_slice() {
            ["int", i] => Ok(Role::Integer { source: num(i)? }),
            ["sep", set, i] => Ok(Role::Separator {
                set: num(set)?,
                index: num(i)?,
            }),
            [tag, i] => match FillerSet::from_tag(tag) {
                Some(set) => Ok(Role::Filler {
                    set,
                    index: num(i)?,
                }),
                None => Err(format!("unknown role {s:?}")),
            },
            _ => Err(format!("unknown role {s:?}")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Constants {
    FourVoter { q: usize, b: i64 },
    ThreeVoter(ThreeVoterConstants),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Breakdown {
    FourVoter(FourVoterBreakdown),
    ThreeVoter(ThreeVoterBreakdown),
}

/// A reduced instance together with what each task means and the threshold.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReducedInstance {
    pub(crate) instance: Instance,
    pub(crate) variant: Variant,
    pub(crate) z: i64,
    pub(crate) roles: Vec<Role>,
    pub(crate) source: ThreePartitionInstance,
    pub(crate) constants: Constants,
    pub(crate) breakdown: Breakdown,
    pub(crate) warnings: Vec<String>,
    pub(crate) strict_bounds: bool,
}

impl ReducedInstance {
    pub fn instance(&self) -> &Instance {
        &self.instance
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn z(&self) -> i64 {
        self.z
    }

    /// Role of every task, indexed by task index.
    pub fn roles(&self) -> &[Role] {
        &self.roles
    }

    pub fn role(&self, task: TaskId) -> Role {
        self.roles[task.index()]
    }

    /// The 3-Partition instance the reduction was built from.
    pub fn source(&self) -> &ThreePartitionInstance {
        &self.source
    }

    pub fn constants(&self) -> &Constants {
        &self.constants
    }

    pub fn breakdown(&self) -> &Breakdown {
        &self.breakdown
    }

    /// Disagreements between closed forms and recomputed values.
    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    /// Whether every source integer lies strictly between `B/4` and `B/2`.
    pub fn strict_bounds(&self) -> bool {
        self.strict_bounds
    }

    /// Tasks whose role satisfies `pred`, in id order.
    pub fn tasks_where(&self, pred: impl Fn(&Role) -> bool) -> Vec<TaskId> {
        self.roles
            .iter()
            .enumerate()
            .filter(|(_, r)| pred(r))
            .map(|(i, _)| TaskId::from_index(i))
            .collect()
    }

    /// Whether all voters give every separator task the same due date.
    pub fn separators_unanimous(&self) -> bool {
        let inst = &self.instance;
        self.tasks_where(Role::is_separator).into_iter().all(|t| {
            let first = inst.due_dates(0)[t.index()];
            (1..inst.v()).all(|k| inst.due_dates(k)[t.index()] == first)
        })
    }

    /// Rebuilds the reduction described by `roles` and checks that it yields
    /// exactly `instance`. Used when reading reduced instances from disk.
    pub fn from_parts(instance: Instance, roles: &[Role]) -> Result<Self> {
        if roles.len() != instance.n() {
            return Err(Error::Precondition(format!(
                "{} roles for {} tasks",
                roles.len(),
                instance.n()
            )));
        }
        let three = roles.iter().any(|r| {
            matches!(
                r,
                Role::Filler {
                    set: FillerSet::L | FillerSet::R | FillerSet::M,
                    ..
                }
            )
        });
        let mut ints: Vec<(usize, i64)> = roles
            .iter()
            .zip(instance.lengths())
            .filter_map(|(r, &p)| match r {
                Role::Integer { source } => Some((*source, p)),
                _ => None,
            })
            .collect();
        ints.sort_unstable();
        if ints.is_empty() || !ints.len().is_multiple_of(3) {
            return Err(Error::Precondition(format!(
                "{} integer tasks is not a multiple of 3",
                ints.len()
            )));
        }
        let q = ints.len() / 3;
        let scale = if three { three::k_factor(q)? } else { 1 };
        let mut xs = Vec::with_capacity(ints.len());
        for (pos, &(source, p)) in ints.iter().enumerate() {
            if source != pos + 1 || p % scale != 0 {
                return Err(Error::Precondition(
                    "integer task roles do not describe a reduction".into(),
                ));
            }
            xs.push(p / scale);
        }
        let sum: i64 = xs.iter().sum();
        if sum % q as i64 != 0 {
            return Err(Error::Precondition(
                "integer tasks do not sum to a multiple of q".into(),
            ));
        }
        let tp = ThreePartitionInstance::new(q, sum / q as i64, xs)?;
        let red = if three {
            build_reduction3_with(
                &tp,
                Reduction3Options {
                    allow_weak_bounds: true,
                },
            )?
        } else {
            build_reduction4(&tp)?
        };
        if red.instance != instance || red.roles != roles {
            return Err(Error::Precondition(
                "instance does not match the reduction its roles describe".into(),
            ));
        }
        Ok(red)
    }
}

/// Result of reading a partition off a schedule.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DecodeOutcome {
    Partition(TripletPartition),
    Failed(String),
}

impl DecodeOutcome {
    pub fn partition(&self) -> Option<&TripletPartition> {
        match self {
            DecodeOutcome::Partition(p) => Some(p),
            DecodeOutcome::Failed(_) => None,
        }
    }
}

/// How a schedule is cut into triplet slots: separator sets in their
/// preferred order, and for each gap around them (gap `g` lies just before
/// set `g`, the last gap after the last set) the slot it holds, if any.
#[derive(Debug, Clone)]
pub(crate) struct SlotPlan {
    pub separators: Vec<Vec<usize>>,
    pub gap_slot: Vec<Option<usize>>,
}

/// Groups the integer tasks by the separator gaps they fall into.
///
/// Separator sets must appear as non-overlapping spans in their preferred
/// order, no integer task may sit inside a span, and each triplet slot must
/// receive exactly three integers summing to `B`.
pub fn decode(red: &ReducedInstance, sched: &Schedule) -> Result<DecodeOutcome> {
    red.instance.check_schedule(sched)?;
    let plan = match red.variant {
        Variant::FourVoter => four::layout_of(&red.source).slot_plan(),
        Variant::ThreeVoter => three::layout_of(red)?.slot_plan(),
    };
    Ok(decode_with(red, sched, &plan))
}

fn decode_with(red: &ReducedInstance, sched: &Schedule, plan: &SlotPlan) -> DecodeOutcome {
    let fail = |m: String| DecodeOutcome::Failed(m);
    let pos = sched.positions();
    let mut spans = Vec::with_capacity(plan.separators.len());
    for set in &plan.separators {
        let first = set.iter().map(|&t| pos[t]).min().unwrap_or(0);
        let last = set.iter().map(|&t| pos[t]).max().unwrap_or(0);
        if let Some(&(_, prev_last)) = spans.last() {
            if first <= prev_last {
                return fail(format!(
                    "separator set {} is not entirely after the previous one",
                    spans.len() + 1
                ));
            }
        }
        spans.push((first, last));
    }

    let slots = plan.gap_slot.iter().flatten().count();
    let mut groups: Vec<Vec<(usize, usize)>> = vec![Vec::new(); slots];
    for (t, role) in red.roles.iter().enumerate() {
        let Role::Integer { source } = *role else {
            continue;
        };
        let p = pos[t];
        let gap = spans.partition_point(|&(first, _)| first < p);
        if gap > 0 && p < spans[gap - 1].1 {
            return fail(format!(
                "integer task {} lies inside a separator set",
                t + 1
            ));
        }
        match plan.gap_slot[gap] {
            Some(slot) => groups[slot].push((p, source)),
            None => {
                return fail(format!(
                    "integer task {} lies outside every triplet slot",
                    t + 1
                ))
            }
        }
    }

    let xs = red.source.xs();
    let mut triplets = Vec::with_capacity(slots);
    for (slot, mut group) in groups.into_iter().enumerate() {
        if group.len() != 3 {
            return fail(format!(
                "slot {} holds {} integer tasks, expected 3",
                slot + 1,
                group.len()
            ));
        }
        group.sort_unstable();
        let sum: i64 = group.iter().map(|&(_, i)| xs[i - 1]).sum();
        if sum != red.source.b() {
            return fail(format!(
                "slot {} sums to {sum}, expected {}",
                slot + 1,
                red.source.b()
            ));
        }
        triplets.push([group[0].1, group[1].1, group[2].1]);
    }
    DecodeOutcome::Partition(TripletPartition::new(triplets))
}

/// Witness schedule for either variant.
pub fn build_witness(red: &ReducedInstance, sol: &TripletPartition) -> Result<Schedule> {
    match red.variant {
        Variant::FourVoter => build_witness4(red, sol),
        Variant::ThreeVoter => build_witness3(red, sol),
    }
}
