//! Seeded generation on top of splitmix64.
//!
//! Bounded draws use rejection sampling: with `m` possible values, raw
//! outputs below `2^64 mod m` are discarded and the rest reduced mod `m`.
//! The stream is consumed in a fixed order, so a spec always yields the
//! same instance on every platform.

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;

use super::format::InstanceDoc;
use crate::error::{Error, Result};
use crate::model::{Instance, Schedule};
use crate::reductions::{ThreePartitionInstance, TripletPartition};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RandomSpec {
    pub n: usize,
    pub v: usize,
    pub pmax: i64,
    pub seed: u64,
}

pub(crate) struct Stream(SplitMix64);

impl Stream {
    pub fn new(seed: u64) -> Self {
        Stream(SplitMix64::from_seed(seed.to_le_bytes()))
    }

    /// Uniform in `0..m`, `m >= 1`.
    pub fn below(&mut self, m: u64) -> u64 {
        let threshold = m.wrapping_neg() % m;
        loop {
            let x = self.0.next_u64();
            if x >= threshold {
                return x % m;
            }
        }
    }

    /// Uniform in `lo..=hi`.
    pub fn between(&mut self, lo: i64, hi: i64) -> i64 {
        let span = hi.abs_diff(lo) + 1;
        lo + self.below(span) as i64
    }

    /// Fisher-Yates from the back: for `i = len-1` down to 1 swap `i` with a
    /// uniform `j` in `0..=i`.
    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            let j = self.below(i as u64 + 1) as usize;
            items.swap(i, j);
        }
    }
}

/// Lengths first (uniform in `1..=pmax`, task by task), then one uniform
/// permutation per voter, each shuffled from the identity.
pub fn gen_random(spec: &RandomSpec) -> Result<Instance> {
    if spec.n == 0 || spec.v == 0 || spec.pmax < 1 {
        return Err(Error::Precondition(format!(
            "random instances need n >= 1, v >= 1 and pmax >= 1 (got n = {}, v = {}, pmax = {})",
            spec.n, spec.v, spec.pmax
        )));
    }
    let mut rng = Stream::new(spec.seed);
    let lengths: Vec<i64> = (0..spec.n).map(|_| rng.between(1, spec.pmax)).collect();
    let prefs = (0..spec.v)
        .map(|_| {
            let mut order: Vec<usize> = (0..spec.n).collect();
            rng.shuffle(&mut order);
            Schedule::from_indices_unchecked(&order)
        })
        .collect();
    Instance::new(lengths, prefs)
}

/// [`gen_random`] with the spec recorded in a header comment.
pub fn gen_random_doc(spec: &RandomSpec) -> Result<InstanceDoc> {
    let mut doc = InstanceDoc::new(gen_random(spec)?);
    doc.comments.push(format!(
        "random n {} v {} pmax {} seed {}",
        spec.n, spec.v, spec.pmax, spec.seed
    ));
    Ok(doc)
}

/// A random yes-instance of 3-Partition and its solution.
///
/// Each triple is drawn as `x1`, then `x2` from the range that keeps `x3 =
/// B - x1 - x2` admissible; the `3q` integers are then shuffled. With
/// `strict` every integer lies strictly between `B/4` and `B/2`.
pub fn gen_yes_3partition(
    q: usize,
    b: i64,
    strict: bool,
    seed: u64,
) -> Result<(ThreePartitionInstance, TripletPartition)> {
    let (lo, hi) = if strict {
        (b / 4 + 1, (b + 1) / 2 - 1)
    } else {
        (1, b - 2)
    };
    if q == 0 || lo > hi || 3 * lo > b || 3 * hi < b {
        return Err(Error::Precondition(format!(
            "no {}triple sums to B = {b}",
            if strict { "strict-bounds " } else { "" }
        )));
    }
    let mut rng = Stream::new(seed);
    let mut values = Vec::with_capacity(3 * q);
    for _ in 0..q {
        // x1 must leave room for two values in [lo, hi].
        let x1 = rng.between(lo.max(b - 2 * hi), hi.min(b - 2 * lo));
        let x2 = rng.between(lo.max(b - x1 - hi), hi.min(b - x1 - lo));
        values.extend([x1, x2, b - x1 - x2]);
    }
    let mut perm: Vec<usize> = (0..3 * q).collect();
    rng.shuffle(&mut perm);
    // Integer at position i is values[perm[i]].
    let mut where_ = vec![0; 3 * q];
    for (i, &src) in perm.iter().enumerate() {
        where_[src] = i + 1;
    }
    let xs = perm.iter().map(|&s| values[s]).collect();
    let triplets = (0..q)
        .map(|t| [where_[3 * t], where_[3 * t + 1], where_[3 * t + 2]])
        .collect();
    Ok((
        ThreePartitionInstance::new(q, b, xs)?,
        TripletPartition::new(triplets),
    ))
}
