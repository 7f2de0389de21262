use std::collections::BTreeSet;

use crate::error::{Error, Result};

/// `3q` positive integers to be split into `q` triples of sum `B`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThreePartitionInstance {
    q: usize,
    b: i64,
    xs: Vec<i64>,
}

impl ThreePartitionInstance {
    pub fn new(q: usize, b: i64, xs: Vec<i64>) -> Result<Self> {
        if q == 0 {
            return Err(Error::InvalidPartition("q must be at least 1".into()));
        }
        if b < 1 {
            return Err(Error::InvalidPartition(format!(
                "B must be positive, got {b}"
            )));
        }
        if xs.len() != 3 * q {
            return Err(Error::InvalidPartition(format!(
                "expected {} integers for q = {q}, got {}",
                3 * q,
                xs.len()
            )));
        }
        if let Some((i, x)) = xs.iter().enumerate().find(|(_, &x)| x < 1) {
            return Err(Error::InvalidPartition(format!(
                "x_{} = {x} is not positive",
                i + 1
            )));
        }
        let sum = xs
            .iter()
            .try_fold(0i64, |a, &x| a.checked_add(x))
            .ok_or(Error::Overflow("3-Partition sum"))?;
        let target = (q as i64)
            .checked_mul(b)
            .ok_or(Error::Overflow("3-Partition sum"))?;
        if sum != target {
            return Err(Error::InvalidPartition(format!(
                "integers sum to {sum}, expected q * B = {target}"
            )));
        }
        Ok(ThreePartitionInstance { q, b, xs })
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn b(&self) -> i64 {
        self.b
    }

    pub fn xs(&self) -> &[i64] {
        &self.xs
    }

    /// Whether every integer lies strictly between `B/4` and `B/2`.
    pub fn strict_bounds(&self) -> bool {
        self.xs.iter().all(|&x| 4 * x > self.b && 2 * x < self.b)
    }

    /// Even `q`, `B >= 8` and `B` divisible by 4.
    pub fn is_normalized(&self) -> bool {
        self.q.is_multiple_of(2) && self.b >= 8 && self.b % 4 == 0
    }
}

/// `q` triples of 1-based indices into the integers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TripletPartition {
    pub triplets: Vec<[usize; 3]>,
}

impl TripletPartition {
    pub fn new(triplets: Vec<[usize; 3]>) -> Self {
        TripletPartition { triplets }
    }

    /// Order-insensitive form: each triple sorted, triples sorted.
    pub fn canonical(&self) -> Vec<[usize; 3]> {
        let mut out: Vec<[usize; 3]> = self
            .triplets
            .iter()
            .map(|t| {
                let mut t = *t;
                t.sort_unstable();
                t
            })
            .collect();
        out.sort_unstable();
        out
    }

    /// Equality up to reordering triples and their members.
    pub fn same_as(&self, other: &TripletPartition) -> bool {
        self.canonical() == other.canonical()
    }
}

/// True iff `sol` uses every index exactly once and every triple sums to `B`.
pub fn verify_partition(tp: &ThreePartitionInstance, sol: &TripletPartition) -> bool {
    check_partition(tp, sol).is_ok()
}

/// Like [`verify_partition`] but says what is wrong.
pub fn check_partition(tp: &ThreePartitionInstance, sol: &TripletPartition) -> Result<()> {
    let bad = |m: String| Err(Error::InvalidPartition(m));
    if sol.triplets.len() != tp.q() {
        return bad(format!(
            "expected {} triplets, got {}",
            tp.q(),
            sol.triplets.len()
        ));
    }
    let mut seen = BTreeSet::new();
    for (t, triple) in sol.triplets.iter().enumerate() {
        let mut sum = 0;
        for &i in triple {
            if i == 0 || i > tp.xs().len() {
                return bad(format!(
                    "triplet {} names index {i}, outside 1..={}",
                    t + 1,
                    tp.xs().len()
                ));
            }
            if !seen.insert(i) {
                return bad(format!("index {i} is used more than once"));
            }
            sum += tp.xs()[i - 1];
        }
        if sum != tp.b() {
            return bad(format!(
                "triplet {} sums to {sum}, expected {}",
                t + 1,
                tp.b()
            ));
        }
    }
    Ok(())
}

/// Brings an instance to even `q`, `B >= 8` and `4 | B` without changing
/// its answer: scale everything by 8 when needed, then pad odd `q` with the
/// forced triple `(B/2 - 2, B/4 + 1, B/4 + 1)`.
pub fn normalize_3partition(tp: &ThreePartitionInstance) -> Result<ThreePartitionInstance> {
    let (mut b, mut xs) = (tp.b(), tp.xs().to_vec());
    if b < 8 || b % 4 != 0 {
        b = b.checked_mul(8).ok_or(Error::Overflow("normalization"))?;
        for x in &mut xs {
            *x *= 8;
        }
    }
    let mut q = tp.q();
    if q % 2 == 1 {
        xs.extend([b / 2 - 2, b / 4 + 1, b / 4 + 1]);
        q += 1;
    }
    ThreePartitionInstance::new(q, b, xs)
}
