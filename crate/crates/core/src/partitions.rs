//! Partition enumeration in multiplicity form, plus an independent
//! partition-count oracle.
//!
//! A partition of `n` is stored as its multiplicity vector `m_1..m_n`
//! (`m_i` = number of parts equal to `i`), because every partition-sum
//! formula in this crate consumes the multiplicities directly. Enumeration
//! is an in-place successor in reverse-lexicographic order of the part
//! lists, so output order is deterministic and the iterator state is O(n).
//!
//! [`partition_count`] uses the pentagonal-number recurrence and shares no
//! code with the enumerator; the two are cross-checked in tests.

use crate::number::Rat;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

/// Cap on the partition size any partition-sum is allowed to enumerate.
///
/// Sums over the partitions of `n` have p(n) terms; the default cap keeps
/// a full fold in the seconds range on desk hardware.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SizeGuard {
    max: usize,
}

impl SizeGuard {
    pub const DEFAULT_MAX: usize = 80;

    pub fn new(max: usize) -> Self {
        Self { max }
    }

    pub fn max(&self) -> usize {
        self.max
    }

    /// Errors if a sum over the partitions of `n` would exceed the cap.
    pub fn admit(&self, n: usize) -> Result<(), PartitionError> {
        if n > self.max {
            Err(PartitionError::GuardExceeded { n, max: self.max })
        } else {
            Ok(())
        }
    }
}

impl Default for SizeGuard {
    fn default() -> Self {
        Self {
            max: Self::DEFAULT_MAX,
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PartitionError {
    #[error("partition size {n} exceeds the configured guard of {max} (p(n) terms would be enumerated)")]
    GuardExceeded { n: usize, max: usize },
    #[error("multiplicities sum to {got}, expected {expected}")]
    BadMultiplicities { got: usize, expected: usize },
}

/// A partition of `n` encoded by part multiplicities.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PartitionMults {
    n: usize,
    mults: Vec<usize>,
}

impl PartitionMults {
    /// Builds from a multiplicity vector `m_1..m_n`; checks `sum i*m_i = n`.
    pub fn new(n: usize, mults: Vec<usize>) -> Result<Self, PartitionError> {
        let got: usize = mults.iter().enumerate().map(|(i, m)| (i + 1) * m).sum();
        if got != n || mults.len() != n {
            return Err(PartitionError::BadMultiplicities { got, expected: n });
        }
        Ok(Self { n, mults })
    }

    /// The size `|lambda|`.
    pub fn size(&self) -> usize {
        self.n
    }

    /// Multiplicity of the part `i` (1-based); 0 outside `1..=n`.
    pub fn mult(&self, part: usize) -> usize {
        if part >= 1 && part <= self.n {
            self.mults[part - 1]
        } else {
            0
        }
    }

    /// Number of parts.
    pub fn length(&self) -> usize {
        self.mults.iter().sum()
    }

    /// `(part, multiplicity)` pairs with nonzero multiplicity, ascending part.
    pub fn parts(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.mults
            .iter()
            .enumerate()
            .filter(|(_, &m)| m > 0)
            .map(|(i, &m)| (i + 1, m))
    }

    /// The raw multiplicity slice `m_1..m_n`.
    pub fn mults(&self) -> &[usize] {
        &self.mults
    }
}

/// Iterator over all partitions of `n` in reverse-lexicographic order of
/// part lists, from `(n)` down to `(1,1,...,1)`.
#[derive(Debug)]
pub struct PartitionIter {
    n: usize,
    mults: Vec<usize>,
    state: IterState,
}

#[derive(Debug)]
enum IterState {
    Fresh,
    Running,
    Done,
}

impl PartitionIter {
    fn new(n: usize) -> Self {
        let mut mults = vec![0; n];
        if n > 0 {
            mults[n - 1] = 1; // start at the single-part partition (n)
        }
        Self {
            n,
            mults,
            state: IterState::Fresh,
        }
    }

    /// Advances to the successor partition. The next partition is formed by
    /// taking one copy of the smallest part v >= 2 together with all the 1s,
    /// and refilling that budget greedily with parts of size v-1.
    fn step(&mut self) -> bool {
        let ones = self.mults[0];
        let v = match (2..=self.n).find(|&i| self.mults[i - 1] > 0) {
            Some(v) => v,
            None => return false, // all parts are 1: last partition
        };
        self.mults[0] = 0;
        self.mults[v - 1] -= 1;
        let budget = v + ones;
        let x = v - 1;
        self.mults[x - 1] += budget / x;
        if budget % x > 0 {
            self.mults[budget % x - 1] += 1;
        }
        true
    }
}

impl Iterator for PartitionIter {
    type Item = PartitionMults;

    fn next(&mut self) -> Option<PartitionMults> {
        match self.state {
            IterState::Fresh => self.state = IterState::Running,
            IterState::Running => {
                if self.n == 0 || !self.step() {
                    self.state = IterState::Done;
                    return None;
                }
            }
            IterState::Done => return None,
        }
        Some(PartitionMults {
            n: self.n,
            mults: self.mults.clone(),
        })
    }
}

/// Enumerates every partition of `n` exactly once (the empty partition for
/// `n = 0`), under the default [`SizeGuard`].
pub fn enumerate_partitions(n: usize) -> Result<PartitionIter, PartitionError> {
    enumerate_partitions_guarded(n, SizeGuard::default())
}

/// [`enumerate_partitions`] with an explicit guard.
pub fn enumerate_partitions_guarded(
    n: usize,
    guard: SizeGuard,
) -> Result<PartitionIter, PartitionError> {
    guard.admit(n)?;
    Ok(PartitionIter::new(n))
}

/// p(n) by the Euler pentagonal-number recurrence:
/// `p(n) = sum_{k>=1} (-1)^(k-1) [p(n - k(3k-1)/2) + p(n - k(3k+1)/2)]`.
///
/// Independent of the enumerator on purpose.
pub fn partition_count(n: usize) -> BigInt {
    let mut p: Vec<BigInt> = Vec::with_capacity(n + 1);
    p.push(BigInt::one());
    for m in 1..=n {
        let mut acc = BigInt::zero();
        let mut k = 1usize;
        loop {
            let g1 = k * (3 * k - 1) / 2;
            if g1 > m {
                break;
            }
            let sign = if k % 2 == 1 { 1 } else { -1 };
            acc += sign * &p[m - g1];
            let g2 = k * (3 * k + 1) / 2;
            if g2 <= m {
                acc += sign * &p[m - g2];
            }
            k += 1;
        }
        p.push(acc);
    }
    p.pop().unwrap()
}

/// Scalar-like values a partition sum can accumulate ([`Rat`], `QPoly`).
pub trait Term: Clone + Zero + One {}
impl<T: Clone + Zero + One> Term for T {}

/// Computes `sum over partitions of n` of `weight(length) * prod factors`,
/// where the factor for a part `i` of multiplicity `m` is built up
/// incrementally: `factor_step(i, m, prev)` maps the factor value at
/// multiplicity `m-1` to the value at `m` (starting from one at `m = 0`).
///
/// Partitions whose partial product is exactly zero are pruned, so
/// characteristic-function factors cost nothing on the excluded branches.
pub fn fold_partitions<T, F, W>(
    n: usize,
    guard: SizeGuard,
    mut factor_step: F,
    mut weight: W,
) -> Result<T, PartitionError>
where
    T: Term,
    F: FnMut(usize, usize, &T) -> T,
    W: FnMut(usize) -> T,
{
    guard.admit(n)?;
    let mut total = T::zero();
    descend(n, n, &T::one(), 0, &mut total, &mut factor_step, &mut weight);
    Ok(total)
}

fn descend<T, F, W>(
    remaining: usize,
    max_part: usize,
    acc: &T,
    length: usize,
    total: &mut T,
    factor_step: &mut F,
    weight: &mut W,
) where
    T: Term,
    F: FnMut(usize, usize, &T) -> T,
    W: FnMut(usize) -> T,
{
    if remaining == 0 {
        let term = weight(length) * acc.clone();
        if total.is_zero() {
            *total = term;
        } else if !term.is_zero() {
            *total = total.clone() + term;
        }
        return;
    }
    for part in (1..=max_part.min(remaining)).rev() {
        let mut factor = T::one();
        for mult in 1..=remaining / part {
            factor = factor_step(part, mult, &factor);
            if factor.is_zero() {
                break; // all larger multiplicities of this part die too
            }
            let acc_here = acc.clone() * factor.clone();
            descend(
                remaining - part * mult,
                part - 1,
                &acc_here,
                length + mult,
                total,
                factor_step,
                weight,
            );
        }
    }
}

/// `(-1)^len * len!` and `(-1)^(len-1) * (len-1)!` show up in every
/// logarithmic partition sum; this builds the table of `k!` up to `n`.
pub fn factorials(n: usize) -> Vec<Rat> {
    let mut out = Vec::with_capacity(n + 1);
    let mut acc = Rat::one();
    out.push(acc.clone());
    for k in 1..=n {
        acc *= Rat::from_integer(BigInt::from(k));
        out.push(acc.clone());
    }
    out
}
