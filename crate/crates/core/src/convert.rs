//! Conversions between the series coefficients `r(n)` of
//! `1 + sum r(n) q^n` and the exponents `a_n` of `prod (1-q^n)^(-a_n)`.
//!
//! Each direction has two independent routes:
//!
//! * **recursive** — an `O(N^2)` triangular recursion seeded by the
//!   divisor sums `sum_{d|j} d a_d`;
//! * **direct** — a closed-form sum over the partitions of each index.
//!
//! The routes share no code, so running both (the default) cross-checks
//! every coefficient exactly.

use crate::number::{divisors, mobius, Rat};
use crate::partitions::{factorials, fold_partitions, PartitionError, SizeGuard};
use crate::series::{ExponentSeq, SeriesError, TruncatedSeries};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

/// Which conversion route(s) to run.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Method {
    Direct,
    Recursive,
    /// Run both and require exact agreement.
    #[default]
    Both,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ConvertError {
    #[error("direct and recursive methods disagree at n = {n}: {direct} vs {recursive}")]
    MethodMismatch {
        n: usize,
        direct: String,
        recursive: String,
    },
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Partition(#[from] PartitionError),
}

/// The helper sequence `D_1..D_N` of the series-to-exponents recursion:
/// `D_m = m r(m) - sum_{j=1..m-1} D_j r(m-j)`. Identically `m b(m)` where
/// `b` are the log coefficients, which the tests pin down.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DSequence {
    vals: Vec<Rat>,
}

impl DSequence {
    pub fn order(&self) -> usize {
        self.vals.len()
    }

    /// `D_m`, 1-based.
    pub fn val(&self, m: usize) -> &Rat {
        &self.vals[m - 1]
    }

    pub fn vals(&self) -> &[Rat] {
        &self.vals
    }
}

fn check_unit_constant(s: &TruncatedSeries) -> Result<(), ConvertError> {
    if !s.has_unit_constant() {
        return Err(SeriesError::NonUnitConstantTerm {
            got: s.coeff(0).to_string(),
        }
        .into());
    }
    Ok(())
}

/// Exponents to series by the recursion
/// `n r(n) = sum_{j=1..n} r(n-j) sum_{d|j} d a_d`, with `r(0) = 1`.
pub fn r_from_a_recursive(a: &ExponentSeq) -> TruncatedSeries {
    let n = a.order();
    // divisor-weighted exponent sums, 1-based at index j
    let mut s = vec![Rat::zero(); n + 1];
    for (j, sj) in s.iter_mut().enumerate().skip(1) {
        for d in divisors(j as u64) {
            *sj += Rat::from_integer(BigInt::from(d)) * a.exp(d as usize);
        }
    }
    let mut r = Vec::with_capacity(n + 1);
    r.push(Rat::one());
    for m in 1..=n {
        let mut acc = Rat::zero();
        for j in 1..=m {
            if !s[j].is_zero() {
                acc += &r[m - j] * &s[j];
            }
        }
        r.push(acc / Rat::from_integer(BigInt::from(m)));
    }
    TruncatedSeries::new(r).expect("order >= 1")
}

/// Series to exponents by the two-stage recursion
/// `D_m = m r(m) - sum_{j<m} D_j r(m-j)`, then
/// `n a_n = D_n - sum_{d|n, d<n} d a_d`.
///
/// Also returns the intermediate [`DSequence`].
pub fn a_from_r_recursive_with_d(
    r: &TruncatedSeries,
) -> Result<(ExponentSeq, DSequence), ConvertError> {
    check_unit_constant(r)?;
    let n = r.order();
    assert!(n >= 1, "series needs at least order 1 to have exponents");
    let mut d_seq: Vec<Rat> = Vec::with_capacity(n);
    for m in 1..=n {
        let mut acc = Rat::from_integer(BigInt::from(m)) * r.coeff(m);
        for j in 1..m {
            if !r.coeff(m - j).is_zero() {
                acc -= &d_seq[j - 1] * r.coeff(m - j);
            }
        }
        d_seq.push(acc);
    }
    let mut a: Vec<Rat> = Vec::with_capacity(n);
    for m in 1..=n {
        let mut acc = d_seq[m - 1].clone();
        for d in divisors(m as u64) {
            let d = d as usize;
            if d < m {
                acc -= Rat::from_integer(BigInt::from(d)) * &a[d - 1];
            }
        }
        a.push(acc / Rat::from_integer(BigInt::from(m)));
    }
    Ok((
        ExponentSeq::new(a).expect("order >= 1"),
        DSequence { vals: d_seq },
    ))
}

pub fn a_from_r_recursive(r: &TruncatedSeries) -> Result<ExponentSeq, ConvertError> {
    a_from_r_recursive_with_d(r).map(|(a, _)| a)
}

/// Exponents to series by the partition sum
/// `r(n) = sum over partitions of n` of `prod (a_i)_{m_i} / m_i!`
/// with `(a)_k` the rising factorial.
pub fn r_from_a_direct(a: &ExponentSeq, guard: SizeGuard) -> Result<TruncatedSeries, ConvertError> {
    let n = a.order();
    let mut out = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let coeff = fold_partitions(
            k,
            guard,
            |part, mult, prev: &Rat| {
                // incremental: multiply by (a + mult - 1) / mult
                prev * (a.exp(part) + Rat::from_integer(BigInt::from(mult as i64 - 1)))
                    / Rat::from_integer(BigInt::from(mult))
            },
            |_| Rat::one(),
        )?;
        out.push(coeff);
    }
    Ok(TruncatedSeries::new(out).expect("nonempty"))
}

/// The inner partition sum of the direct exponent formula:
/// `sum over partitions of d` of `(-1)^{len-1} (len-1)! prod r(i)^{m_i}/m_i!`.
///
/// Equals the log coefficient `b(d)` of the product form; the tests pin
/// `d * log_sum(d)` to `2^d - 1` and to the Lucas numbers for the series
/// those values characterize.
pub fn log_sum_from_r(
    r: &TruncatedSeries,
    d: usize,
    guard: SizeGuard,
) -> Result<Rat, ConvertError> {
    check_unit_constant(r)?;
    let fact = factorials(d.max(1));
    let val = fold_partitions(
        d,
        guard,
        |part, mult, prev: &Rat| prev * r.coeff(part) / Rat::from_integer(BigInt::from(mult)),
        |len| {
            if len == 0 {
                // empty partition only arises for d = 0, where the sum is 0
                Rat::zero()
            } else if len % 2 == 1 {
                fact[len - 1].clone()
            } else {
                -fact[len - 1].clone()
            }
        },
    )?;
    Ok(val)
}

/// Series to exponents by Möbius inversion of the partition sum:
/// `a_n = (1/n) sum_{d|n} mu(n/d) d log_sum(d)`.
pub fn a_from_r_direct(r: &TruncatedSeries, guard: SizeGuard) -> Result<ExponentSeq, ConvertError> {
    check_unit_constant(r)?;
    let n = r.order();
    assert!(n >= 1, "series needs at least order 1 to have exponents");
    // log_sum(d) is reused by every multiple of d; compute each value once
    let mut log_sums = vec![Rat::zero(); n + 1];
    for (d, slot) in log_sums.iter_mut().enumerate().skip(1) {
        *slot = log_sum_from_r(r, d, guard)?;
    }
    let mut a = Vec::with_capacity(n);
    for m in 1..=n {
        let mut acc = Rat::zero();
        for d in divisors(m as u64) {
            let mu = mobius(m as u64 / d);
            if mu != 0 {
                acc += Rat::from_integer(BigInt::from(mu) * BigInt::from(d)) * &log_sums[d as usize];
            }
        }
        a.push(acc / Rat::from_integer(BigInt::from(m)));
    }
    Ok(ExponentSeq::new(a).expect("order >= 1"))
}

/// Checks the partition identity tying the log sum to its derivative: for
/// `1 + sum r(n) q^n` with unit constant term and each `n = 1..=max_n`,
///
/// `n * sum_{parts of n} (-1)^{len-1}(len-1)! prod r(i)^{m_i}/m_i!`
/// `= sum_{j=1..n} j r(j) * sum_{parts of n-j} (-1)^len len! prod r(i)^{m_i}/m_i!`.
///
/// The right-hand inner sum is the reciprocal-series coefficient, so this
/// exercises both partition formulas at once.
pub fn check_lemma(
    r: &TruncatedSeries,
    max_n: usize,
    guard: SizeGuard,
) -> Result<bool, ConvertError> {
    check_unit_constant(r)?;
    assert!(max_n <= r.order(), "lemma check needs coefficients up to max_n");
    let fact = factorials(max_n);
    // reciprocal coefficients by the signed-length partition sum
    let mut recip = Vec::with_capacity(max_n + 1);
    for k in 0..=max_n {
        let coeff = fold_partitions(
            k,
            guard,
            |part, mult, prev: &Rat| prev * r.coeff(part) / Rat::from_integer(BigInt::from(mult)),
            |len| {
                if len % 2 == 0 {
                    fact[len].clone()
                } else {
                    -fact[len].clone()
                }
            },
        )?;
        recip.push(coeff);
    }
    for n in 1..=max_n {
        let lhs = Rat::from_integer(BigInt::from(n)) * log_sum_from_r(r, n, guard)?;
        let mut rhs = Rat::zero();
        for j in 1..=n {
            if !r.coeff(j).is_zero() {
                rhs += Rat::from_integer(BigInt::from(j)) * r.coeff(j) * &recip[n - j];
            }
        }
        if lhs != rhs {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Exponents to series by the selected route; `Both` cross-checks the two.
pub fn series_from_exponents(
    a: &ExponentSeq,
    method: Method,
    guard: SizeGuard,
) -> Result<TruncatedSeries, ConvertError> {
    match method {
        Method::Recursive => Ok(r_from_a_recursive(a)),
        Method::Direct => r_from_a_direct(a, guard),
        Method::Both => {
            let rec = r_from_a_recursive(a);
            let dir = r_from_a_direct(a, guard)?;
            for n in 0..=a.order() {
                if rec.coeff(n) != dir.coeff(n) {
                    return Err(ConvertError::MethodMismatch {
                        n,
                        direct: dir.coeff(n).to_string(),
                        recursive: rec.coeff(n).to_string(),
                    });
                }
            }
            Ok(rec)
        }
    }
}

/// Series to exponents by the selected route; `Both` cross-checks the two.
pub fn exponents_from_series(
    r: &TruncatedSeries,
    method: Method,
    guard: SizeGuard,
) -> Result<ExponentSeq, ConvertError> {
    match method {
        Method::Recursive => a_from_r_recursive(r),
        Method::Direct => a_from_r_direct(r, guard),
        Method::Both => {
            let rec = a_from_r_recursive(r)?;
            let dir = a_from_r_direct(r, guard)?;
            for n in 1..=r.order() {
                if rec.exp(n) != dir.exp(n) {
                    return Err(ConvertError::MethodMismatch {
                        n,
                        direct: dir.exp(n).to_string(),
                        recursive: rec.exp(n).to_string(),
                    });
                }
            }
            Ok(rec)
        }
    }
}
