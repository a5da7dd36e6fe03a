//! Truncated formal power series in `q` with exact rational coefficients,
//! exponent sequences for the product form `prod (1-q^n)^(-a_n)`, and the
//! log-coefficient sequence linking the two.
//!
//! Every series carries one explicit truncation order `N` fixed for the
//! whole computation; binary operations refuse mixed orders instead of
//! silently truncating to the shorter one.

use crate::number::{divisors, mobius, Rat};
use crate::partitions::{factorials, fold_partitions, PartitionError, SizeGuard};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SeriesError {
    #[error("series orders differ ({left} vs {right}); operands must share one truncation order")]
    OrderMismatch { left: usize, right: usize },
    #[error("constant term is zero; the series has no reciprocal")]
    ZeroConstantTerm,
    #[error("constant term is {got}, expected 1")]
    NonUnitConstantTerm { got: String },
    #[error("series must have at least the constant term")]
    Empty,
    #[error(transparent)]
    Partition(#[from] PartitionError),
}

/// Coefficients `c_0..c_N` of a power series truncated at order `N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSeries {
    coeffs: Vec<Rat>,
}

impl TruncatedSeries {
    /// Wraps `c_0..c_N`; the vector length is `N + 1` and must be nonzero.
    pub fn new(coeffs: Vec<Rat>) -> Result<Self, SeriesError> {
        if coeffs.is_empty() {
            return Err(SeriesError::Empty);
        }
        Ok(Self { coeffs })
    }

    /// The constant series 1 at order `order`.
    pub fn one(order: usize) -> Self {
        let mut coeffs = vec![Rat::zero(); order + 1];
        coeffs[0] = Rat::one();
        Self { coeffs }
    }

    /// The constant series `c` at order `order`.
    pub fn constant(c: Rat, order: usize) -> Self {
        let mut coeffs = vec![Rat::zero(); order + 1];
        coeffs[0] = c;
        Self { coeffs }
    }

    /// `c * q^degree` truncated at `order` (zero series if `degree > order`).
    pub fn monomial(c: Rat, degree: usize, order: usize) -> Self {
        let mut coeffs = vec![Rat::zero(); order + 1];
        if degree <= order {
            coeffs[degree] = c;
        }
        Self { coeffs }
    }

    /// Builds `c_n = f(n)` for `n = 0..=order`.
    pub fn from_fn(order: usize, f: impl FnMut(usize) -> Rat) -> Self {
        Self {
            coeffs: (0..=order).map(f).collect(),
        }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, n: usize) -> &Rat {
        &self.coeffs[n]
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn has_unit_constant(&self) -> bool {
        self.coeffs[0].is_one()
    }

    fn check_same_order(&self, other: &Self) -> Result<(), SeriesError> {
        if self.order() != other.order() {
            return Err(SeriesError::OrderMismatch {
                left: self.order(),
                right: other.order(),
            });
        }
        Ok(())
    }

    /// Cauchy product truncated at the shared order.
    pub fn mul(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check_same_order(other)?;
        let n = self.order();
        let mut out = vec![Rat::zero(); n + 1];
        for (i, ci) in self.coeffs.iter().enumerate() {
            if ci.is_zero() {
                continue;
            }
            for (j, cj) in other.coeffs.iter().take(n + 1 - i).enumerate() {
                if !cj.is_zero() {
                    out[i + j] += ci * cj;
                }
            }
        }
        Ok(Self { coeffs: out })
    }

    pub fn add(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check_same_order(other)?;
        Ok(Self {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check_same_order(other)?;
        Ok(Self {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    pub fn neg(&self) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(Rat::is_zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Rat::is_zero)
    }
}

/// Exponents `a_1..a_N` of the product form `prod_{n=1..N} (1-q^n)^(-a_n)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExponentSeq {
    exps: Vec<Rat>,
}

impl ExponentSeq {
    /// Wraps `a_1..a_N`; `N >= 1`.
    pub fn new(exps: Vec<Rat>) -> Result<Self, SeriesError> {
        if exps.is_empty() {
            return Err(SeriesError::Empty);
        }
        Ok(Self { exps })
    }

    /// Builds `a_n = f(n)` for `n = 1..=order`.
    pub fn from_fn(order: usize, mut f: impl FnMut(usize) -> Rat) -> Self {
        assert!(order >= 1, "exponent sequence needs order >= 1");
        Self {
            exps: (1..=order).map(|n| f(n)).collect(),
        }
    }

    pub fn order(&self) -> usize {
        self.exps.len()
    }

    /// `a_n`, 1-based.
    pub fn exp(&self, n: usize) -> &Rat {
        &self.exps[n - 1]
    }

    pub fn exps(&self) -> &[Rat] {
        &self.exps
    }

    /// Exponents as nonnegative integers, or `None` at the first entry that
    /// is negative or non-integer. Used by the q-analogue layer.
    pub fn as_nonneg_integers(&self) -> Option<Vec<u64>> {
        self.exps
            .iter()
            .map(|a| {
                if a.is_integer() && !a.is_negative() {
                    a.to_integer().try_into().ok()
                } else {
                    None
                }
            })
            .collect()
    }
}

/// Log coefficients `b_1..b_N` of the product: `n b(n) = sum_{d|n} d a_d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LogCoeffs {
    vals: Vec<Rat>,
}

impl LogCoeffs {
    pub fn new(vals: Vec<Rat>) -> Result<Self, SeriesError> {
        if vals.is_empty() {
            return Err(SeriesError::Empty);
        }
        Ok(Self { vals })
    }

    pub fn order(&self) -> usize {
        self.vals.len()
    }

    /// `b(n)`, 1-based.
    pub fn val(&self, n: usize) -> &Rat {
        &self.vals[n - 1]
    }

    pub fn vals(&self) -> &[Rat] {
        &self.vals
    }
}

/// Reciprocal by the triangular convolution solve:
/// `t_0 = 1/c_0`, `t_n = -(1/c_0) sum_{k=1..n} c_k t_{n-k}`.
///
/// This is the fast path and the oracle for
/// [`reciprocal_partition_formula`].
pub fn reciprocal_convolution(s: &TruncatedSeries) -> Result<TruncatedSeries, SeriesError> {
    if s.coeffs[0].is_zero() {
        return Err(SeriesError::ZeroConstantTerm);
    }
    let n = s.order();
    let c0_inv = Rat::one() / &s.coeffs[0];
    let mut t = Vec::with_capacity(n + 1);
    t.push(c0_inv.clone());
    for m in 1..=n {
        let mut acc = Rat::zero();
        for k in 1..=m {
            if !s.coeffs[k].is_zero() {
                acc += &s.coeffs[k] * &t[m - k];
            }
        }
        t.push(-acc * &c0_inv);
    }
    TruncatedSeries::new(t)
}

/// Reciprocal of a series with unit constant term by the partition sum:
/// the coefficient of `q^k` in `1/f` is
/// `sum over partitions of k` of `(-1)^len len! prod c_i^{m_i} / m_i!`.
///
/// Slower than [`reciprocal_convolution`] (p(k) terms per coefficient) but
/// kept as an independent route; the two are cross-checked in tests.
pub fn reciprocal_partition_formula(
    s: &TruncatedSeries,
    guard: SizeGuard,
) -> Result<TruncatedSeries, SeriesError> {
    if !s.has_unit_constant() {
        return Err(SeriesError::NonUnitConstantTerm {
            got: s.coeffs[0].to_string(),
        });
    }
    let n = s.order();
    let fact = factorials(n);
    let mut out = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let coeff = fold_partitions(
            k,
            guard,
            |part, mult, prev: &Rat| prev * &s.coeffs[part] / Rat::from_integer(BigInt::from(mult)),
            |len| {
                if len % 2 == 0 {
                    fact[len].clone()
                } else {
                    -fact[len].clone()
                }
            },
        )?;
        out.push(coeff);
    }
    TruncatedSeries::new(out)
}

/// Expands `prod_{n=1..N} (1-q^n)^(-a_n)` truncated at `N`.
///
/// Each factor is the binomial series `sum_k C_n(k) q^{nk}` with
/// `C_n(k) = (a_n)_k / k!`, so factor `n` touches only multiples of `n` and
/// the whole expansion is `O(N^2 log N)` coefficient operations.
pub fn product_from_exponents(a: &ExponentSeq) -> TruncatedSeries {
    let n = a.order();
    let mut acc = TruncatedSeries::one(n);
    for j in 1..=n {
        let aj = a.exp(j);
        if aj.is_zero() {
            continue;
        }
        // factor coefficients at q^{j k}, built incrementally
        let mut c = Rat::one();
        let mut factor: Vec<(usize, Rat)> = vec![(0, c.clone())];
        let mut k = 1usize;
        while j * k <= n {
            c = c * (aj + Rat::from_integer(BigInt::from(k as i64 - 1)))
                / Rat::from_integer(BigInt::from(k));
            if !c.is_zero() {
                factor.push((j * k, c.clone()));
            }
            k += 1;
        }
        let mut next = vec![Rat::zero(); n + 1];
        for (deg, fc) in &factor {
            for (i, ci) in acc.coeffs.iter().take(n + 1 - deg).enumerate() {
                if !ci.is_zero() {
                    next[deg + i] += fc * ci;
                }
            }
        }
        acc = TruncatedSeries { coeffs: next };
    }
    acc
}

/// `b(n) = (1/n) sum_{d|n} d a_d` for `n = 1..=N`.
pub fn log_coeffs_from_exponents(a: &ExponentSeq) -> LogCoeffs {
    let n = a.order();
    let vals = (1..=n)
        .map(|m| {
            let mut acc = Rat::zero();
            for d in divisors(m as u64) {
                acc += Rat::from_integer(BigInt::from(d)) * a.exp(d as usize);
            }
            acc / Rat::from_integer(BigInt::from(m))
        })
        .collect();
    LogCoeffs { vals }
}

/// Möbius inversion of [`log_coeffs_from_exponents`]:
/// `a_n = (1/n) sum_{d|n} mu(n/d) d b(d)`.
pub fn exponents_from_log_coeffs(b: &LogCoeffs) -> ExponentSeq {
    let n = b.order();
    let exps = (1..=n)
        .map(|m| {
            let mut acc = Rat::zero();
            for d in divisors(m as u64) {
                let mu = mobius(m as u64 / d);
                if mu != 0 {
                    acc += Rat::from_integer(BigInt::from(mu) * BigInt::from(d)) * b.val(d as usize);
                }
            }
            acc / Rat::from_integer(BigInt::from(m))
        })
        .collect();
    ExponentSeq { exps }
}
