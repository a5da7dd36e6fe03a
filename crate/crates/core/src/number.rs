//! Exact scalar arithmetic and elementary number-theoretic helpers.
//!
//! Every coefficient and exponent in this crate is a [`Rat`]: an
//! arbitrary-precision rational kept in canonical form (reduced, positive
//! denominator) after every operation. Working over the rationals means
//! every identity downstream can be checked with exact equality instead of
//! a tolerance. Rational inputs always produce rational outputs here: the
//! divisor-sum inversion only ever divides by integers, so no conversion
//! can leave the field.

use num_bigint::BigInt;
use num_traits::{One, Zero};

/// Arbitrary-precision rational scalar, canonical after every operation.
pub type Rat = num_rational::BigRational;

/// `p/q` as a [`Rat`]. Panics if `q == 0`.
pub fn rat(p: i64, q: i64) -> Rat {
    Rat::new(BigInt::from(p), BigInt::from(q))
}

/// The integer `n` as a [`Rat`].
pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Rising factorial `(a)_k = a (a+1) (a+2) ... (a+k-1)`, with `(a)_0 = 1`
/// as the empty product. Note `(0)_k = 0` for `k >= 1` and `(1)_k = k!`.
pub fn rising_factorial(a: &Rat, k: usize) -> Rat {
    let mut acc = Rat::one();
    let mut term = a.clone();
    for _ in 0..k {
        if term.is_zero() {
            return Rat::zero();
        }
        acc *= &term;
        term += Rat::one();
    }
    acc
}

/// Möbius function: 0 if `n` has a squared prime factor, otherwise
/// `(-1)^(number of distinct prime factors)`.
///
/// Computed by trial division; inputs stay small in this crate.
/// Panics if `n == 0`.
pub fn mobius(n: u64) -> i8 {
    assert!(n > 0, "mobius is undefined at 0");
    let mut n = n;
    let mut factors = 0u32;
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            factors += 1;
        }
        p += 1;
    }
    if n > 1 {
        factors += 1;
    }
    if factors % 2 == 0 {
        1
    } else {
        -1
    }
}

/// All divisors of `n`, ascending. Panics if `n == 0`.
pub fn divisors(n: u64) -> Vec<u64> {
    assert!(n > 0, "divisors is undefined at 0");
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    large.reverse();
    small.extend(large);
    small
}
