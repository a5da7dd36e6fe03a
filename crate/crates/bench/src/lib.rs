//! Shared inputs for the criterion benchmarks.

use qfactor_core::convert::r_from_a_direct;
use qfactor_core::families::FamilySpec;
use qfactor_core::{ExponentSeq, Rat, SizeGuard, TruncatedSeries};

/// Fibonacci-family exponents up to `order`; a representative input whose
/// values grow but stay modest, so timings reflect the algorithms rather
/// than bignum carries.
pub fn fibonacci_exponents(order: usize) -> ExponentSeq {
    FamilySpec::parse("fibonacci").unwrap().exponents(order)
}

/// The series generated by [`fibonacci_exponents`].
pub fn fibonacci_series(order: usize) -> TruncatedSeries {
    r_from_a_direct(&fibonacci_exponents(order), SizeGuard::default()).unwrap()
}

/// A dense series with small rational coefficients, for reciprocal routes.
pub fn rational_series(order: usize) -> TruncatedSeries {
    TruncatedSeries::from_fn(order, |n| {
        if n == 0 {
            Rat::from_integer(1.into())
        } else {
            Rat::new((n as i64 % 5 - 2).into(), (1 + n as i64 % 3).into())
        }
    })
}
