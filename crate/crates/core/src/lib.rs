//! Exact arithmetic for the two-way correspondence between a power series
//! `1 + sum_{n>=1} r(n) q^n` and its infinite-product form
//! `prod_{n>=1} (1-q^n)^(-a_n)`.
//!
//! Both directions are available by two independent routes — a triangular
//! recursion and a closed-form sum over partitions — so every conversion
//! can be cross-checked exactly. On top of the conversions sit the
//! q-analogue layer (Gaussian binomials, `r_q(n)`, and the bivariate
//! product identity), a catalog of named partition families, a small
//! expression language for entering series as rational functions in `q`,
//! and OEIS sequence identification with offline fixtures.
//!
//! All coefficient arithmetic is over arbitrary-precision rationals; there
//! are no floating-point tolerances anywhere.

pub mod convert;
pub mod expr;
pub mod families;
pub mod number;
pub mod oeis;
pub mod partitions;
pub mod qseries;
pub mod series;

pub use convert::{ConvertError, DSequence, Method};
pub use expr::{ExprAst, ExprError};
pub use families::{FamilyError, FamilySpec, SubsetSpec};
pub use number::Rat;
pub use oeis::{OeisClient, OeisError, SequenceMatch};
pub use partitions::{PartitionError, PartitionMults, SizeGuard};
pub use qseries::{BivariateTrunc, QPoly, QSeriesError};
pub use series::{ExponentSeq, LogCoeffs, SeriesError, TruncatedSeries};
