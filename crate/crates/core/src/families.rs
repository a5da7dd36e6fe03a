//! Catalog of named partition families: each entry pairs a product
//! exponent sequence with, where one is known, a closed form for the
//! series coefficients, so the two can be cross-checked through the
//! generic conversions.

use crate::number::{divisors, mobius, Rat};
use crate::partitions::partition_count;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::collections::BTreeSet;
use std::fmt;
use thiserror::Error;

use crate::series::{ExponentSeq, TruncatedSeries};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FamilyError {
    #[error("unknown family \"{0}\"")]
    UnknownName(String),
    #[error("family \"{name}\" requires parameters (e.g. \"{example}\")")]
    MissingParams { name: String, example: &'static str },
    #[error("family \"{name}\" takes no parameters")]
    UnexpectedParams { name: String },
    #[error("bad parameters for family \"{name}\": {detail}")]
    BadParams { name: String, detail: String },
}

/// A subset of the positive integers, either listed outright or described
/// by residue classes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SubsetSpec {
    Explicit(BTreeSet<u64>),
    Residues { modulus: u64, residues: BTreeSet<u64> },
}

impl SubsetSpec {
    pub fn contains(&self, n: u64) -> bool {
        match self {
            SubsetSpec::Explicit(set) => set.contains(&n),
            SubsetSpec::Residues { modulus, residues } => residues.contains(&(n % modulus)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum FamilyKind {
    Partitions,
    Subset(SubsetSpec),
    Overpartitions,
    KColor(u64),
    Plane,
    BrokenDiamond(u64),
    Compositions,
    Fibonacci,
}

/// A named family from the catalog; see [`FamilySpec::parse`] for the
/// accepted spellings.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilySpec {
    kind: FamilyKind,
}

impl FamilySpec {
    /// Parses `name` or `name:params`:
    ///
    /// * `partitions`, `overpartitions`, `plane`, `compositions`,
    ///   `fibonacci` — no parameters;
    /// * `kcolor:K`, `broken_diamond:K` — a positive color / shape count;
    /// * `subset:1,4,7` — an explicit set of allowed parts;
    /// * `subset:mod5=1,4` — parts in the residue classes 1, 4 mod 5.
    pub fn parse(text: &str) -> Result<Self, FamilyError> {
        let (name, params) = match text.split_once(':') {
            Some((n, p)) => (n.trim(), Some(p.trim())),
            None => (text.trim(), None),
        };
        let no_params = |kind: FamilyKind| match params {
            Some(_) => Err(FamilyError::UnexpectedParams { name: name.into() }),
            None => Ok(Self { kind }),
        };
        match name {
            "partitions" => no_params(FamilyKind::Partitions),
            "overpartitions" => no_params(FamilyKind::Overpartitions),
            "plane" => no_params(FamilyKind::Plane),
            "compositions" => no_params(FamilyKind::Compositions),
            "fibonacci" => no_params(FamilyKind::Fibonacci),
            "kcolor" => Ok(Self {
                kind: FamilyKind::KColor(parse_count(name, params, "kcolor:3")?),
            }),
            "broken_diamond" => Ok(Self {
                kind: FamilyKind::BrokenDiamond(parse_count(name, params, "broken_diamond:2")?),
            }),
            "subset" => {
                let params = params.ok_or(FamilyError::MissingParams {
                    name: name.into(),
                    example: "subset:1,4,7",
                })?;
                Ok(Self {
                    kind: FamilyKind::Subset(parse_subset(params)?),
                })
            }
            other => Err(FamilyError::UnknownName(other.into())),
        }
    }

    /// The base name without parameters.
    pub fn name(&self) -> &'static str {
        match self.kind {
            FamilyKind::Partitions => "partitions",
            FamilyKind::Subset(_) => "subset",
            FamilyKind::Overpartitions => "overpartitions",
            FamilyKind::KColor(_) => "kcolor",
            FamilyKind::Plane => "plane",
            FamilyKind::BrokenDiamond(_) => "broken_diamond",
            FamilyKind::Compositions => "compositions",
            FamilyKind::Fibonacci => "fibonacci",
        }
    }

    /// Product exponent `a_n`, `n >= 1`.
    pub fn exponent(&self, n: usize) -> Rat {
        assert!(n >= 1, "exponents are indexed from 1");
        match &self.kind {
            FamilyKind::Partitions => Rat::one(),
            FamilyKind::Subset(s) => {
                if s.contains(n as u64) {
                    Rat::one()
                } else {
                    Rat::zero()
                }
            }
            FamilyKind::Overpartitions => {
                if n % 2 == 1 {
                    Rat::from_integer(2.into())
                } else {
                    Rat::one()
                }
            }
            FamilyKind::KColor(k) => Rat::from_integer(BigInt::from(*k)),
            FamilyKind::Plane => Rat::from_integer(BigInt::from(n)),
            FamilyKind::BrokenDiamond(k) => {
                let m = 4 * k + 2;
                if n % 2 == 0 || n as u64 % m == 2 * k + 1 {
                    Rat::from_integer(2.into())
                } else {
                    Rat::from_integer(3.into())
                }
            }
            FamilyKind::Compositions => {
                mobius_transform(n, |d| BigInt::from((BigInt::one() << d) - 1u32))
            }
            FamilyKind::Fibonacci => mobius_transform(n, |d| lucas(d as u64)),
        }
    }

    /// Exponents `a_1..a_order`.
    pub fn exponents(&self, order: usize) -> ExponentSeq {
        ExponentSeq::from_fn(order, |n| self.exponent(n))
    }

    /// Closed-form series coefficient `r(n)` where one is known
    /// (partitions, compositions, fibonacci); `None` otherwise.
    pub fn coefficient(&self, n: usize) -> Option<Rat> {
        match self.kind {
            FamilyKind::Partitions => Some(Rat::from_integer(partition_count(n))),
            FamilyKind::Compositions => Some(if n == 0 {
                Rat::one()
            } else {
                Rat::from_integer(BigInt::one() << (n - 1))
            }),
            FamilyKind::Fibonacci => Some(Rat::from_integer(fibonacci(n as u64 + 1))),
            _ => None,
        }
    }

    /// Closed-form coefficients `r(0)..r(order)` where known.
    pub fn coefficients(&self, order: usize) -> Option<TruncatedSeries> {
        self.coefficient(0)?;
        TruncatedSeries::new((0..=order).map(|n| self.coefficient(n).unwrap()).collect()).ok()
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            FamilyKind::KColor(k) => write!(f, "kcolor:{k}"),
            FamilyKind::BrokenDiamond(k) => write!(f, "broken_diamond:{k}"),
            FamilyKind::Subset(SubsetSpec::Explicit(set)) => {
                write!(f, "subset:{}", join(set.iter()))
            }
            FamilyKind::Subset(SubsetSpec::Residues { modulus, residues }) => {
                write!(f, "subset:mod{modulus}={}", join(residues.iter()))
            }
            _ => write!(f, "{}", self.name()),
        }
    }
}

fn join<'a>(vals: impl Iterator<Item = &'a u64>) -> String {
    vals.map(u64::to_string).collect::<Vec<_>>().join(",")
}

fn parse_count(name: &str, params: Option<&str>, example: &'static str) -> Result<u64, FamilyError> {
    let params = params.ok_or(FamilyError::MissingParams {
        name: name.into(),
        example,
    })?;
    match params.parse::<u64>() {
        Ok(k) if k >= 1 => Ok(k),
        _ => Err(FamilyError::BadParams {
            name: name.into(),
            detail: format!("expected a positive integer, got \"{params}\""),
        }),
    }
}

fn parse_subset(params: &str) -> Result<SubsetSpec, FamilyError> {
    let bad = |detail: String| FamilyError::BadParams {
        name: "subset".into(),
        detail,
    };
    if let Some(rest) = params.strip_prefix("mod") {
        let (modulus, list) = rest
            .split_once('=')
            .ok_or_else(|| bad("expected \"modM=r1,r2,...\"".into()))?;
        let modulus: u64 = modulus
            .parse()
            .ok()
            .filter(|&m| m >= 1)
            .ok_or_else(|| bad(format!("bad modulus \"{modulus}\"")))?;
        let residues = parse_u64_list(list).map_err(|item| bad(format!("bad residue \"{item}\"")))?;
        if residues.is_empty() {
            return Err(bad("at least one residue is required".into()));
        }
        if let Some(r) = residues.iter().find(|&&r| r >= modulus) {
            return Err(bad(format!("residue {r} is not below the modulus {modulus}")));
        }
        Ok(SubsetSpec::Residues { modulus, residues })
    } else {
        let parts = parse_u64_list(params).map_err(|item| bad(format!("bad part \"{item}\"")))?;
        if parts.is_empty() {
            return Err(bad("at least one part is required".into()));
        }
        if parts.contains(&0) {
            return Err(bad("parts must be positive".into()));
        }
        Ok(SubsetSpec::Explicit(parts))
    }
}

fn parse_u64_list(text: &str) -> Result<BTreeSet<u64>, String> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<u64>().map_err(|_| s.to_string()))
        .collect()
}

/// `(1/n) sum_{d|n} mu(n/d) f(d)` as an exact rational.
fn mobius_transform(n: usize, f: impl Fn(usize) -> BigInt) -> Rat {
    let mut acc = BigInt::zero();
    for d in divisors(n as u64) {
        let mu = mobius(n as u64 / d);
        if mu != 0 {
            acc += BigInt::from(mu) * f(d as usize);
        }
    }
    Rat::new(acc, BigInt::from(n))
}

/// Lucas number `L_n` with `L_1 = 1`, `L_2 = 3`.
pub fn lucas(n: u64) -> BigInt {
    assert!(n >= 1, "Lucas numbers start at L_1");
    let (mut a, mut b) = (BigInt::from(1), BigInt::from(3));
    for _ in 1..n {
        let next = &a + &b;
        a = b;
        b = next;
    }
    a
}

/// Fibonacci number `F_n` with `F_0 = 0`, `F_1 = 1`.
pub fn fibonacci(n: u64) -> BigInt {
    let (mut a, mut b) = (BigInt::zero(), BigInt::one());
    for _ in 0..n {
        let next = &a + &b;
        a = b;
        b = next;
    }
    a
}

/// The cross-check battery: one instance of every family shape.
pub fn builtin_families() -> Vec<FamilySpec> {
    [
        "partitions",
        "overpartitions",
        "kcolor:2",
        "kcolor:3",
        "plane",
        "broken_diamond:1",
        "broken_diamond:2",
        "compositions",
        "fibonacci",
        "subset:mod5=1,4",
    ]
    .into_iter()
    .map(|s| FamilySpec::parse(s).expect("builtin families parse"))
    .collect()
}
