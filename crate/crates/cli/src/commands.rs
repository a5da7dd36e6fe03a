//! Command implementations and the exit-code policy.

use crate::report::{CheckEntry, OeisEntry, Report, ValueEntry};
use crate::CommandArgs;
use num_bigint::BigInt;
use num_traits::One;
use qfactor_core::convert::{
    a_from_r_direct, a_from_r_recursive, check_lemma, exponents_from_series, log_sum_from_r,
    series_from_exponents,
};
use qfactor_core::expr::expand_str;
use qfactor_core::families::{builtin_families, lucas, FamilySpec};
use qfactor_core::oeis::{OeisClient, ENDPOINT_ENV_VAR};
use qfactor_core::qseries::{r_q, verify_theorem3, QPoly};
use qfactor_core::series::product_from_exponents;
use qfactor_core::{
    ConvertError, ExponentSeq, Method, OeisError, QSeriesError, Rat, SizeGuard, TruncatedSeries,
};
use std::fmt;
use std::str::FromStr;

#[derive(Debug)]
pub enum CliError {
    /// Bad input or arguments: exit 2.
    Usage(String),
    /// A mathematical cross-check failed: exit 3.
    Math(String),
    /// The network was needed and unavailable: exit 4.
    Network(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Math(_) => 3,
            CliError::Network(_) => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Math(m) | CliError::Network(m) => write!(f, "{m}"),
        }
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

impl From<ConvertError> for CliError {
    fn from(e: ConvertError) -> Self {
        match e {
            ConvertError::MethodMismatch { .. } => CliError::Math(e.to_string()),
            other => usage(other.to_string()),
        }
    }
}

impl From<QSeriesError> for CliError {
    fn from(e: QSeriesError) -> Self {
        usage(e.to_string())
    }
}

impl From<OeisError> for CliError {
    fn from(e: OeisError) -> Self {
        match e {
            OeisError::Network { .. } => CliError::Network(e.to_string()),
            other => usage(other.to_string()),
        }
    }
}

pub struct Outcome {
    pub stdout: String,
    pub code: u8,
}

#[derive(Clone, Copy)]
pub enum Kind {
    Prodmake,
    Seriesmake,
    Qanalogue,
    Verify,
}

pub fn run(kind: Kind, args: CommandArgs) -> Result<Outcome, CliError> {
    if args.order < 1 {
        return Err(usage("--order must be at least 1"));
    }
    match kind {
        Kind::Prodmake => prodmake(args),
        Kind::Seriesmake => seriesmake(args),
        Kind::Qanalogue => qanalogue(args),
        Kind::Verify => verify(args),
    }
}

fn guard_of(args: &CommandArgs) -> SizeGuard {
    args.max_partition_size
        .map(SizeGuard::new)
        .unwrap_or_default()
}

/// The one input source, as given on the command line.
enum Input {
    Series(TruncatedSeries),
    Exps(ExponentSeq),
    Family(FamilySpec),
    None,
}

fn resolve_input(args: &CommandArgs) -> Result<Input, CliError> {
    let order = args.order;
    match (&args.expr, &args.coeffs, &args.exps, &args.family) {
        (Some(text), None, None, None) => {
            let s = expand_str(text, order).map_err(|e| usage(e.to_string()))?;
            Ok(Input::Series(s))
        }
        (None, Some(list), None, None) => {
            let coeffs = parse_rat_list(list, "coefficient")?;
            if coeffs.len() < order + 1 {
                return Err(usage(format!(
                    "--coeffs supplies {} values but --order {order} needs {}",
                    coeffs.len(),
                    order + 1
                )));
            }
            let s = TruncatedSeries::new(coeffs[..=order].to_vec()).expect("nonempty");
            Ok(Input::Series(s))
        }
        (None, None, Some(list), None) => {
            let exps = parse_rat_list(list, "exponent")?;
            if exps.len() < order {
                return Err(usage(format!(
                    "--exps supplies {} values but --order {order} needs {order}",
                    exps.len()
                )));
            }
            let a = ExponentSeq::new(exps[..order].to_vec()).expect("nonempty");
            Ok(Input::Exps(a))
        }
        (None, None, None, Some(name)) => {
            let f = FamilySpec::parse(name).map_err(|e| usage(e.to_string()))?;
            Ok(Input::Family(f))
        }
        (None, None, None, None) => Ok(Input::None),
        // clap's input group normally rejects this before we get here
        _ => Err(usage("give exactly one of --expr, --coeffs, --exps, --family")),
    }
}

fn parse_rat_list(text: &str, what: &str) -> Result<Vec<Rat>, CliError> {
    let items: Vec<&str> = text.split(',').map(str::trim).collect();
    if items.iter().all(|s| s.is_empty()) {
        return Err(usage(format!("empty {what} list")));
    }
    items
        .into_iter()
        .map(|item| {
            Rat::from_str(item)
                .map_err(|e| usage(format!("bad {what} \"{item}\": {e}")))
        })
        .collect()
}

/// Closed-form coefficients when the family has them, otherwise the
/// product expansion of its exponents.
fn family_series(f: &FamilySpec, order: usize) -> TruncatedSeries {
    f.coefficients(order)
        .unwrap_or_else(|| product_from_exponents(&f.exponents(order)))
}

fn oeis_client(args: &CommandArgs) -> OeisClient {
    let mut client = if args.offline {
        OeisClient::offline()
    } else {
        OeisClient::online()
    };
    if let Some(dir) = OeisClient::cache_dir_from_env() {
        client = client.with_cache_dir(dir);
    }
    if let Some(endpoint) = std::env::var_os(ENDPOINT_ENV_VAR) {
        client = client.with_endpoint(endpoint.to_string_lossy().into_owned());
    }
    client
}

fn lookup_oeis(args: &CommandArgs, terms: &[Rat]) -> Result<Option<Vec<OeisEntry>>, CliError> {
    if !args.oeis {
        return Ok(None);
    }
    let matches = oeis_client(args).lookup_rationals(terms)?;
    Ok(Some(
        matches
            .into_iter()
            .map(|m| OeisEntry {
                id: m.oeis_id,
                name: m.name,
                matched_prefix_length: m.matched_prefix_length,
            })
            .collect(),
    ))
}

fn method_check(method: Method) -> Option<CheckEntry> {
    matches!(method, Method::Both).then(|| CheckEntry {
        name: "method_agreement".into(),
        passed: true,
        detail: Some("direct and recursive routes agree exactly".into()),
    })
}

fn finish(args: &CommandArgs, report: Report) -> Result<Outcome, CliError> {
    let code = if report.all_checks_passed() { 0 } else { 3 };
    Ok(Outcome {
        stdout: report.render(args.format),
        code,
    })
}

fn prodmake(args: CommandArgs) -> Result<Outcome, CliError> {
    let guard = guard_of(&args);
    let method = Method::from(args.method);
    let series = match resolve_input(&args)? {
        Input::Series(s) => s,
        Input::Family(f) => family_series(&f, args.order),
        Input::Exps(_) => {
            return Err(usage("prodmake expects a series: use --expr, --coeffs, or --family"))
        }
        Input::None => {
            return Err(usage("an input source is required: --expr, --coeffs, or --family"))
        }
    };
    let exponents = exponents_from_series(&series, method, guard)?;
    let values = (1..=args.order)
        .map(|n| ValueEntry {
            n,
            value: exponents.exp(n).to_string(),
        })
        .collect();
    let oeis = lookup_oeis(&args, exponents.exps())?;
    let report = Report {
        command: "prodmake",
        order: args.order,
        values,
        checks: method_check(method).into_iter().collect(),
        oeis,
    };
    finish(&args, report)
}

fn seriesmake(args: CommandArgs) -> Result<Outcome, CliError> {
    let guard = guard_of(&args);
    let method = Method::from(args.method);
    let exponents = match resolve_input(&args)? {
        Input::Exps(a) => a,
        Input::Family(f) => f.exponents(args.order),
        Input::Series(_) => {
            return Err(usage("seriesmake expects exponents: use --exps or --family"))
        }
        Input::None => return Err(usage("an input source is required: --exps or --family")),
    };
    let series = series_from_exponents(&exponents, method, guard)?;
    let values = (0..=args.order)
        .map(|n| ValueEntry {
            n,
            value: series.coeff(n).to_string(),
        })
        .collect();
    let oeis = lookup_oeis(&args, series.coeffs())?;
    let report = Report {
        command: "seriesmake",
        order: args.order,
        values,
        checks: method_check(method).into_iter().collect(),
        oeis,
    };
    finish(&args, report)
}

fn render_poly(p: &QPoly, limit: Option<usize>) -> String {
    match (limit, p.degree()) {
        (Some(d), Some(degree)) if degree > d => {
            let shown = QPoly::new(p.coeffs()[..=d].to_vec());
            format!("{shown} + O(q^{})", d + 1)
        }
        _ => p.to_string(),
    }
}

fn qanalogue(args: CommandArgs) -> Result<Outcome, CliError> {
    let guard = guard_of(&args);
    if args.oeis {
        return Err(usage("--oeis applies to prodmake and seriesmake only"));
    }
    let exponents = match resolve_input(&args)? {
        Input::Exps(a) => a,
        Input::Family(f) => f.exponents(args.order),
        Input::Series(_) => {
            return Err(usage("qanalogue expects exponents: use --exps or --family"))
        }
        Input::None => return Err(usage("an input source is required: --exps or --family")),
    };
    let polys = (0..=args.order)
        .map(|n| r_q(n, &exponents, guard))
        .collect::<Result<Vec<_>, _>>()?;
    let values = polys
        .iter()
        .enumerate()
        .map(|(n, p)| ValueEntry {
            n,
            value: render_poly(p, args.q_display_limit),
        })
        .collect();

    let mut checks = Vec::new();
    let verified = verify_theorem3(&exponents, args.order, guard)?;
    checks.push(CheckEntry {
        name: "theorem_product_identity".into(),
        passed: verified,
        detail: Some(format!(
            "sum and product sides compared through z^{}",
            args.order
        )),
    });
    let series = series_from_exponents(&exponents, Method::from(args.method), guard)?;
    let at_one_ok = (0..=args.order).all(|n| &polys[n].eval_one() == series.coeff(n));
    checks.push(CheckEntry {
        name: "q_at_1_matches_series".into(),
        passed: at_one_ok,
        detail: Some("each r_q(n) evaluated at q = 1 equals r(n)".into()),
    });

    let report = Report {
        command: "qanalogue",
        order: args.order,
        values,
        checks,
        oeis: None,
    };
    finish(&args, report)
}

fn verify(args: CommandArgs) -> Result<Outcome, CliError> {
    let guard = guard_of(&args);
    if args.oeis {
        return Err(usage("--oeis applies to prodmake and seriesmake only"));
    }
    let mut checks = Vec::new();
    match resolve_input(&args)? {
        Input::None => {
            for f in builtin_families() {
                family_battery(&f, args.order, guard, &mut checks)?;
            }
        }
        Input::Family(f) => family_battery(&f, args.order, guard, &mut checks)?,
        Input::Series(s) => series_battery("series", &s, args.order, guard, &mut checks)?,
        Input::Exps(a) => {
            let s = series_from_exponents(&a, Method::Both, guard)?;
            series_battery("series", &s, args.order, guard, &mut checks)?;
        }
    }
    let report = Report {
        command: "verify",
        order: args.order,
        values: Vec::new(),
        checks,
        oeis: None,
    };
    finish(&args, report)
}

/// Identity battery for one series: the lemma, direct/recursive agreement,
/// and the r -> a -> r round trip.
fn series_battery(
    label: &str,
    series: &TruncatedSeries,
    order: usize,
    guard: SizeGuard,
    checks: &mut Vec<CheckEntry>,
) -> Result<(), CliError> {
    let lemma = check_lemma(series, order, guard)?;
    checks.push(CheckEntry {
        name: format!("{label}:lemma"),
        passed: lemma,
        detail: Some(format!("n = 1..{order}")),
    });

    let direct = a_from_r_direct(series, guard)?;
    let recursive = a_from_r_recursive(series)?;
    let agree = direct == recursive;
    checks.push(CheckEntry {
        name: format!("{label}:method_agreement"),
        passed: agree,
        detail: Some("direct vs recursive exponents".into()),
    });

    let back = series_from_exponents(&recursive, Method::Both, guard)?;
    checks.push(CheckEntry {
        name: format!("{label}:roundtrip"),
        passed: &back == series,
        detail: Some("series -> exponents -> series".into()),
    });
    Ok(())
}

/// The series battery plus the family's own closed forms.
fn family_battery(
    f: &FamilySpec,
    order: usize,
    guard: SizeGuard,
    checks: &mut Vec<CheckEntry>,
) -> Result<(), CliError> {
    let label = f.to_string();
    let series = family_series(f, order);
    series_battery(&label, &series, order, guard, checks)?;

    // the catalog exponents must be exactly what conversion recovers
    let recovered = exponents_from_series(&series, Method::Both, guard)?;
    checks.push(CheckEntry {
        name: format!("{label}:exponent_closed_form"),
        passed: recovered == f.exponents(order),
        detail: Some(format!("catalog exponents vs conversion, n = 1..{order}")),
    });

    if let Some(closed) = f.coefficients(order) {
        let expanded = product_from_exponents(&f.exponents(order));
        checks.push(CheckEntry {
            name: format!("{label}:coefficient_closed_form"),
            passed: expanded == closed,
            detail: Some(format!("product expansion vs closed form, n = 0..{order}")),
        });
    }

    match f.name() {
        "compositions" => {
            let passed = (1..=order).all(|d| {
                let ls = log_sum_from_r(&series, d, guard);
                matches!(ls, Ok(v) if v == Rat::new((BigInt::one() << d) - 1, BigInt::from(d)))
            });
            checks.push(CheckEntry {
                name: format!("{label}:log_sum_mersenne"),
                passed,
                detail: Some(format!("d * log_sum(d) = 2^d - 1, d = 1..{order}")),
            });
        }
        "fibonacci" => {
            let passed = (1..=order).all(|d| {
                let ls = log_sum_from_r(&series, d, guard);
                matches!(ls, Ok(v) if v == Rat::new(lucas(d as u64), BigInt::from(d)))
            });
            checks.push(CheckEntry {
                name: format!("{label}:log_sum_lucas"),
                passed,
                detail: Some(format!("d * log_sum(d) = L_d, d = 1..{order}")),
            });
        }
        _ => {}
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_follow_the_contract() {
        assert_eq!(usage("x").code(), 2);
        assert_eq!(CliError::Math("x".into()).code(), 3);
        assert_eq!(CliError::Network("x".into()).code(), 4);
    }

    #[test]
    fn core_errors_map_to_the_right_codes() {
        let mismatch = ConvertError::MethodMismatch {
            n: 3,
            direct: "1".into(),
            recursive: "2".into(),
        };
        assert_eq!(CliError::from(mismatch).code(), 3);

        let net = OeisError::Network {
            url: "http://example.invalid".into(),
            detail: "unreachable".into(),
        };
        assert_eq!(CliError::from(net).code(), 4);

        let few = OeisError::TooFewTerms { got: 3 };
        assert_eq!(CliError::from(few).code(), 2);

        let bad = QSeriesError::BadExponent {
            n: 1,
            got: "-1".into(),
        };
        assert_eq!(CliError::from(bad).code(), 2);
    }

    #[test]
    fn rational_list_parsing() {
        let v = parse_rat_list("1, -3/2, 4", "coefficient").unwrap();
        assert_eq!(v.len(), 3);
        assert_eq!(v[1], Rat::new(BigInt::from(-3), BigInt::from(2)));
        assert!(parse_rat_list("", "coefficient").is_err());
        assert!(parse_rat_list("1,x", "coefficient").is_err());
        assert!(parse_rat_list("1,1/0", "coefficient").is_err());
    }

    #[test]
    fn poly_display_limit_truncates() {
        let p = QPoly::new((0..6).map(|i| Rat::from_integer(BigInt::from(i + 1))).collect());
        assert_eq!(render_poly(&p, None), "1 + 2*q + 3*q^2 + 4*q^3 + 5*q^4 + 6*q^5");
        assert_eq!(render_poly(&p, Some(2)), "1 + 2*q + 3*q^2 + O(q^3)");
        assert_eq!(render_poly(&p, Some(5)), "1 + 2*q + 3*q^2 + 4*q^3 + 5*q^4 + 6*q^5");
    }
}
