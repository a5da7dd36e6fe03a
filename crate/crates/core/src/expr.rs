//! A small input language for series given as rational functions in `q`,
//! e.g. `1/(1-q-q^2)` or `(1-q)/(1-2*q)`.
//!
//! Grammar (LL(1), no implicit multiplication):
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor (('*' | '/') factor)*
//! factor := base ('^' '-'? uint)?
//! base   := uint | 'q' | '(' expr ')' | '-' base
//! ```
//!
//! Whitespace is ignored; integer literals are unbounded; `^` binds
//! tighter than `*`; a negative exponent means reciprocal-then-power, so
//! product forms like `(1-q)^-2 * (1-q^2)^-1` can be entered directly.

use crate::number::Rat;
use crate::series::{reciprocal_convolution, TruncatedSeries};
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive};
use std::fmt;
use thiserror::Error;

/// Largest allowed power-exponent magnitude; beyond this the expansion
/// would mostly be spent growing astronomically long integers.
pub const MAX_EXPONENT: u64 = 1_000_000;

/// Half-open range of 0-based character positions in the source text.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl Span {
    fn to(self, other: Span) -> Span {
        Span {
            start: self.start,
            end: other.end,
        }
    }
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.start, self.end)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum ExprKind {
    Int(BigInt),
    Q,
    Neg(Box<ExprAst>),
    Add(Box<ExprAst>, Box<ExprAst>),
    Sub(Box<ExprAst>, Box<ExprAst>),
    Mul(Box<ExprAst>, Box<ExprAst>),
    Div(Box<ExprAst>, Box<ExprAst>),
    /// Power with a literal integer exponent, possibly negative.
    Pow(Box<ExprAst>, BigInt),
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExprAst {
    pub kind: ExprKind,
    pub span: Span,
}

impl fmt::Display for ExprAst {
    /// Canonical fully parenthesized form; parsing it back yields the
    /// same tree.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ExprKind::Int(v) => write!(f, "{v}"),
            ExprKind::Q => write!(f, "q"),
            ExprKind::Neg(x) => write!(f, "(-{x})"),
            ExprKind::Add(a, b) => write!(f, "({a} + {b})"),
            ExprKind::Sub(a, b) => write!(f, "({a} - {b})"),
            ExprKind::Mul(a, b) => write!(f, "({a} * {b})"),
            ExprKind::Div(a, b) => write!(f, "({a} / {b})"),
            ExprKind::Pow(b, e) => write!(f, "({b}^{e})"),
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("syntax error at position {pos}: expected {expected}, found {found}")]
pub struct ParseError {
    /// 0-based character position, always inside the input (clamped to
    /// the last character when the problem is truncation).
    pub pos: usize,
    pub expected: String,
    pub found: String,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ExpandError {
    #[error("denominator at {span} is the zero series")]
    DivisorIsZero { span: Span },
    #[error("denominator at {span} has zero constant term, so its reciprocal is not a power series")]
    DivisorConstantTermZero { span: Span },
    #[error("base at {span} has zero constant term and cannot be raised to a negative power")]
    NegativePowerOfZeroConstant { span: Span },
    #[error("exponent {exponent} at {span} exceeds the supported magnitude {MAX_EXPONENT}")]
    ExponentTooLarge { span: Span, exponent: BigInt },
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Q,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Int(v) => format!("\"{v}\""),
            Tok::Q => "\"q\"".into(),
            Tok::Plus => "\"+\"".into(),
            Tok::Minus => "\"-\"".into(),
            Tok::Star => "\"*\"".into(),
            Tok::Slash => "\"/\"".into(),
            Tok::Caret => "\"^\"".into(),
            Tok::LParen => "\"(\"".into(),
            Tok::RParen => "\")\"".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

struct Lexeme {
    tok: Tok,
    span: Span,
}

fn lex(text: &str) -> Result<Vec<Lexeme>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let start = i;
        let tok = match c {
            c if c.is_whitespace() => {
                i += 1;
                continue;
            }
            '0'..='9' => {
                let mut digits = String::new();
                while i < chars.len() && chars[i].is_ascii_digit() {
                    digits.push(chars[i]);
                    i += 1;
                }
                out.push(Lexeme {
                    tok: Tok::Int(digits.parse().expect("digit run parses")),
                    span: Span { start, end: i },
                });
                continue;
            }
            'q' => Tok::Q,
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            other => {
                return Err(ParseError {
                    pos: i,
                    expected: "a digit, \"q\", an operator, or a parenthesis".into(),
                    found: format!("\"{other}\""),
                })
            }
        };
        i += 1;
        out.push(Lexeme {
            tok,
            span: Span { start, end: i },
        });
    }
    out.push(Lexeme {
        tok: Tok::Eof,
        span: Span {
            start: chars.len(),
            end: chars.len(),
        },
    });
    Ok(out)
}

struct Parser {
    toks: Vec<Lexeme>,
    i: usize,
    last_pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.i].tok
    }

    fn span(&self) -> Span {
        self.toks[self.i].span
    }

    fn bump(&mut self) -> Span {
        let span = self.toks[self.i].span;
        self.i += 1;
        span
    }

    fn error(&self, expected: &str) -> ParseError {
        ParseError {
            pos: self.span().start.min(self.last_pos),
            expected: expected.into(),
            found: self.peek().describe(),
        }
    }

    fn expr(&mut self) -> Result<ExprAst, ParseError> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Tok::Plus => ExprKind::Add as fn(_, _) -> _,
                Tok::Minus => ExprKind::Sub as fn(_, _) -> _,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.term()?;
            let span = lhs.span.to(rhs.span);
            lhs = ExprAst {
                kind: op(Box::new(lhs), Box::new(rhs)),
                span,
            };
        }
    }

    fn term(&mut self) -> Result<ExprAst, ParseError> {
        let mut lhs = self.factor()?;
        loop {
            let op = match self.peek() {
                Tok::Star => ExprKind::Mul as fn(_, _) -> _,
                Tok::Slash => ExprKind::Div as fn(_, _) -> _,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.factor()?;
            let span = lhs.span.to(rhs.span);
            lhs = ExprAst {
                kind: op(Box::new(lhs), Box::new(rhs)),
                span,
            };
        }
    }

    fn factor(&mut self) -> Result<ExprAst, ParseError> {
        let base = self.base()?;
        if self.peek() != &Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let negate = if self.peek() == &Tok::Minus {
            self.bump();
            true
        } else {
            false
        };
        let (mut exponent, exp_span) = match self.peek() {
            Tok::Int(v) => (v.clone(), self.bump()),
            _ => return Err(self.error("an unsigned integer exponent")),
        };
        if negate {
            exponent = -exponent;
        }
        let span = base.span.to(exp_span);
        Ok(ExprAst {
            kind: ExprKind::Pow(Box::new(base), exponent),
            span,
        })
    }

    fn base(&mut self) -> Result<ExprAst, ParseError> {
        match self.peek().clone() {
            Tok::Int(v) => {
                let span = self.bump();
                Ok(ExprAst {
                    kind: ExprKind::Int(v),
                    span,
                })
            }
            Tok::Q => {
                let span = self.bump();
                Ok(ExprAst {
                    kind: ExprKind::Q,
                    span,
                })
            }
            Tok::LParen => {
                let open = self.bump();
                let inner = self.expr()?;
                if self.peek() != &Tok::RParen {
                    return Err(self.error("\")\""));
                }
                let close = self.bump();
                Ok(ExprAst {
                    kind: inner.kind,
                    span: open.to(close),
                })
            }
            Tok::Minus => {
                let minus = self.bump();
                let operand = self.base()?;
                let span = minus.to(operand.span);
                Ok(ExprAst {
                    kind: ExprKind::Neg(Box::new(operand)),
                    span,
                })
            }
            _ => Err(self.error("a number, \"q\", \"(\", or \"-\"")),
        }
    }
}

/// Parses an expression per the module grammar.
pub fn parse(text: &str) -> Result<ExprAst, ParseError> {
    let toks = lex(text)?;
    let last_pos = text.chars().count().saturating_sub(1);
    let mut parser = Parser { toks, i: 0, last_pos };
    let ast = parser.expr()?;
    if parser.peek() != &Tok::Eof {
        return Err(parser.error("an operator or end of input"));
    }
    Ok(ast)
}

/// Expands the expression as a power series in `q` truncated at `order`.
pub fn expand(ast: &ExprAst, order: usize) -> Result<TruncatedSeries, ExpandError> {
    let same_order = |r: Result<TruncatedSeries, _>| r.expect("operands share one order");
    match &ast.kind {
        ExprKind::Int(v) => Ok(TruncatedSeries::constant(
            Rat::from_integer(v.clone()),
            order,
        )),
        ExprKind::Q => Ok(TruncatedSeries::monomial(Rat::one(), 1, order)),
        ExprKind::Neg(x) => Ok(expand(x, order)?.neg()),
        ExprKind::Add(a, b) => Ok(same_order(expand(a, order)?.add(&expand(b, order)?))),
        ExprKind::Sub(a, b) => Ok(same_order(expand(a, order)?.sub(&expand(b, order)?))),
        ExprKind::Mul(a, b) => Ok(same_order(expand(a, order)?.mul(&expand(b, order)?))),
        ExprKind::Div(a, b) => {
            let denom = expand(b, order)?;
            let inv = invert(&denom, b.span)?;
            Ok(same_order(expand(a, order)?.mul(&inv)))
        }
        ExprKind::Pow(b, e) => {
            let base = expand(b, order)?;
            let magnitude = e.abs();
            let Some(mag) = magnitude.to_u64().filter(|&m| m <= MAX_EXPONENT) else {
                return Err(ExpandError::ExponentTooLarge {
                    span: ast.span,
                    exponent: e.clone(),
                });
            };
            let base = if e.is_negative() {
                invert(&base, b.span).map_err(|err| match err {
                    ExpandError::DivisorConstantTermZero { span }
                    | ExpandError::DivisorIsZero { span } => {
                        ExpandError::NegativePowerOfZeroConstant { span }
                    }
                    other => other,
                })?
            } else {
                base
            };
            Ok(pow_series(base, mag))
        }
    }
}

/// Convenience: parse then expand inherits both error types.
#[derive(Debug, Error, PartialEq)]
pub enum ExprError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Expand(#[from] ExpandError),
}

pub fn expand_str(text: &str, order: usize) -> Result<TruncatedSeries, ExprError> {
    Ok(expand(&parse(text)?, order)?)
}

fn invert(denom: &TruncatedSeries, span: Span) -> Result<TruncatedSeries, ExpandError> {
    if denom.is_zero() {
        return Err(ExpandError::DivisorIsZero { span });
    }
    reciprocal_convolution(denom).map_err(|_| ExpandError::DivisorConstantTermZero { span })
}

fn pow_series(base: TruncatedSeries, mut e: u64) -> TruncatedSeries {
    let mut result = TruncatedSeries::one(base.order());
    let mut square = base;
    while e > 0 {
        if e & 1 == 1 {
            result = result.mul(&square).expect("orders match");
        }
        e >>= 1;
        if e > 0 {
            square = square.mul(&square).expect("orders match");
        }
    }
    result
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::number::int;
    use crate::series::product_from_exponents;
    use crate::series::ExponentSeq;
    use proptest::prelude::*;

    fn coeffs(text: &str, order: usize) -> Vec<Rat> {
        expand_str(text, order).unwrap().coeffs().to_vec()
    }

    fn ints(vals: &[i64]) -> Vec<Rat> {
        vals.iter().map(|&v| int(v)).collect()
    }

    #[test]
    fn parses_the_reference_inputs() {
        parse("1/(1-q-q^2)").unwrap();
        parse("(1-q)/(1-2*q)").unwrap();
        parse("(1-q)^-2 * (1-q^2)^-1").unwrap();
    }

    #[test]
    fn dangling_operator_is_reported_at_its_position() {
        let err = parse("1+*q").unwrap_err();
        assert_eq!(err.pos, 2);
        assert_eq!(err.found, "\"*\"");
    }

    #[test]
    fn fibonacci_expansion() {
        assert_eq!(
            coeffs("1/(1-q-q^2)", 8),
            ints(&[1, 1, 2, 3, 5, 8, 13, 21, 34])
        );
    }

    #[test]
    fn composition_expansion() {
        assert_eq!(coeffs("(1-q)/(1-2*q)", 6), ints(&[1, 1, 2, 4, 8, 16, 32]));
    }

    #[test]
    fn negative_power_is_reciprocal() {
        assert_eq!(coeffs("(1-q^2)^-1", 5), ints(&[1, 0, 1, 0, 1, 0]));
        assert_eq!(coeffs("(1-q)^-1", 4), ints(&[1, 1, 1, 1, 1]));
    }

    #[test]
    fn product_form_matches_series_module() {
        let got = expand_str("(1-q)^-2 * (1-q^2)^-1", 8).unwrap();
        let a = ExponentSeq::new(vec![
            int(2),
            int(1),
            int(0),
            int(0),
            int(0),
            int(0),
            int(0),
            int(0),
        ])
        .unwrap();
        assert_eq!(got, product_from_exponents(&a));
    }

    #[test]
    fn power_binds_tighter_than_times_and_neg_applies_to_base() {
        assert_eq!(coeffs("2*q^2", 3), ints(&[0, 0, 2, 0]));
        // the grammar reads -q^2 as (-q)^2
        assert_eq!(coeffs("-q^2", 3), ints(&[0, 0, 1, 0]));
        assert_eq!(coeffs("-(q^2)", 3), ints(&[0, 0, -1, 0]));
        assert_eq!(coeffs("q^0", 2), ints(&[1, 0, 0]));
    }

    #[test]
    fn whitespace_and_big_literals() {
        assert_eq!(coeffs(" ( 1 - q ) ^ - 1 ", 3), ints(&[1, 1, 1, 1]));
        let big = expand_str("123456789012345678901234567890", 0).unwrap();
        assert_eq!(
            big.coeff(0),
            &Rat::from_integer("123456789012345678901234567890".parse().unwrap())
        );
    }

    #[test]
    fn division_errors_carry_the_denominator_span() {
        let err = expand_str("1/q", 5).unwrap_err();
        assert_eq!(
            err,
            ExprError::Expand(ExpandError::DivisorConstantTermZero {
                span: Span { start: 2, end: 3 }
            })
        );
        let err = expand_str("1/(q-q)", 5).unwrap_err();
        assert_eq!(
            err,
            ExprError::Expand(ExpandError::DivisorIsZero {
                span: Span { start: 2, end: 7 }
            })
        );
        let err = expand_str("q^-1", 5).unwrap_err();
        assert!(matches!(
            err,
            ExprError::Expand(ExpandError::NegativePowerOfZeroConstant {
                span: Span { start: 0, end: 1 }
            })
        ));
        let err = expand_str("2^99999999999999", 2).unwrap_err();
        assert!(matches!(
            err,
            ExprError::Expand(ExpandError::ExponentTooLarge { .. })
        ));
    }

    #[test]
    fn error_positions_stay_inside_the_input() {
        let bad = [
            "", "(", ")", "1+", "1+*q", "q q", "2q", "^2", "1//2", "q^", "q^-", "1.5", "a",
            "(1-q", "1-", "*", "q^q", "((1)", "1 2",
        ];
        for text in bad {
            let err = parse(text).unwrap_err();
            if text.is_empty() {
                assert_eq!(err.pos, 0);
            } else {
                assert!(
                    err.pos < text.chars().count(),
                    "position {} escapes {text:?}",
                    err.pos
                );
            }
        }
    }

    fn shape_eq(a: &ExprAst, b: &ExprAst) -> bool {
        match (&a.kind, &b.kind) {
            (ExprKind::Int(x), ExprKind::Int(y)) => x == y,
            (ExprKind::Q, ExprKind::Q) => true,
            (ExprKind::Neg(x), ExprKind::Neg(y)) => shape_eq(x, y),
            (ExprKind::Add(a1, a2), ExprKind::Add(b1, b2))
            | (ExprKind::Sub(a1, a2), ExprKind::Sub(b1, b2))
            | (ExprKind::Mul(a1, a2), ExprKind::Mul(b1, b2))
            | (ExprKind::Div(a1, a2), ExprKind::Div(b1, b2)) => {
                shape_eq(a1, b1) && shape_eq(a2, b2)
            }
            (ExprKind::Pow(x, e), ExprKind::Pow(y, f)) => e == f && shape_eq(x, y),
            _ => false,
        }
    }

    fn node(kind: ExprKind) -> ExprAst {
        ExprAst {
            kind,
            span: Span { start: 0, end: 0 },
        }
    }

    fn arb_ast() -> impl Strategy<Value = ExprAst> {
        let leaf = prop_oneof![
            (0u64..=99_999).prop_map(|v| node(ExprKind::Int(BigInt::from(v)))),
            Just(node(ExprKind::Q)),
        ];
        leaf.prop_recursive(6, 48, 2, |inner| {
            prop_oneof![
                inner.clone().prop_map(|x| node(ExprKind::Neg(Box::new(x)))),
                (inner.clone(), inner.clone())
                    .prop_map(|(a, b)| node(ExprKind::Add(Box::new(a), Box::new(b)))),
                (inner.clone(), inner.clone())
                    .prop_map(|(a, b)| node(ExprKind::Sub(Box::new(a), Box::new(b)))),
                (inner.clone(), inner.clone())
                    .prop_map(|(a, b)| node(ExprKind::Mul(Box::new(a), Box::new(b)))),
                (inner.clone(), inner.clone())
                    .prop_map(|(a, b)| node(ExprKind::Div(Box::new(a), Box::new(b)))),
                (inner, -9i64..=9)
                    .prop_map(|(b, e)| node(ExprKind::Pow(Box::new(b), BigInt::from(e)))),
            ]
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn printer_roundtrips(ast in arb_ast()) {
            let printed = ast.to_string();
            let reparsed = parse(&printed).unwrap();
            prop_assert!(shape_eq(&ast, &reparsed), "printed form: {printed}");
        }
    }
}
