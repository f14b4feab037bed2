//! Polynomial text: a small recursive-descent parser and a deterministic printer.
//!
//! ```text
//! poly     := term (("+" | "-") term)*
//! term     := ["-" | "+"] factor ("*" factor)*
//! factor   := primary ["^" nat]
//! primary  := int ["/" nat] | var | "(" poly ")"
//! ```
//!
//! Juxtaposition is not multiplication, and `/` is only accepted between two
//! integer literals.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

use crate::field::{CoefficientText, Field, Rational};
use crate::monomial::PowerProduct;
use crate::order::TermOrder;
use crate::poly::Polynomial;
use crate::ring::{is_identifier, RingError, RingSpec};

const MAX_NESTING: usize = 200;

/// Byte offsets `[start, end)` into the parsed text.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SourceSpan {
    pub start: usize,
    pub end: usize,
}

impl SourceSpan {
    fn new(start: usize, end: usize) -> Self {
        SourceSpan { start, end }
    }

    /// Shifts the span by `offset` bytes (used when a line is parsed out of a
    /// larger file).
    pub fn shifted(self, offset: usize) -> Self {
        SourceSpan::new(self.start + offset, self.end + offset)
    }
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.start, self.end)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("unexpected character `{0}`")]
    UnexpectedChar(char),
    #[error("unexpected end of input, expected {0}")]
    UnexpectedEnd(&'static str),
    #[error("unexpected `{found}`, expected {expected}")]
    UnexpectedToken { found: String, expected: &'static str },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("division is only allowed between integer literals")]
    DivisionByNonConstant,
    #[error("division by zero")]
    DivisionByZero,
    #[error("exponent too large")]
    ExponentTooLarge,
    #[error("expression nested too deeply")]
    NestingTooDeep,
    #[error("malformed ring header, expected `QQ[v1,..,vn]`")]
    BadRingHeader,
    #[error(transparent)]
    Ring(#[from] RingError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{kind} at {span}")]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub span: SourceSpan,
}

impl ParseError {
    fn new(kind: ParseErrorKind, start: usize, end: usize) -> Self {
        ParseError {
            kind,
            span: SourceSpan::new(start, end),
        }
    }

    pub fn shifted(self, offset: usize) -> Self {
        ParseError {
            kind: self.kind,
            span: self.span.shifted(offset),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Int(n) => n.to_string(),
            Tok::Ident(s) => s.clone(),
            Tok::Plus => "+".into(),
            Tok::Minus => "-".into(),
            Tok::Star => "*".into(),
            Tok::Slash => "/".into(),
            Tok::Caret => "^".into(),
            Tok::LParen => "(".into(),
            Tok::RParen => ")".into(),
            Tok::End => "end of input".into(),
        }
    }
}

fn tokenize(text: &str) -> Result<Vec<(Tok, usize, usize)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let tok = match c {
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'/' => Tok::Slash,
            b'^' => Tok::Caret,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'0'..=b'9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let n: BigInt = text[start..i].parse().expect("digits");
                out.push((Tok::Int(n), start, i));
                continue;
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((Tok::Ident(text[start..i].to_string()), start, i));
                continue;
            }
            _ => {
                let ch = text[start..].chars().next().unwrap_or('?');
                return Err(ParseError::new(
                    ParseErrorKind::UnexpectedChar(ch),
                    start,
                    start + ch.len_utf8(),
                ));
            }
        };
        i += 1;
        out.push((tok, start, i));
    }
    out.push((Tok::End, text.len(), text.len()));
    Ok(out)
}

struct Parser<'a> {
    ring: &'a Arc<RingSpec>,
    toks: Vec<(Tok, usize, usize)>,
    pos: usize,
    depth: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn span(&self) -> (usize, usize) {
        let (_, s, e) = &self.toks[self.pos];
        (*s, *e)
    }

    fn advance(&mut self) -> (Tok, usize, usize) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn unexpected(&self, expected: &'static str) -> ParseError {
        let (s, e) = self.span();
        match self.peek() {
            Tok::End => ParseError::new(ParseErrorKind::UnexpectedEnd(expected), s, e),
            t => ParseError::new(
                ParseErrorKind::UnexpectedToken {
                    found: t.describe(),
                    expected,
                },
                s,
                e,
            ),
        }
    }

    fn poly(&mut self) -> Result<Polynomial, ParseError> {
        self.depth += 1;
        if self.depth > MAX_NESTING {
            let (s, e) = self.span();
            return Err(ParseError::new(ParseErrorKind::NestingTooDeep, s, e));
        }
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.advance();
                    acc = &acc + &self.term()?;
                }
                Tok::Minus => {
                    self.advance();
                    acc = &acc - &self.term()?;
                }
                _ => break,
            }
        }
        self.depth -= 1;
        Ok(acc)
    }

    fn term(&mut self) -> Result<Polynomial, ParseError> {
        let negate = match self.peek() {
            Tok::Minus => {
                self.advance();
                true
            }
            Tok::Plus => {
                self.advance();
                false
            }
            _ => false,
        };
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.advance();
                    acc = &acc * &self.factor()?;
                }
                Tok::Slash => {
                    let (s, e) = self.span();
                    return Err(ParseError::new(ParseErrorKind::DivisionByNonConstant, s, e));
                }
                Tok::Int(_) | Tok::Ident(_) | Tok::LParen => {
                    return Err(self.unexpected("an operator (use `*` for products)"))
                }
                _ => break,
            }
        }
        Ok(if negate { -acc } else { acc })
    }

    fn factor(&mut self) -> Result<Polynomial, ParseError> {
        let (base, powerable) = self.primary()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        let (_, cs, ce) = self.advance();
        if !powerable {
            return Err(ParseError::new(
                ParseErrorKind::UnexpectedToken {
                    found: "^".into(),
                    expected: "parentheses around a fraction before `^`",
                },
                cs,
                ce,
            ));
        }
        if let Tok::Int(n) = self.peek().clone() {
            let (_, s, e) = self.advance();
            let exp = n
                .to_u32()
                .filter(|&k| k <= 1 << 16)
                .ok_or_else(|| ParseError::new(ParseErrorKind::ExponentTooLarge, s, e))?;
            Ok(base.pow_u32(exp))
        } else {
            Err(self.unexpected("a natural exponent"))
        }
    }

    /// Returns the parsed primary and whether a `^` may follow it.
    fn primary(&mut self) -> Result<(Polynomial, bool), ParseError> {
        match self.peek().clone() {
            Tok::Int(n) => {
                self.advance();
                if *self.peek() != Tok::Slash {
                    return Ok((Polynomial::constant(self.ring, Rational::from_integer(n)), true));
                }
                self.advance();
                match self.advance() {
                    (Tok::Int(d), s, e) => {
                        if d.is_zero() {
                            return Err(ParseError::new(ParseErrorKind::DivisionByZero, s, e));
                        }
                        Ok((Polynomial::constant(self.ring, Rational::new(n, d)), false))
                    }
                    (_, s, e) => Err(ParseError::new(ParseErrorKind::DivisionByNonConstant, s, e)),
                }
            }
            Tok::Ident(name) => {
                let (_, s, e) = self.advance();
                let index = self
                    .ring
                    .index_of(&name)
                    .ok_or_else(|| ParseError::new(ParseErrorKind::UnknownVariable(name), s, e))?;
                Ok((Polynomial::var(self.ring, index), true))
            }
            Tok::LParen => {
                self.advance();
                let inner = self.poly()?;
                if *self.peek() != Tok::RParen {
                    return Err(self.unexpected("`)`"));
                }
                self.advance();
                Ok((inner, true))
            }
            _ => Err(self.unexpected("a number, a variable or `(`")),
        }
    }
}

/// Parses a polynomial over `ring`.
pub fn parse_polynomial(ring: &Arc<RingSpec>, text: &str) -> Result<Polynomial, ParseError> {
    let toks = tokenize(text)?;
    let mut parser = Parser {
        ring,
        toks,
        pos: 0,
        depth: 0,
    };
    let p = parser.poly()?;
    if *parser.peek() != Tok::End {
        return Err(parser.unexpected("an operator or end of input"));
    }
    Ok(p)
}

/// Parses a ring header `QQ[v1,..,vn]`.
pub fn parse_ring(text: &str) -> Result<Arc<RingSpec>, ParseError> {
    let lead = text.len() - text.trim_start().len();
    let body = text.trim();
    let bad = || ParseError::new(ParseErrorKind::BadRingHeader, lead, lead + body.len());
    let inner = body
        .strip_prefix("QQ")
        .map(str::trim_start)
        .and_then(|s| s.strip_prefix('['))
        .and_then(|s| s.strip_suffix(']'))
        .ok_or_else(bad)?;
    let inner_start = lead + body.find('[').ok_or_else(bad)? + 1;
    if inner.trim().is_empty() {
        return Err(ParseError::new(
            ParseErrorKind::Ring(RingError::Empty),
            inner_start,
            inner_start + inner.len(),
        ));
    }
    let mut names: Vec<&str> = Vec::new();
    let mut offset = inner_start;
    for piece in inner.split(',') {
        let name = piece.trim();
        let start = offset + (piece.len() - piece.trim_start().len());
        let span = (start, start + name.len());
        if !is_identifier(name) {
            return Err(ParseError::new(
                ParseErrorKind::Ring(RingError::BadName(name.to_string())),
                span.0,
                span.1,
            ));
        }
        if names.contains(&name) {
            return Err(ParseError::new(
                ParseErrorKind::Ring(RingError::Duplicate(name.to_string())),
                span.0,
                span.1,
            ));
        }
        names.push(name);
        offset += piece.len() + 1;
    }
    RingSpec::new(&names).map_err(|e| ParseError::new(e.into(), lead, lead + body.len()))
}

/// Prints a power product as `x^2*y`; the unit prints as `1`.
pub fn print_term(ring: &RingSpec, t: &PowerProduct) -> String {
    let mut parts = Vec::new();
    for (i, &e) in t.exponents().iter().enumerate() {
        match e {
            0 => {}
            1 => parts.push(ring.name(i).to_string()),
            _ => parts.push(format!("{}^{}", ring.name(i), e)),
        }
    }
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

/// Prints `f` with terms in σ-decreasing order, e.g. `x^2 +2*x*y +y^2`.
pub fn print_polynomial<C: Field>(order: &TermOrder, f: &Polynomial<C>) -> String {
    if f.is_zero() {
        return "0".into();
    }
    let ring = f.ring();
    let mut out = String::new();
    for (k, (t, c)) in f.sorted_terms(order).into_iter().enumerate() {
        let mono = if t.is_one() { None } else { Some(print_term(ring, t)) };
        let (negative, body) = match c.coefficient_text() {
            CoefficientText::Rational { negative, magnitude } => {
                let body = match (magnitude, mono) {
                    (None, None) => "1".to_string(),
                    (None, Some(m)) => m,
                    (Some(c), None) => c,
                    (Some(c), Some(m)) => format!("{c}*{m}"),
                };
                (negative, body)
            }
            CoefficientText::Compound(s) => {
                let body = match mono {
                    None => format!("({s})"),
                    Some(m) => format!("({s})*{m}"),
                };
                (false, body)
            }
        };
        if k > 0 {
            out.push(' ');
            out.push(if negative { '-' } else { '+' });
        } else if negative {
            out.push('-');
        }
        out.push_str(&body);
    }
    out
}
