//! Input files: ideals, families, parametrizations, slice sets and detection
//! requests, in a line-based text form or JSON.
//!
//! Text files are line oriented. `#` starts a comment, blank lines are
//! ignored, the first line is a ring header `QQ[..]` and an optional
//! `order: <name>` line may follow the headers. Every other line holds one
//! polynomial.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::Zero;
use serde::Deserialize;

use crate::family::Family;
use crate::field::{format_rational, parse_rational, Rational};
use crate::hough::{Observation, SliceObservation};
use crate::order::TermOrder;
use crate::poly::Polynomial;
use crate::ring::RingSpec;
use crate::section::{HomLinearForm, LinearForm};
use crate::text::{parse_polynomial, parse_ring, print_polynomial, ParseError, SourceSpan};

/// A problem with an input file. `span` is relative to the whole file.
#[derive(Clone, Debug, PartialEq)]
pub struct FormatError {
    pub message: String,
    pub line: Option<usize>,
    pub span: Option<SourceSpan>,
}

impl FormatError {
    fn plain(message: impl Into<String>) -> Self {
        FormatError {
            message: message.into(),
            line: None,
            span: None,
        }
    }

    fn at(line: &Line<'_>, message: impl Into<String>) -> Self {
        FormatError {
            message: message.into(),
            line: Some(line.number),
            span: Some(SourceSpan {
                start: line.offset,
                end: line.offset + line.text.len(),
            }),
        }
    }

    fn parse(line: &Line<'_>, e: ParseError) -> Self {
        let e = e.shifted(line.offset);
        FormatError {
            message: e.kind.to_string(),
            line: Some(line.number),
            span: Some(e.span),
        }
    }
}

impl fmt::Display for FormatError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.line, self.span) {
            (Some(l), Some(s)) => write!(f, "line {l} (bytes {s}): {}", self.message),
            (Some(l), None) => write!(f, "line {l}: {}", self.message),
            _ => f.write_str(&self.message),
        }
    }
}

impl std::error::Error for FormatError {}

struct Line<'a> {
    number: usize,
    offset: usize,
    text: &'a str,
}

fn content_lines(text: &str) -> Vec<Line<'_>> {
    let mut out = Vec::new();
    let mut offset = 0;
    for (k, raw) in text.split('\n').enumerate() {
        let body = raw.split('#').next().unwrap_or("");
        let lead = body.len() - body.trim_start().len();
        let trimmed = body.trim();
        if !trimmed.is_empty() {
            out.push(Line {
                number: k + 1,
                offset: offset + lead,
                text: trimmed,
            });
        }
        offset += raw.len() + 1;
    }
    out
}

fn is_json(text: &str) -> bool {
    text.trim_start().starts_with('{')
}

fn json<'a, T: Deserialize<'a>>(text: &'a str) -> Result<T, FormatError> {
    serde_json::from_str(text).map_err(|e| FormatError {
        message: format!("invalid JSON: {e}"),
        line: Some(e.line()),
        span: None,
    })
}

fn ring_from_names(names: &[String]) -> Result<Arc<RingSpec>, FormatError> {
    RingSpec::new(names).map_err(|e| FormatError::plain(e.to_string()))
}

fn poly_in(ring: &Arc<RingSpec>, text: &str, what: &str) -> Result<Polynomial, FormatError> {
    parse_polynomial(ring, text).map_err(|e| FormatError::plain(format!("{what}: {e}")))
}

fn order_in(ring: &RingSpec, text: &str) -> Result<TermOrder, FormatError> {
    TermOrder::parse(text, ring).map_err(|e| FormatError::plain(e.to_string()))
}

/// Reads the ring headers and the optional order line, returning the rings
/// and the remaining lines.
type Headers<'a> = (Vec<Arc<RingSpec>>, Option<(&'a Line<'a>, &'a str)>, &'a [Line<'a>]);

fn headers<'a>(lines: &'a [Line<'a>], count: usize) -> Result<Headers<'a>, FormatError> {
    if lines.len() < count {
        return Err(FormatError::plain(format!("expected {count} ring header line(s)")));
    }
    let mut rings = Vec::new();
    for line in &lines[..count] {
        rings.push(parse_ring(line.text).map_err(|e| FormatError::parse(line, e))?);
    }
    let mut rest = &lines[count..];
    let mut order = None;
    if let Some(first) = rest.first() {
        if let Some(name) = first.text.strip_prefix("order:") {
            order = Some((first, name.trim()));
            rest = &rest[1..];
        }
    }
    Ok((rings, order, rest))
}

fn polys_of(ring: &Arc<RingSpec>, lines: &[Line<'_>]) -> Result<Vec<Polynomial>, FormatError> {
    lines
        .iter()
        .map(|l| parse_polynomial(ring, l.text).map_err(|e| FormatError::parse(l, e)))
        .collect()
}

fn text_order(ring: &RingSpec, order: Option<(&Line<'_>, &str)>) -> Result<Option<TermOrder>, FormatError> {
    order
        .map(|(line, name)| TermOrder::parse(name, ring).map_err(|e| FormatError::at(line, e.to_string())))
        .transpose()
}

// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq)]
pub struct IdealFile {
    pub ring: Arc<RingSpec>,
    pub order: Option<TermOrder>,
    pub generators: Vec<Polynomial>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct IdealJson {
    ring: Vec<String>,
    order: Option<String>,
    generators: Vec<String>,
}

/// Reads an ideal file (text or JSON, detected from the first character).
pub fn read_ideal(text: &str) -> Result<IdealFile, FormatError> {
    if is_json(text) {
        let raw: IdealJson = json(text)?;
        let ring = ring_from_names(&raw.ring)?;
        let order = raw.order.map(|o| order_in(&ring, &o)).transpose()?;
        let generators = raw
            .generators
            .iter()
            .enumerate()
            .map(|(k, g)| poly_in(&ring, g, &format!("generator {}", k + 1)))
            .collect::<Result<_, _>>()?;
        return Ok(IdealFile {
            ring,
            order,
            generators,
        });
    }
    let lines = content_lines(text);
    let (rings, order, rest) = headers(&lines, 1)?;
    let ring = rings.into_iter().next().unwrap();
    let order = text_order(&ring, order)?;
    let generators = polys_of(&ring, rest)?;
    Ok(IdealFile {
        ring,
        order,
        generators,
    })
}

/// Text form of a list of polynomials, readable by [`read_ideal`].
pub fn write_ideal(ring: &RingSpec, order: &TermOrder, polys: &[Polynomial]) -> String {
    let mut out = format!("QQ[{}]\norder: {}\n", ring.names().join(","), order.name(ring));
    for p in polys {
        out.push_str(&print_polynomial(order, p));
        out.push('\n');
    }
    out
}

// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq)]
pub struct FamilyFile {
    pub family: Family,
    pub order: Option<TermOrder>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FamilyJson {
    params: Vec<String>,
    vars: Vec<String>,
    order: Option<String>,
    generators: Vec<String>,
}

fn family_from_json(raw: FamilyJson) -> Result<FamilyFile, FormatError> {
    let params = ring_from_names(&raw.params)?;
    let vars = ring_from_names(&raw.vars)?;
    let joined = params.join(&vars).map_err(|e| FormatError::plain(e.to_string()))?;
    let order = raw.order.map(|o| order_in(&vars, &o)).transpose()?;
    let gens = raw
        .generators
        .iter()
        .enumerate()
        .map(|(k, g)| poly_in(&joined, g, &format!("generator {}", k + 1)))
        .collect::<Result<_, _>>()?;
    let family = Family::new(&params, &vars, gens).map_err(|e| FormatError::plain(e.to_string()))?;
    Ok(FamilyFile { family, order })
}

/// Reads a family: a parameter ring header, an `x` ring header, an optional
/// order (on the `x` ring), then generators in both sets of variables.
pub fn read_family(text: &str) -> Result<FamilyFile, FormatError> {
    if is_json(text) {
        return family_from_json(json(text)?);
    }
    let lines = content_lines(text);
    let (rings, order, rest) = headers(&lines, 2)?;
    let (params, vars) = (rings[0].clone(), rings[1].clone());
    let joined = params
        .join(&vars)
        .map_err(|e| FormatError::at(&lines[1], e.to_string()))?;
    let order = text_order(&vars, order)?;
    let gens = polys_of(&joined, rest)?;
    let family = Family::new(&params, &vars, gens).map_err(|e| FormatError::plain(e.to_string()))?;
    Ok(FamilyFile { family, order })
}

// ---------------------------------------------------------------------------

/// A polynomial map `target <- params` given by one coordinate per target variable.
#[derive(Clone, Debug, PartialEq)]
pub struct Parametrization {
    pub params: Arc<RingSpec>,
    pub target: Arc<RingSpec>,
    pub coordinates: Vec<Polynomial>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ParamJson {
    params: Vec<String>,
    vars: Vec<String>,
    coordinates: Vec<String>,
}

/// Reads a parametrization: parameter ring header, target ring header, then
/// one coordinate polynomial (in the parameters) per target variable.
pub fn read_parametrization(text: &str) -> Result<Parametrization, FormatError> {
    let (params, target, coordinates) = if is_json(text) {
        let raw: ParamJson = json(text)?;
        let params = ring_from_names(&raw.params)?;
        let target = ring_from_names(&raw.vars)?;
        let coords = raw
            .coordinates
            .iter()
            .enumerate()
            .map(|(k, c)| poly_in(&params, c, &format!("coordinate {}", k + 1)))
            .collect::<Result<Vec<_>, _>>()?;
        (params, target, coords)
    } else {
        let lines = content_lines(text);
        let (rings, order, rest) = headers(&lines, 2)?;
        if let Some((line, _)) = order {
            return Err(FormatError::at(line, "a parametrization takes no order line"));
        }
        let coords = polys_of(&rings[0], rest)?;
        (rings[0].clone(), rings[1].clone(), coords)
    };
    if coordinates.len() != target.arity() {
        return Err(FormatError::plain(format!(
            "expected {} coordinates, found {}",
            target.arity(),
            coordinates.len()
        )));
    }
    Ok(Parametrization {
        params,
        target,
        coordinates,
    })
}

// ---------------------------------------------------------------------------

#[derive(Deserialize)]
#[serde(untagged)]
enum Scalar {
    Int(i64),
    Text(String),
}

fn scalar(s: &Scalar, what: &str) -> Result<Rational, FormatError> {
    match s {
        Scalar::Int(n) => Ok(Rational::from_integer((*n).into())),
        Scalar::Text(t) => parse_rational(t.trim())
            .ok_or_else(|| FormatError::plain(format!("{what}: `{t}` is not a rational number"))),
    }
}

/// A set of parallel slices `x_pivot = ℓ_k` with `ℓ_k = Σ tail + γ_k`.
#[derive(Clone, Debug, PartialEq)]
pub struct SliceFile {
    pub ring: Arc<RingSpec>,
    pub order: Option<TermOrder>,
    pub pivot: usize,
    pub tail: Vec<(usize, Rational)>,
    pub gammas: Vec<Rational>,
    /// Per slice, polynomials in the ring without the pivot.
    pub slices: Vec<Vec<Polynomial>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SliceJson {
    ring: Vec<String>,
    order: Option<String>,
    pivot: String,
    #[serde(default)]
    tail: BTreeMap<String, Scalar>,
    slices: Vec<SliceEntry>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SliceEntry {
    gamma: Scalar,
    generators: Vec<String>,
}

/// Reads a slice-set file (JSON only).
pub fn read_slices(text: &str) -> Result<SliceFile, FormatError> {
    let raw: SliceJson = json(text)?;
    let ring = ring_from_names(&raw.ring)?;
    let order = raw.order.map(|o| order_in(&ring, &o)).transpose()?;
    let pivot = ring
        .index_of(&raw.pivot)
        .ok_or_else(|| FormatError::plain(format!("pivot `{}` is not a ring variable", raw.pivot)))?;
    let mut tail = Vec::new();
    for (name, c) in &raw.tail {
        let j = ring
            .index_of(name)
            .ok_or_else(|| FormatError::plain(format!("tail variable `{name}` is not a ring variable")))?;
        tail.push((j, scalar(c, "tail coefficient")?));
    }
    let hat = ring.without(pivot);
    let mut gammas = Vec::new();
    let mut slices = Vec::new();
    for (k, s) in raw.slices.iter().enumerate() {
        gammas.push(scalar(&s.gamma, &format!("slice {}", k + 1))?);
        slices.push(
            s.generators
                .iter()
                .map(|g| poly_in(&hat, g, &format!("slice {}", k + 1)))
                .collect::<Result<Vec<_>, _>>()?,
        );
    }
    if slices.is_empty() {
        return Err(FormatError::plain("no slices"));
    }
    Ok(SliceFile {
        ring,
        order,
        pivot,
        tail,
        gammas,
        slices,
    })
}

// ---------------------------------------------------------------------------

/// A surface reconstruction request.
#[derive(Clone, Debug, PartialEq)]
pub struct DetectFile {
    pub template: Family,
    pub target: Arc<RingSpec>,
    pub pivot: usize,
    pub order: Option<TermOrder>,
    pub slices: Vec<SliceObservation>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DetectJson {
    template: FamilyJson,
    pivot: String,
    ring: Option<Vec<String>>,
    order: Option<String>,
    slices: Vec<DetectEntry>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DetectEntry {
    gamma: Scalar,
    points: Option<Vec<Vec<Scalar>>>,
    curve: Option<String>,
}

/// Reads a detection request (JSON only). Without an explicit `ring`, the
/// target ring is the template variables followed by the pivot.
pub fn read_detect(text: &str) -> Result<DetectFile, FormatError> {
    let raw: DetectJson = json(text)?;
    let template = family_from_json(raw.template)?.family;
    let names: Vec<String> = match raw.ring {
        Some(r) => r,
        None => template
            .vars()
            .names()
            .iter()
            .cloned()
            .chain([raw.pivot.clone()])
            .collect(),
    };
    let target = ring_from_names(&names)?;
    let pivot = target
        .index_of(&raw.pivot)
        .ok_or_else(|| FormatError::plain(format!("pivot `{}` is not a ring variable", raw.pivot)))?;
    let order = raw.order.map(|o| order_in(&target, &o)).transpose()?;
    let n = template.vars().arity();
    let mut slices = Vec::new();
    for (k, s) in raw.slices.iter().enumerate() {
        let what = format!("slice {}", k + 1);
        let gamma = scalar(&s.gamma, &what)?;
        let observation = match (&s.points, &s.curve) {
            (Some(points), None) => {
                let mut out = Vec::new();
                for p in points {
                    if p.len() != n {
                        return Err(FormatError::plain(format!("{what}: points need {n} coordinates")));
                    }
                    out.push(p.iter().map(|c| scalar(c, &what)).collect::<Result<Vec<_>, _>>()?);
                }
                Observation::Points(out)
            }
            (None, Some(curve)) => Observation::Curve(poly_in(template.vars(), curve, &what)?),
            _ => {
                return Err(FormatError::plain(format!(
                    "{what}: give exactly one of `points` or `curve`"
                )))
            }
        };
        slices.push(SliceObservation { gamma, observation });
    }
    Ok(DetectFile {
        template,
        target,
        pivot,
        order,
        slices,
    })
}

// ---------------------------------------------------------------------------

/// Parses `L` written as a linear polynomial. The pivot is the first ring
/// variable occurring in it; `L` is scaled so the pivot has coefficient one.
pub fn parse_linear_form(ring: &Arc<RingSpec>, text: &str) -> Result<LinearForm, FormatError> {
    let l = poly_in(ring, text, "linear form")?;
    if l.total_degree().unwrap_or(0) != 1 {
        return Err(FormatError::plain("linear form: expected a polynomial of degree one"));
    }
    let pivot = l.variables()[0];
    let lead = l
        .coefficient(&crate::monomial::PowerProduct::var(ring.arity(), pivot))
        .cloned()
        .unwrap();
    let l = l.scale(&lead.recip());
    let mut tail = Vec::new();
    let mut gamma = Rational::from_integer(0.into());
    for (t, c) in l.terms() {
        match t.support().next() {
            Some(j) if j == pivot => {}
            Some(j) => tail.push((j, -c.clone())),
            None => gamma = -c.clone(),
        }
    }
    LinearForm::new(ring, pivot, tail, gamma).map_err(|e| FormatError::plain(e.to_string()))
}

/// Parses a homogeneous `L = x_i - Σ c_j x_j`, pivot chosen as in [`parse_linear_form`].
pub fn parse_hom_linear_form(ring: &Arc<RingSpec>, text: &str) -> Result<HomLinearForm, FormatError> {
    let form = parse_linear_form(ring, text)?;
    if !form.gamma().is_zero() {
        return Err(FormatError::plain("linear form: expected a homogeneous form"));
    }
    HomLinearForm::new(ring, form.pivot(), form.tail().to_vec()).map_err(|e| FormatError::plain(e.to_string()))
}

/// Parses a comma-separated point such as `1,2/3,-4`.
pub fn parse_point(text: &str) -> Result<Vec<Rational>, FormatError> {
    text.split(',')
        .map(|c| {
            parse_rational(c.trim())
                .ok_or_else(|| FormatError::plain(format!("`{}` is not a rational number", c.trim())))
        })
        .collect()
}

/// `p/q` text for a point.
pub fn format_point(p: &[Rational]) -> Vec<String> {
    p.iter().map(format_rational).collect()
}
