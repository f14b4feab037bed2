//! Hough transforms of points with respect to a family, detection of curves
//! through given points, and surfaces rebuilt from detected slice curves.

use std::sync::Arc;

use num_traits::Zero;
use rayon::prelude::*;
use thiserror::Error;

use crate::family::{Family, FamilyError};
use crate::field::Rational;
use crate::groebner::{dimension, eliminate, reduced_groebner, GroebnerBasis, GroebnerError, Ideal};
use crate::linalg::{solve_affine, Solution};
use crate::monomial::PowerProduct;
use crate::order::TermOrder;
use crate::poly::Polynomial;
use crate::ring::RingSpec;
use crate::section::{common_lifting, MembershipOracle, SectionError, SliceFamily};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HoughError {
    #[error("the family is not linear in the parameters")]
    NotLinearInParams,
    #[error("the Hough transform has dimension {0}; no single point")]
    Underdetermined(i64),
    #[error("the Hough transform is empty")]
    Inconsistent,
    #[error("slice {slice}: {reason}")]
    Detection { slice: usize, reason: String },
    #[error("template does not fit: {0}")]
    TemplateMismatch(String),
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error(transparent)]
    Groebner(#[from] GroebnerError),
    #[error(transparent)]
    Section(#[from] SectionError),
}

/// `H_p = Γ_{a,p}` as an ideal of `Q[a]`.
#[derive(Clone, Debug, PartialEq)]
pub struct HoughResult {
    /// Reduced DegRevLex basis.
    pub ideal: GroebnerBasis,
    /// `-1` when empty.
    pub dimension: i64,
    pub empty: bool,
    /// The unique point, in the linear zero-dimensional case.
    pub solution: Option<Vec<Rational>>,
}

fn param_degree(family: &Family, g: &Polynomial) -> u32 {
    let m = family.params().arity();
    g.terms()
        .map(|(t, _)| t.exponents()[..m].iter().sum::<u32>())
        .max()
        .unwrap_or(0)
}

/// Whether every generator has degree at most one in the parameters.
pub fn is_linear_in_params(family: &Family) -> bool {
    family.generators().iter().all(|g| param_degree(family, g) <= 1)
}

/// Rows `[c_1 .. c_m | -c_0]` of affine polynomials `c_0 + Σ c_i a_i`.
fn affine_rows(polys: &[Polynomial], m: usize) -> Vec<Vec<Rational>> {
    polys
        .iter()
        .filter(|p| !p.is_zero())
        .map(|p| {
            let mut row = vec![Rational::zero(); m + 1];
            for (t, c) in p.terms() {
                match t.support().next() {
                    Some(i) => row[i] = c.clone(),
                    None => row[m] = -c.clone(),
                }
            }
            row
        })
        .collect()
}

fn rows_to_ideal(ring: &Arc<RingSpec>, rows: &[Vec<Rational>]) -> Ideal {
    let m = ring.arity();
    let gens = rows
        .iter()
        .map(|row| {
            let mut p = Polynomial::constant(ring, -row[m].clone());
            for (i, c) in row[..m].iter().enumerate() {
                p.add_term(PowerProduct::var(m, i), c.clone());
            }
            p
        })
        .collect();
    Ideal::new(ring, gens).expect("same ring")
}

fn summarize(ring: &Arc<RingSpec>, gens: Vec<Polynomial>) -> Result<(GroebnerBasis, i64), HoughError> {
    let order = TermOrder::DegRevLex;
    let gb = reduced_groebner(&order, &Ideal::new(ring, gens)?)?;
    let dim = dimension(&gb.to_ideal(), &order)?;
    Ok((gb, dim))
}

pub fn hough_ideal(family: &Family, p: &[Rational]) -> Result<HoughResult, HoughError> {
    let gens = family.substitute_point(p)?;
    let (ideal, dim) = summarize(family.params(), gens.clone())?;
    let empty = ideal.is_unit();
    let solution = if !empty && dim == 0 && is_linear_in_params(family) {
        match solve_affine(affine_rows(&gens, family.params().arity()), family.params().arity()) {
            Solution::Unique(v) => Some(v),
            _ => None,
        }
    } else {
        None
    };
    Ok(HoughResult {
        ideal,
        dimension: if empty { -1 } else { dim },
        empty,
        solution,
    })
}

/// Dimension count for the transform of a generic point of the image.
#[derive(Clone, Debug, PartialEq)]
pub struct HoughDimension {
    /// `dim F`, the dimension of `I(a, x)` in `Q[a, x]`.
    pub family: i64,
    /// `dim Y`, the dimension of the closure of the image of `Ψ`.
    pub image: i64,
    /// `dim F - dim Y`.
    pub generic: i64,
    /// `Ψ` dominant and `dim F = m`, so the generic transform is finite.
    pub zero_dimensional: bool,
}

/// `I(a, x) ∩ Q[x]`, the ideal of the closure of the image of `Ψ`.
pub fn image_ideal(family: &Family) -> Result<Ideal, HoughError> {
    let m = family.params().arity();
    let drop: Vec<usize> = (0..m).collect();
    let elim = eliminate(&family.ideal(), &drop)?;
    let map: Vec<usize> = (0..family.vars().arity()).collect();
    let gens = elim.generators().iter().map(|g| g.remap(family.vars(), &map)).collect();
    Ok(Ideal::new(family.vars(), gens)?)
}

pub fn generic_hough_dimension(family: &Family) -> Result<HoughDimension, HoughError> {
    let order = TermOrder::DegRevLex;
    let dim_f = dimension(&family.ideal(), &order)?;
    let dim_y = dimension(&image_ideal(family)?, &order)?;
    let m = family.params().arity() as i64;
    let n = family.vars().arity() as i64;
    Ok(HoughDimension {
        family: dim_f,
        image: dim_y,
        generic: dim_f - dim_y,
        zero_dimensional: dim_y == n && dim_f == m,
    })
}

/// The single rational point of `H_p` for a family linear in the parameters.
pub fn solve_linear_hough(family: &Family, p: &[Rational]) -> Result<Vec<Rational>, HoughError> {
    if !is_linear_in_params(family) {
        return Err(HoughError::NotLinearInParams);
    }
    let m = family.params().arity();
    let gens = family.substitute_point(p)?;
    match solve_affine(affine_rows(&gens, m), m) {
        Solution::Unique(v) => Ok(v),
        Solution::Underdetermined { rank, .. } => Err(HoughError::Underdetermined((m - rank) as i64)),
        Solution::Inconsistent => Err(HoughError::Inconsistent),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum DetectionResult {
    /// The unique parameter point whose fiber contains every input point.
    Point(Vec<Rational>),
    /// The intersection of the transforms is positive-dimensional (or, for a
    /// family that is not linear in the parameters, not a single rational point).
    Ideal { basis: GroebnerBasis, dimension: i64 },
    /// No fiber contains all points.
    Inconsistent,
}

fn on_fiber(family: &Family, alpha: &[Rational], p: &[Rational]) -> bool {
    let m = alpha.len();
    let point: Vec<Rational> = alpha.iter().chain(p).cloned().collect();
    debug_assert_eq!(point.len(), m + family.vars().arity());
    family.generators().iter().all(|g| g.evaluate(&point).is_zero())
}

/// Intersects the Hough transforms of `points`.
pub fn detect(family: &Family, points: &[Vec<Rational>]) -> Result<DetectionResult, HoughError> {
    let m = family.params().arity();
    let mut gens = Vec::new();
    for p in points {
        gens.extend(family.substitute_point(p)?);
    }
    if !is_linear_in_params(family) {
        let (basis, dim) = summarize(family.params(), gens)?;
        return Ok(if basis.is_unit() {
            DetectionResult::Inconsistent
        } else {
            DetectionResult::Ideal { basis, dimension: dim }
        });
    }
    Ok(match solve_affine(affine_rows(&gens, m), m) {
        Solution::Unique(alpha) => {
            if points.iter().all(|p| on_fiber(family, &alpha, p)) {
                DetectionResult::Point(alpha)
            } else {
                DetectionResult::Inconsistent
            }
        }
        Solution::Underdetermined { rank, rows } => {
            let ideal = rows_to_ideal(family.params(), &rows);
            let basis = reduced_groebner(&TermOrder::DegRevLex, &ideal)?;
            DetectionResult::Ideal {
                basis,
                dimension: (m - rank) as i64,
            }
        }
        Solution::Inconsistent => DetectionResult::Inconsistent,
    })
}

/// What was seen on one slice.
#[derive(Clone, Debug, PartialEq)]
pub enum Observation {
    /// Points of the slice curve, in the coordinates of the template.
    Points(Vec<Vec<Rational>>),
    /// The slice curve itself (any scalar multiple of a template member).
    Curve(Polynomial),
}

#[derive(Clone, Debug, PartialEq)]
pub struct SliceObservation {
    pub gamma: Rational,
    pub observation: Observation,
}

/// Parameters `α` with `T(α, x) = λ h` for the single template generator `T`.
fn match_curve(template: &Family, h: &Polynomial) -> Result<Vec<Rational>, String> {
    let m = template.params().arity();
    let t = &template.generators()[0];
    let over = template.over_parameter_field(t);
    let mut support: Vec<PowerProduct> = over.terms().map(|(x, _)| x.clone()).collect();
    support.extend(h.terms().map(|(x, _)| x.clone()));
    support.sort();
    support.dedup();
    // unknowns a_1 .. a_m, λ
    let mut rows = Vec::with_capacity(support.len());
    for x in &support {
        let mut row = vec![Rational::zero(); m + 2];
        if let Some(c) = over.coefficient(x) {
            let num = c.numerator();
            if num.ring().arity() == 0 {
                row[m + 1] = -num.as_constant().unwrap();
            } else {
                for (a, v) in num.terms() {
                    match a.support().next() {
                        Some(i) => row[i] = v.clone(),
                        None => row[m + 1] = -v.clone(),
                    }
                }
            }
        }
        row[m] = -h.coefficient(x).cloned().unwrap_or_else(Rational::zero);
        rows.push(row);
    }
    match solve_affine(rows, m + 1) {
        Solution::Unique(mut v) => {
            v.truncate(m);
            Ok(v)
        }
        Solution::Underdetermined { .. } => Err("the curve does not determine the parameters".into()),
        Solution::Inconsistent => Err("the curve is not a member of the template".into()),
    }
}

fn slice_curve(template: &Family, k: usize, obs: &SliceObservation) -> Result<Polynomial, HoughError> {
    let fail = |reason: String| HoughError::Detection { slice: k, reason };
    let alpha = match &obs.observation {
        Observation::Points(points) => match detect(template, points)? {
            DetectionResult::Point(alpha) => alpha,
            DetectionResult::Ideal { dimension, .. } => {
                return Err(fail(format!(
                    "the points leave a {dimension}-dimensional set of curves"
                )))
            }
            DetectionResult::Inconsistent => return Err(fail("no template curve passes through the points".into())),
        },
        Observation::Curve(h) => {
            if h.ring() != template.vars() {
                return Err(fail("curve is not in the template variables".into()));
            }
            match_curve(template, h).map_err(fail)?
        }
    };
    let fiber = template.fiber(&alpha)?;
    Ok(fiber
        .generators()
        .first()
        .cloned()
        .unwrap_or_else(|| Polynomial::zero(template.vars())))
}

/// Detects one template curve per slice and lifts them to a surface in
/// `target`, where the slices are `x_pivot = γ_k`.
pub fn reconstruct_surface(
    template: &Family,
    slices: &[SliceObservation],
    target: &Arc<RingSpec>,
    pivot: usize,
    order: &TermOrder,
    oracle: &MembershipOracle,
) -> Result<Polynomial, HoughError> {
    if !is_linear_in_params(template) {
        return Err(HoughError::NotLinearInParams);
    }
    if template.generators().len() != 1 {
        return Err(HoughError::TemplateMismatch(format!(
            "expected one generator, found {}",
            template.generators().len()
        )));
    }
    if pivot >= target.arity() || target.without(pivot).names() != template.vars().names() {
        return Err(HoughError::TemplateMismatch(format!(
            "template variables [{}] do not match the target ring without its pivot",
            template.vars().names().join(",")
        )));
    }
    order.validate(target.arity()).map_err(GroebnerError::from)?;
    let family = SliceFamily::new(
        target,
        pivot,
        Vec::new(),
        slices.iter().map(|s| s.gamma.clone()).collect(),
    )?;
    let curves: Vec<Polynomial> = slices
        .par_iter()
        .enumerate()
        .map(|(k, s)| slice_curve(template, k, s))
        .collect::<Result<_, _>>()?;
    let hat = order.restrict(pivot, target.arity());
    let lead = curves[0].leading_term(&hat).cloned();
    if curves.iter().any(|c| c.leading_term(&hat).cloned() != lead) {
        return Err(SectionError::NonGenericSlices.into());
    }
    let hat_ring = family.section_ring();
    let values: Vec<Polynomial> = curves
        .iter()
        .map(|c| c.remap(&hat_ring, &(0..hat_ring.arity()).collect::<Vec<_>>()))
        .collect();
    let surface = common_lifting(&family, &values)?;
    if oracle.check(&surface) == Some(false) {
        return Err(SectionError::MembershipFailed(0).into());
    }
    Ok(surface)
}
