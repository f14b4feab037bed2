//! Parametric families of ideals `I(a, x) ⊆ Q[a, x]`.
//!
//! Coefficients of the universal basis live in the rational function field
//! `Q(a)`, represented by [`RationalFunction`].

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::field::{format_rational, CoefficientText, Field, Rational};
use crate::groebner::{dimension, divide_exact, eliminate, reduced_groebner, GroebnerBasis, GroebnerError, Ideal};
use crate::monomial::PowerProduct;
use crate::order::TermOrder;
use crate::poly::Polynomial;
use crate::ring::{RingError, RingSpec};
use crate::section::{section_report, LinearForm, SectionError, SectionReport};
use crate::text::print_polynomial;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FamilyError {
    #[error("the parameters are dependent: the basis over Q(a) is {{1}}")]
    DependentParameters,
    #[error("the point lies outside the σ-free set (a denominator vanishes)")]
    DenominatorVanishes,
    #[error("expected {expected} values, found {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Groebner(#[from] GroebnerError),
    #[error(transparent)]
    Section(#[from] SectionError),
}

static REDUCE_FRACTIONS: AtomicBool = AtomicBool::new(true);

/// Turns gcd cancellation in [`RationalFunction`] on or off (default on).
/// Values are unaffected; only the size of numerators and denominators is.
pub fn set_fraction_reduction(enabled: bool) {
    REDUCE_FRACTIONS.store(enabled, Ordering::Relaxed);
}

fn reducing() -> bool {
    REDUCE_FRACTIONS.load(Ordering::Relaxed)
}

// ---------------------------------------------------------------------------
// multivariate gcd over Q

fn coefficients_in(f: &Polynomial, v: usize) -> Vec<Polynomial> {
    let mut out = vec![Polynomial::zero(f.ring()); f.degree_in(v) as usize + 1];
    for (t, c) in f.terms() {
        let mut rest = t.clone();
        rest.set(v, 0);
        out[t.log(v) as usize].add_term(rest, c.clone());
    }
    out
}

fn content_in(f: &Polynomial, v: usize) -> Polynomial {
    coefficients_in(f, v)
        .iter()
        .filter(|c| !c.is_zero())
        .fold(Polynomial::zero(f.ring()), |acc, c| gcd_rec(&acc, c))
}

fn primitive_in(f: &Polynomial, v: usize) -> Polynomial {
    let c = content_in(f, v);
    divide_exact(f, &c)
        .expect("content divides")
        .primitive(&TermOrder::DegRevLex)
}

fn pseudo_remainder(a: &Polynomial, b: &Polynomial, v: usize) -> Polynomial {
    let n = b.degree_in(v);
    let lb = coefficients_in(b, v).pop().expect("nonzero");
    let mut r = a.clone();
    while !r.is_zero() && r.involves(v) && r.degree_in(v) >= n {
        let d = r.degree_in(v);
        let lr = coefficients_in(&r, v).pop().expect("nonzero");
        let mut shift = PowerProduct::one(r.ring().arity());
        shift.set(v, d - n);
        r = &(&lb * &r) - &(&lr * &b.mul_monomial(&shift, &Rational::one()));
        r = r.primitive(&TermOrder::DegRevLex);
    }
    r
}

fn gcd_rec(f: &Polynomial, g: &Polynomial) -> Polynomial {
    if f.is_zero() {
        return g.clone();
    }
    if g.is_zero() {
        return f.clone();
    }
    if f.is_constant() || g.is_constant() {
        return Polynomial::one(f.ring());
    }
    let v = (0..f.ring().arity())
        .find(|&i| f.involves(i) || g.involves(i))
        .expect("non-constant");
    if !f.involves(v) {
        return gcd_rec(f, &content_in(g, v));
    }
    if !g.involves(v) {
        return gcd_rec(&content_in(f, v), g);
    }
    let c = gcd_rec(&content_in(f, v), &content_in(g, v));
    let (mut a, mut b) = (primitive_in(f, v), primitive_in(g, v));
    if a.degree_in(v) < b.degree_in(v) {
        std::mem::swap(&mut a, &mut b);
    }
    let h = loop {
        let r = pseudo_remainder(&a, &b, v);
        if r.is_zero() {
            break b;
        }
        if !r.involves(v) {
            break Polynomial::one(f.ring());
        }
        a = b;
        b = primitive_in(&r, v);
    };
    &c * &primitive_in(&h, v)
}

/// Greatest common divisor in `Q[a]`, monic under DegRevLex (zero only when
/// both inputs are zero).
pub fn poly_gcd(f: &Polynomial, g: &Polynomial) -> Polynomial {
    let h = gcd_rec(f, g);
    if h.is_zero() {
        h
    } else {
        h.monic(&TermOrder::DegRevLex)
    }
}

/// Least common multiple in `Q[a]`, monic under DegRevLex.
pub fn poly_lcm(f: &Polynomial, g: &Polynomial) -> Polynomial {
    if f.is_zero() || g.is_zero() {
        return Polynomial::zero(f.ring());
    }
    let prod = f * g;
    divide_exact(&prod, &poly_gcd(f, g))
        .expect("gcd divides")
        .monic(&TermOrder::DegRevLex)
}

// ---------------------------------------------------------------------------
// rational functions

/// An element `num / den` of `Q(a1, .., am)`. Constants are stored over the
/// ring with no variables so that they combine with any parameter ring.
#[derive(Clone)]
pub struct RationalFunction {
    num: Polynomial,
    den: Polynomial,
}

fn lift(p: &Polynomial, ring: &Arc<RingSpec>) -> Polynomial {
    if p.ring().arity() == 0 && ring.arity() > 0 {
        Polynomial::constant(ring, p.as_constant().expect("constant"))
    } else {
        p.clone()
    }
}

impl RationalFunction {
    pub fn constant(c: Rational) -> Self {
        let scalar = RingSpec::scalar();
        RationalFunction {
            num: Polynomial::constant(&scalar, c),
            den: Polynomial::one(&scalar),
        }
    }

    pub fn from_polynomial(p: Polynomial) -> Self {
        let den = Polynomial::one(p.ring());
        Self::new(p, den)
    }

    /// `num / den`, normalized. Panics when `den` is zero.
    pub fn new(num: Polynomial, den: Polynomial) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        let ring = if num.ring().arity() > 0 {
            num.ring().clone()
        } else {
            den.ring().clone()
        };
        let (mut num, mut den) = (lift(&num, &ring), lift(&den, &ring));
        if num.is_zero() {
            return Self::constant(Rational::zero());
        }
        if reducing() && !den.is_constant() {
            let g = poly_gcd(&num, &den);
            if !g.is_constant() {
                num = divide_exact(&num, &g).expect("gcd divides");
                den = divide_exact(&den, &g).expect("gcd divides");
            }
        }
        let lc = den.leading(&TermOrder::DegRevLex).expect("nonzero").1.inv();
        num = num.scale(&lc);
        den = den.scale(&lc);
        if num.is_constant() && den.is_constant() {
            return Self::constant(num.as_constant().unwrap() / den.as_constant().unwrap());
        }
        RationalFunction { num, den }
    }

    pub fn numerator(&self) -> &Polynomial {
        &self.num
    }

    pub fn denominator(&self) -> &Polynomial {
        &self.den
    }

    /// Value at a point of `Q^m`; `None` when the denominator vanishes there.
    pub fn evaluate(&self, point: &[Rational]) -> Option<Rational> {
        let at = |p: &Polynomial| match p.as_constant() {
            Some(c) => c,
            None => p.evaluate(point),
        };
        let d = at(&self.den);
        (!d.is_zero()).then(|| at(&self.num) / d)
    }

    fn ring(&self) -> &Arc<RingSpec> {
        self.num.ring()
    }

    fn combine(&self, other: &Self) -> (Polynomial, Polynomial, Polynomial, Polynomial) {
        let ring = if self.ring().arity() > 0 {
            self.ring().clone()
        } else {
            other.ring().clone()
        };
        (
            lift(&self.num, &ring),
            lift(&self.den, &ring),
            lift(&other.num, &ring),
            lift(&other.den, &ring),
        )
    }

    pub fn text(&self) -> String {
        if let Some(c) = self.to_rational() {
            return format_rational(&c);
        }
        let order = TermOrder::DegRevLex;
        let num = print_polynomial(&order, &self.num);
        let num = if self.num.num_terms() > 1 {
            format!("({num})")
        } else {
            num
        };
        if self.den.is_one_poly() {
            return num;
        }
        let den = print_polynomial(&order, &self.den);
        let single_power = self.den.num_terms() == 1 && self.den.variables().len() == 1;
        if single_power {
            format!("{num}/{den}")
        } else {
            format!("{num}/({den})")
        }
    }
}

trait IsOne {
    fn is_one_poly(&self) -> bool;
}

impl IsOne for Polynomial {
    fn is_one_poly(&self) -> bool {
        self.as_constant().is_some_and(|c| c.is_one())
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text())
    }
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text())
    }
}

impl PartialEq for RationalFunction {
    fn eq(&self, other: &Self) -> bool {
        let (a, b, c, d) = self.combine(other);
        &a * &d == &c * &b
    }
}

impl Zero for RationalFunction {
    fn zero() -> Self {
        Self::constant(Rational::zero())
    }

    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl One for RationalFunction {
    fn one() -> Self {
        Self::constant(Rational::one())
    }
}

impl Neg for RationalFunction {
    type Output = Self;

    fn neg(self) -> Self {
        RationalFunction {
            num: -&self.num,
            den: self.den,
        }
    }
}

impl Add<&RationalFunction> for RationalFunction {
    type Output = Self;

    fn add(self, other: &Self) -> Self {
        let (a, b, c, d) = self.combine(other);
        if b == d {
            return Self::new(&a + &c, b);
        }
        Self::new(&(&a * &d) + &(&c * &b), &b * &d)
    }
}

impl Sub<&RationalFunction> for RationalFunction {
    type Output = Self;

    fn sub(self, other: &Self) -> Self {
        self + &(-other.clone())
    }
}

impl Mul<&RationalFunction> for RationalFunction {
    type Output = Self;

    fn mul(self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let (a, b, c, d) = self.combine(other);
        Self::new(&a * &c, &b * &d)
    }
}

impl Div<&RationalFunction> for RationalFunction {
    type Output = Self;

    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, other: &Self) -> Self {
        self * &other.inv()
    }
}

macro_rules! by_value {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for RationalFunction {
            type Output = Self;

            fn $m(self, other: Self) -> Self {
                self.$m(&other)
            }
        }
    )*};
}

by_value!(Add add, Sub sub, Mul mul, Div div);

impl Field for RationalFunction {
    fn inv(&self) -> Self {
        assert!(!self.is_zero(), "inverse of zero");
        Self::new(self.den.clone(), self.num.clone())
    }

    fn from_rational(r: Rational) -> Self {
        Self::constant(r)
    }

    fn to_rational(&self) -> Option<Rational> {
        if self.num.is_constant() && self.den.is_constant() {
            return Some(self.num.as_constant()? / self.den.as_constant()?);
        }
        // only possible for unreduced fractions
        if self.den.is_constant() || self.num.total_degree() != self.den.total_degree() {
            return None;
        }
        divide_exact(&self.num, &self.den).and_then(|q| q.as_constant())
    }

    fn coefficient_text(&self) -> CoefficientText {
        match self.to_rational() {
            Some(c) => c.coefficient_text(),
            None => CoefficientText::Compound(self.text()),
        }
    }
}

// ---------------------------------------------------------------------------
// families

/// A family `I(a, x)` given by generators in `Q[a, x]`. The generators live in
/// the joined ring (parameters first, then the `x` variables).
#[derive(Clone, Debug, PartialEq)]
pub struct Family {
    params: Arc<RingSpec>,
    vars: Arc<RingSpec>,
    joined: Arc<RingSpec>,
    generators: Vec<Polynomial>,
}

impl Family {
    /// `generators` must live in `params.join(vars)`.
    pub fn new(params: &Arc<RingSpec>, vars: &Arc<RingSpec>, generators: Vec<Polynomial>) -> Result<Self, FamilyError> {
        let joined = params.join(vars)?;
        for g in &generators {
            if g.ring() != &joined {
                return Err(GroebnerError::Poly(crate::poly::PolyError::RingMismatch {
                    left: joined.names().join(","),
                    right: g.ring().names().join(","),
                })
                .into());
            }
        }
        let generators = generators.into_iter().filter(|g| !g.is_zero()).collect();
        Ok(Family {
            params: params.clone(),
            vars: vars.clone(),
            joined,
            generators,
        })
    }

    pub fn params(&self) -> &Arc<RingSpec> {
        &self.params
    }

    pub fn vars(&self) -> &Arc<RingSpec> {
        &self.vars
    }

    /// `Q[a, x]`.
    pub fn joined(&self) -> &Arc<RingSpec> {
        &self.joined
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.generators
    }

    pub fn ideal(&self) -> Ideal {
        Ideal::new(&self.joined, self.generators.clone()).expect("same ring")
    }

    /// A generator as a polynomial in `x` over `Q(a)`.
    pub fn over_parameter_field(&self, f: &Polynomial) -> Polynomial<RationalFunction> {
        let m = self.params.arity();
        let mut parts: std::collections::BTreeMap<PowerProduct, Polynomial> = Default::default();
        for (t, c) in f.terms() {
            let e = t.exponents();
            let a = PowerProduct::from_exponents(&e[..m]);
            let x = PowerProduct::from_exponents(&e[m..]);
            parts
                .entry(x)
                .or_insert_with(|| Polynomial::zero(&self.params))
                .add_term(a, c.clone());
        }
        Polynomial::from_terms(
            &self.vars,
            parts
                .into_iter()
                .map(|(x, p)| (x, RationalFunction::from_polynomial(p))),
        )
    }

    /// The generators with `x := p`, as polynomials in `Q[a]`.
    pub fn substitute_point(&self, p: &[Rational]) -> Result<Vec<Polynomial>, FamilyError> {
        let (m, n) = (self.params.arity(), self.vars.arity());
        if p.len() != n {
            return Err(FamilyError::ArityMismatch {
                expected: n,
                found: p.len(),
            });
        }
        let values: Vec<(usize, Rational)> = p.iter().cloned().enumerate().map(|(j, v)| (m + j, v)).collect();
        let map: Vec<usize> = (0..m + n).map(|i| i.min(m.saturating_sub(1))).collect();
        Ok(self
            .generators
            .iter()
            .map(|g| g.evaluate_partial(&values).remap(&self.params, &map))
            .collect())
    }

    /// The fiber ideal `I(α, x) ⊆ Q[x]`.
    pub fn fiber(&self, alpha: &[Rational]) -> Result<Ideal, FamilyError> {
        let (m, n) = (self.params.arity(), self.vars.arity());
        if alpha.len() != m {
            return Err(FamilyError::ArityMismatch {
                expected: m,
                found: alpha.len(),
            });
        }
        let values: Vec<(usize, Rational)> = alpha.iter().cloned().enumerate().collect();
        let map: Vec<usize> = (0..m + n).map(|i| i.saturating_sub(m)).collect();
        let gens = self
            .generators
            .iter()
            .map(|g| g.evaluate_partial(&values).remap(&self.vars, &map))
            .collect();
        Ok(Ideal::new(&self.vars, gens)?)
    }
}

/// The universal reduced σ-Gröbner basis `G_σ(a, x)` over `Q(a)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ParametricGb {
    params: Arc<RingSpec>,
    basis: GroebnerBasis<RationalFunction>,
}

impl ParametricGb {
    pub fn params(&self) -> &Arc<RingSpec> {
        &self.params
    }

    pub fn basis(&self) -> &GroebnerBasis<RationalFunction> {
        &self.basis
    }

    pub fn elements(&self) -> &[Polynomial<RationalFunction>] {
        self.basis.elements()
    }

    pub fn order(&self) -> &TermOrder {
        self.basis.order()
    }
}

fn parametric_basis(family: &Family, order: &TermOrder) -> Result<GroebnerBasis<RationalFunction>, FamilyError> {
    let gens = family
        .generators
        .iter()
        .map(|g| family.over_parameter_field(g))
        .collect();
    Ok(reduced_groebner(order, &Ideal::new(&family.vars, gens)?)?)
}

/// Buchberger over `Q(a)`.
pub fn param_gb(family: &Family, order: &TermOrder) -> Result<ParametricGb, FamilyError> {
    let basis = parametric_basis(family, order)?;
    if basis.is_unit() {
        return Err(FamilyError::DependentParameters);
    }
    Ok(ParametricGb {
        params: family.params.clone(),
        basis,
    })
}

/// `d_σ`: the lcm of all coefficient denominators, as a polynomial in `Q[a]`.
pub fn sigma_denominator(gb: &ParametricGb) -> Polynomial {
    let mut acc = Polynomial::one(&gb.params);
    for g in gb.elements() {
        for (_, c) in g.terms() {
            acc = poly_lcm(&acc, &lift(c.denominator(), &gb.params));
        }
    }
    acc
}

/// Coefficients not in `Q`, elements in σ-increasing leading-term order and
/// terms σ-decreasing within each element.
pub fn ncc_list(gb: &ParametricGb) -> Vec<RationalFunction> {
    let order = gb.order();
    gb.elements()
        .iter()
        .flat_map(|g| g.sorted_terms(order).into_iter().map(|(_, c)| c.clone()))
        .filter(|c| c.to_rational().is_none())
        .collect()
}

/// The reduced basis of the fiber over `α ∈ U_σ`, obtained by evaluating
/// the coefficients of `G_σ`.
pub fn specialize_fiber(gb: &ParametricGb, alpha: &[Rational]) -> Result<GroebnerBasis, FamilyError> {
    let m = gb.params.arity();
    if alpha.len() != m {
        return Err(FamilyError::ArityMismatch {
            expected: m,
            found: alpha.len(),
        });
    }
    let d = sigma_denominator(gb);
    if d.evaluate(alpha).is_zero() {
        return Err(FamilyError::DenominatorVanishes);
    }
    let ring = gb.basis.ring();
    let elements: Vec<Polynomial> = gb
        .elements()
        .iter()
        .map(|g| g.map_coefficients(|c| c.evaluate(alpha).expect("denominator divides d_σ")))
        .collect();
    let mut out = GroebnerBasis::from_basis(ring, gb.order(), elements);
    out.set_flags(true, true);
    Ok(out)
}

/// Whether `I(a, x) ∩ Q[a] = (0)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Independence {
    pub independent: bool,
    /// A nonzero element of `I(a, x) ∩ Q[a]` when dependent.
    pub witness: Option<Polynomial>,
    /// Whether the basis over `Q(a)` agrees (it is `{1}` exactly when dependent).
    pub cross_checked: bool,
}

pub fn params_independent(family: &Family) -> Result<Independence, FamilyError> {
    let (m, n) = (family.params.arity(), family.vars.arity());
    let drop: Vec<usize> = (m..m + n).collect();
    let elim = eliminate(&family.ideal(), &drop)?;
    let witness = elim.generators().first().map(|w| {
        w.remap(&family.params, &(0..m).collect::<Vec<_>>())
            .primitive(&TermOrder::DegRevLex)
    });
    let independent = witness.is_none();
    let unit = parametric_basis(family, &TermOrder::DegRevLex)?.is_unit();
    Ok(Independence {
        independent,
        witness,
        cross_checked: unit != independent,
    })
}

/// The σ-scheme: the variety parametrized by the NCC list.
#[derive(Clone, Debug, PartialEq)]
pub struct SigmaScheme {
    /// `y_j = f_j / d_j`.
    pub coordinates: Vec<RationalFunction>,
    /// The ring of the `y_j`; `None` for the single-point scheme.
    pub ring: Option<Arc<RingSpec>>,
    pub implicit: Option<Ideal>,
    pub dimension: Option<i64>,
}

pub fn sigma_scheme(gb: &ParametricGb, implicitize: bool) -> Result<SigmaScheme, FamilyError> {
    let coords = ncc_list(gb);
    if coords.is_empty() {
        return Ok(SigmaScheme {
            coordinates: coords,
            ring: None,
            implicit: None,
            dimension: implicitize.then_some(0),
        });
    }
    let params = &gb.params;
    let m = params.arity();
    let mut names: Vec<String> = Vec::new();
    for j in 1..=coords.len() {
        let mut name = format!("y{j}");
        while params.index_of(&name).is_some() {
            name.insert(0, '_');
        }
        names.push(name);
    }
    let yring = RingSpec::new(&names)?;
    if !implicitize {
        return Ok(SigmaScheme {
            coordinates: coords,
            ring: Some(yring),
            implicit: None,
            dimension: None,
        });
    }
    let tag = params.join(&yring)?.fresh_name("t");
    let mut all = vec![tag];
    all.extend(params.names().iter().cloned());
    all.extend(names.iter().cloned());
    let big = RingSpec::new(&all)?;
    let into_big = |p: &Polynomial| {
        let p = lift(p, params);
        p.remap(&big, &(1..=m).collect::<Vec<_>>())
    };
    let mut gens = Vec::new();
    let mut denominators = Polynomial::one(&big);
    for (j, c) in coords.iter().enumerate() {
        let d = into_big(c.denominator());
        let y = Polynomial::var(&big, 1 + m + j);
        gens.push(&(&y * &d) - &into_big(c.numerator()));
        denominators = poly_lcm(&denominators, &d);
    }
    gens.push(&Polynomial::one(&big) - &(&Polynomial::var(&big, 0) * &denominators));
    let drop: Vec<usize> = (0..=m).collect();
    let implicit = eliminate(&Ideal::new(&big, gens)?, &drop)?;
    let implicit = Ideal::new(
        &yring,
        implicit
            .generators()
            .iter()
            .map(|g| g.remap(&yring, &(0..yring.arity()).collect::<Vec<_>>()))
            .collect(),
    )?;
    let dim = dimension(&implicit, &TermOrder::DegRevLex)?;
    Ok(SigmaScheme {
        coordinates: coords,
        ring: Some(yring),
        implicit: Some(implicit),
        dimension: Some(dim),
    })
}

/// A family cut by a hyperplane `L` in the `x` variables.
#[derive(Clone, Debug, PartialEq)]
pub struct FamilySection {
    pub family: Family,
    pub report: SectionReport<RationalFunction>,
    pub independence: Independence,
}

impl FamilySection {
    pub fn hypothesis_holds(&self) -> bool {
        self.report.basis.is_some()
    }
}

/// Sections the universal basis of `family` by `form` (a linear form on the
/// `x` ring) and re-derives parameter independence for the sectioned family.
/// A violated leading-term hypothesis is reported, not raised.
pub fn family_section(family: &Family, form: &LinearForm, order: &TermOrder) -> Result<FamilySection, FamilyError> {
    if form.ring() != &family.vars {
        return Err(FamilyError::ArityMismatch {
            expected: family.vars.arity(),
            found: form.ring().arity(),
        });
    }
    let gb = param_gb(family, order)?;
    let report = section_report(gb.basis(), form);
    let m = family.params.arity();
    let lifted = LinearForm::new(
        &family.joined,
        m + form.pivot(),
        form.tail().iter().map(|(j, c)| (m + j, c.clone())).collect(),
        form.gamma().clone(),
    )?;
    let sectioned = Family::new(
        &family.params,
        &form.section_ring(),
        family.generators.iter().map(|g| lifted.apply(g)).collect(),
    )?;
    let independence = params_independent(&sectioned)?;
    Ok(FamilySection {
        family: sectioned,
        report,
        independence,
    })
}
