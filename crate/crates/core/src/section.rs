//! Hyperplane sections of ideals and Gröbner bases, lifting, common lifting
//! by interpolation, reconstruction from parallel slices, and implicitization.

use std::sync::Arc;

use num_traits::{One, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::field::{format_rational, Field, Rational};
use crate::groebner::{
    eliminate, eliminate_principal, is_groebner, is_zero_divisor, normal_form, reduced_groebner, GroebnerBasis,
    GroebnerError, Ideal,
};
use crate::monomial::PowerProduct;
use crate::order::TermOrder;
use crate::poly::{PolyError, Polynomial};
use crate::ring::RingSpec;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SectionError {
    #[error("leading terms change under the section for basis elements {0:?}")]
    HypothesisViolation(Vec<usize>),
    #[error("the linear form divides zero modulo the ideal")]
    ZeroDivisor,
    #[error("the sectioned set is not a Groebner basis of the sectioned ideal")]
    NotASectionBasis,
    #[error("element {0} does not belong to the ideal")]
    NotInIdeal(usize),
    #[error("slice bases have different leading terms; choose other slices")]
    NonGenericSlices,
    #[error("lifted element {0} has the wrong leading term; more slices are needed")]
    LTDrift(usize),
    #[error("lifted element {0} is rejected by the membership oracle")]
    MembershipFailed(usize),
    #[error("slice offsets must be pairwise distinct (repeated {0})")]
    DuplicateGamma(String),
    #[error("expected {expected} values, got {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("input ideal is not homogeneous")]
    Inhomogeneous,
    #[error("term ordering is not of {0}-DegRev type")]
    WrongOrderType(String),
    #[error("slice basis uses ordering {found}, expected {expected}")]
    OrderMismatch { expected: String, found: String },
    #[error("elimination ideal has {0} generators; expected a principal ideal")]
    NotPrincipal(usize),
    #[error("no slice-based reconstruction after {0} attempts")]
    RetryLimit(usize),
    #[error("invalid linear form: {0}")]
    InvalidForm(String),
    #[error(transparent)]
    Groebner(#[from] GroebnerError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

impl SectionError {
    /// Whether the error reports a failed theorem hypothesis (as opposed to
    /// malformed input or an exhausted resource).
    pub fn is_hypothesis_failure(&self) -> bool {
        matches!(
            self,
            SectionError::HypothesisViolation(_)
                | SectionError::ZeroDivisor
                | SectionError::NotASectionBasis
                | SectionError::NotInIdeal(_)
                | SectionError::NonGenericSlices
                | SectionError::LTDrift(_)
                | SectionError::MembershipFailed(_)
                | SectionError::NotPrincipal(_)
        )
    }
}

fn check_tail(ring: &RingSpec, pivot: usize, tail: &[(usize, Rational)]) -> Result<(), SectionError> {
    let n = ring.arity();
    if pivot >= n {
        return Err(SectionError::InvalidForm(format!("pivot index {pivot} out of range")));
    }
    for (j, _) in tail {
        if *j <= pivot || *j >= n {
            return Err(SectionError::InvalidForm(format!(
                "tail variable {} must come after the pivot {}",
                ring.names().get(*j).map(String::as_str).unwrap_or("?"),
                ring.name(pivot)
            )));
        }
    }
    Ok(())
}

fn tail_polynomial(ring: &Arc<RingSpec>, tail: &[(usize, Rational)]) -> Polynomial {
    Polynomial::from_terms(
        ring,
        tail.iter()
            .map(|(j, c)| (PowerProduct::var(ring.arity(), *j), c.clone())),
    )
}

/// `L = x_i - ℓ` with `ℓ = Σ_{j>i} c_j x_j + γ`.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearForm {
    ring: Arc<RingSpec>,
    pivot: usize,
    tail: Vec<(usize, Rational)>,
    gamma: Rational,
}

impl LinearForm {
    pub fn new(
        ring: &Arc<RingSpec>,
        pivot: usize,
        tail: Vec<(usize, Rational)>,
        gamma: Rational,
    ) -> Result<Self, SectionError> {
        check_tail(ring, pivot, &tail)?;
        let mut tail: Vec<_> = tail.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        tail.sort_by_key(|(j, _)| *j);
        Ok(LinearForm {
            ring: ring.clone(),
            pivot,
            tail,
            gamma,
        })
    }

    /// `L = x_i - γ`.
    pub fn axis(ring: &Arc<RingSpec>, pivot: usize, gamma: Rational) -> Result<Self, SectionError> {
        LinearForm::new(ring, pivot, Vec::new(), gamma)
    }

    pub fn ring(&self) -> &Arc<RingSpec> {
        &self.ring
    }

    pub fn pivot(&self) -> usize {
        self.pivot
    }

    pub fn tail(&self) -> &[(usize, Rational)] {
        &self.tail
    }

    pub fn gamma(&self) -> &Rational {
        &self.gamma
    }

    pub fn is_axis_aligned(&self) -> bool {
        self.tail.is_empty()
    }

    /// `ℓ` as a polynomial of the ambient ring.
    pub fn ell(&self) -> Polynomial {
        &tail_polynomial(&self.ring, &self.tail) + &Polynomial::constant(&self.ring, self.gamma.clone())
    }

    /// `L` itself.
    pub fn polynomial(&self) -> Polynomial {
        &Polynomial::var(&self.ring, self.pivot) - &self.ell()
    }

    /// The ring without the pivot variable.
    pub fn section_ring(&self) -> Arc<RingSpec> {
        self.ring.without(self.pivot)
    }

    /// `π_L(f)`, expressed in the ring without the pivot.
    pub fn apply<C: Field>(&self, f: &Polynomial<C>) -> Polynomial<C> {
        let ell = self.ell().map_coefficients(|c| C::from_rational(c.clone()));
        let sub = f.substitute(self.pivot, &ell).expect("same ring");
        sub.drop_variable(self.pivot).expect("pivot eliminated")
    }
}

/// `L = x_i - ℓ` with homogeneous `ℓ = Σ_{j≠i} c_j x_j`.
#[derive(Clone, Debug, PartialEq)]
pub struct HomLinearForm {
    ring: Arc<RingSpec>,
    pivot: usize,
    coefficients: Vec<(usize, Rational)>,
}

impl HomLinearForm {
    pub fn new(ring: &Arc<RingSpec>, pivot: usize, coefficients: Vec<(usize, Rational)>) -> Result<Self, SectionError> {
        let n = ring.arity();
        if pivot >= n || coefficients.iter().any(|(j, _)| *j == pivot || *j >= n) {
            return Err(SectionError::InvalidForm("bad index in homogeneous form".into()));
        }
        Ok(HomLinearForm {
            ring: ring.clone(),
            pivot,
            coefficients: coefficients.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        })
    }

    pub fn pivot(&self) -> usize {
        self.pivot
    }

    pub fn ell(&self) -> Polynomial {
        tail_polynomial(&self.ring, &self.coefficients)
    }

    /// The coordinate change `x_i -> x_i + ℓ`.
    pub fn theta(&self, f: &Polynomial) -> Polynomial {
        let image = &Polynomial::var(&self.ring, self.pivot) + &self.ell();
        f.substitute(self.pivot, &image).expect("same ring")
    }

    /// `x_i -> 0`, in the ring without the pivot.
    pub fn rho(&self, f: &Polynomial) -> Polynomial {
        let killed = f.evaluate_partial(&[(self.pivot, Rational::zero())]);
        killed.drop_variable(self.pivot).expect("pivot killed")
    }

    pub fn apply(&self, f: &Polynomial) -> Polynomial {
        let sub = f.substitute(self.pivot, &self.ell()).expect("same ring");
        sub.drop_variable(self.pivot).expect("pivot eliminated")
    }
}

/// Parallel forms `L_k = x_i - (Σ_{j>i} c_j x_j + γ_k)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SliceFamily {
    ring: Arc<RingSpec>,
    pivot: usize,
    tail: Vec<(usize, Rational)>,
    gammas: Vec<Rational>,
}

impl SliceFamily {
    pub fn new(
        ring: &Arc<RingSpec>,
        pivot: usize,
        tail: Vec<(usize, Rational)>,
        gammas: Vec<Rational>,
    ) -> Result<Self, SectionError> {
        check_tail(ring, pivot, &tail)?;
        if gammas.is_empty() {
            return Err(SectionError::InvalidForm("at least one slice is needed".into()));
        }
        for (k, g) in gammas.iter().enumerate() {
            if gammas[..k].contains(g) {
                return Err(SectionError::DuplicateGamma(format_rational(g)));
            }
        }
        let tail = tail.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        Ok(SliceFamily {
            ring: ring.clone(),
            pivot,
            tail,
            gammas,
        })
    }

    pub fn ring(&self) -> &Arc<RingSpec> {
        &self.ring
    }

    pub fn pivot(&self) -> usize {
        self.pivot
    }

    pub fn gammas(&self) -> &[Rational] {
        &self.gammas
    }

    pub fn len(&self) -> usize {
        self.gammas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gammas.is_empty()
    }

    pub fn is_axis_aligned(&self) -> bool {
        self.tail.is_empty()
    }

    pub fn form(&self, k: usize) -> LinearForm {
        LinearForm {
            ring: self.ring.clone(),
            pivot: self.pivot,
            tail: self.tail.clone(),
            gamma: self.gammas[k].clone(),
        }
    }

    pub fn section_ring(&self) -> Arc<RingSpec> {
        self.ring.without(self.pivot)
    }

    /// `∏ L_k`.
    pub fn product(&self) -> Polynomial {
        (0..self.len()).fold(Polynomial::one(&self.ring), |acc, k| &acc * &self.form(k).polynomial())
    }
}

/// Outcome of sectioning a Gröbner basis.
#[derive(Clone, Debug, PartialEq)]
pub struct SectionReport<C: Field = Rational> {
    /// `π_L(g_j)` for every basis element, in basis order.
    pub images: Vec<Polynomial<C>>,
    /// Per element: `LT_σ(g_j) = LT_σ̂(π_L(g_j))`.
    pub lt_preserved: Vec<bool>,
    /// The sectioned basis, present when every leading term is preserved.
    pub basis: Option<GroebnerBasis<C>>,
    /// Whether `L` is certified to be a nonzerodivisor modulo the ideal.
    pub nonzerodivisor: bool,
}

impl<C: Field> SectionReport<C> {
    pub fn offending(&self) -> Vec<usize> {
        self.lt_preserved
            .iter()
            .enumerate()
            .filter(|(_, ok)| !**ok)
            .map(|(j, _)| j)
            .collect()
    }
}

fn lt_preserved<C: Field>(
    order: &TermOrder,
    hat: &TermOrder,
    pivot: usize,
    g: &Polynomial<C>,
    image: &Polynomial<C>,
) -> bool {
    match (g.leading_term(order), image.leading_term(hat)) {
        (Some(t), Some(s)) => t.log(pivot) == 0 && &s.with_inserted(pivot, 0) == t,
        _ => false,
    }
}

/// Sections every element of a monic Gröbner basis and checks the
/// leading-term hypothesis. Never fails; see [`section_gb`] for the strict form.
pub fn section_report<C: Field>(basis: &GroebnerBasis<C>, form: &LinearForm) -> SectionReport<C> {
    let order = basis.order();
    let n = basis.ring().arity();
    let hat = order.restrict(form.pivot(), n);
    let images: Vec<Polynomial<C>> = basis.elements().iter().map(|g| form.apply(g)).collect();
    let flags: Vec<bool> = basis
        .elements()
        .iter()
        .zip(&images)
        .map(|(g, h)| lt_preserved(order, &hat, form.pivot(), g, h))
        .collect();
    let ok = flags.iter().all(|&b| b);
    let section = ok.then(|| GroebnerBasis::from_basis(&form.section_ring(), &hat, images.clone()));
    SectionReport {
        images,
        lt_preserved: flags,
        basis: section,
        nonzerodivisor: ok,
    }
}

/// `π_L(G)` as a Gröbner basis of `π_L(I)`, provided no leading term moves.
pub fn section_gb<C: Field>(basis: &GroebnerBasis<C>, form: &LinearForm) -> Result<SectionReport<C>, SectionError> {
    let report = section_report(basis, form);
    if report.basis.is_none() {
        return Err(SectionError::HypothesisViolation(report.offending()));
    }
    Ok(report)
}

/// Reduced σ̂-basis of `π_L(I)` for a homogeneous ideal and an ordering of
/// `x_i`-DegRev type, computed as `ρ(G) \ {0}` for the reduced basis `G` of `θ(I)`.
pub fn homogeneous_section_gb(
    ideal: &Ideal,
    form: &HomLinearForm,
    order: &TermOrder,
) -> Result<GroebnerBasis, SectionError> {
    let ring = ideal.ring();
    let n = ring.arity();
    if !order.is_xi_degrev_type(form.pivot(), n) {
        return Err(SectionError::WrongOrderType(ring.name(form.pivot()).to_string()));
    }
    if !ideal.generators().iter().all(Polynomial::is_homogeneous) {
        return Err(SectionError::Inhomogeneous);
    }
    let moved = Ideal::new(ring, ideal.generators().iter().map(|g| form.theta(g)).collect())?;
    let gb = reduced_groebner(order, &moved)?;
    let images: Vec<Polynomial> = gb
        .elements()
        .iter()
        .map(|g| form.rho(g))
        .filter(|g| !g.is_zero())
        .collect();
    let hat = order.restrict(form.pivot(), n);
    Ok(GroebnerBasis::from_basis(&ring.without(form.pivot()), &hat, images))
}

/// Certifies that `G ⊂ I` is a σ-Gröbner basis of `I` from its section.
pub fn verify_lifting(
    ideal: &Ideal,
    elements: &[Polynomial],
    form: &LinearForm,
    order: &TermOrder,
) -> Result<GroebnerBasis, SectionError> {
    let ring = ideal.ring();
    let n = ring.arity();
    order.validate(n).map_err(GroebnerError::from)?;
    let hat = order.restrict(form.pivot(), n);
    let images: Vec<Polynomial> = elements.iter().map(|g| form.apply(g)).collect();
    let bad: Vec<usize> = elements
        .iter()
        .zip(&images)
        .enumerate()
        .filter(|(_, (g, h))| !lt_preserved(order, &hat, form.pivot(), g, h))
        .map(|(j, _)| j)
        .collect();
    if !bad.is_empty() {
        return Err(SectionError::HypothesisViolation(bad));
    }
    let ideal_gb = reduced_groebner(&TermOrder::DegRevLex, ideal)?;
    if let Some(j) = elements.iter().position(|g| !ideal_gb.contains(g)) {
        return Err(SectionError::NotInIdeal(j));
    }
    if !is_groebner(&hat, &images) {
        return Err(SectionError::NotASectionBasis);
    }
    let spans = ideal
        .generators()
        .iter()
        .all(|f| normal_form(&hat, &form.apply(f), &images).is_zero());
    if !spans {
        return Err(SectionError::NotASectionBasis);
    }
    if is_zero_divisor(&form.polynomial(), ideal)? {
        return Err(SectionError::ZeroDivisor);
    }
    Ok(GroebnerBasis::from_basis(ring, order, elements.to_vec()))
}

/// Coefficients (constant term first) of the Lagrange basis polynomials for
/// the nodes `gammas`.
fn lagrange_basis(gammas: &[Rational]) -> Vec<Vec<Rational>> {
    let n = gammas.len();
    (0..n)
        .map(|k| {
            let mut coeffs = vec![Rational::one()];
            let mut denom = Rational::one();
            for (m, g) in gammas.iter().enumerate() {
                if m == k {
                    continue;
                }
                let mut next = vec![Rational::zero(); coeffs.len() + 1];
                for (d, c) in coeffs.iter().enumerate() {
                    next[d + 1] += c;
                    next[d] -= c * g;
                }
                coeffs = next;
                denom *= &gammas[k] - g;
            }
            let inv = denom.recip();
            coeffs.into_iter().map(|c| c * &inv).collect()
        })
        .collect()
}

/// The unique `g` with `deg_{x_i}(g) < N` and `π_{L_k}(g) = ĝ_k` for all `k`.
pub fn common_lifting(family: &SliceFamily, values: &[Polynomial]) -> Result<Polynomial, SectionError> {
    if values.len() != family.len() {
        return Err(SectionError::ArityMismatch {
            expected: family.len(),
            found: values.len(),
        });
    }
    let hat_ring = family.section_ring();
    for v in values {
        if v.ring() != &hat_ring {
            return Err(PolyError::RingMismatch {
                left: hat_ring.names().join(","),
                right: v.ring().names().join(","),
            }
            .into());
        }
    }
    let ring = family.ring();
    let pivot = family.pivot();
    let basis = lagrange_basis(family.gammas());
    let mut lifted = Polynomial::zero(ring);
    for (k, v) in values.iter().enumerate() {
        for (t, c) in v.terms() {
            let base = t.with_inserted(pivot, 0);
            for (d, b) in basis[k].iter().enumerate() {
                let mut term = base.clone();
                term.set(pivot, d as u32);
                lifted.add_term(term, c * b);
            }
        }
    }
    if family.is_axis_aligned() {
        return Ok(lifted);
    }
    let shifted = &Polynomial::var(ring, pivot) - &tail_polynomial(ring, &family.tail);
    Ok(lifted.substitute(pivot, &shifted)?)
}

/// How lifted polynomials are certified to lie in the ideal.
#[derive(Clone, Debug)]
pub enum MembershipOracle {
    /// A known Gröbner basis of the ideal (in any ordering).
    GbCheck(GroebnerBasis),
    /// A parametrization: every coordinate of the ambient ring as a polynomial
    /// over a parameter ring; members vanish after substitution.
    Parametric(Vec<Polynomial>),
    /// No check; the result is reported as uncertified.
    Trust,
}

impl MembershipOracle {
    /// `Some(verdict)`, or `None` for [`MembershipOracle::Trust`].
    pub fn check(&self, f: &Polynomial) -> Option<bool> {
        match self {
            MembershipOracle::GbCheck(gb) => Some(gb.contains(f)),
            MembershipOracle::Parametric(coords) => Some(compose(f, coords).is_zero()),
            MembershipOracle::Trust => None,
        }
    }
}

/// `f(p_1, .., p_n)` for polynomials `p_j` over a common ring.
pub fn compose(f: &Polynomial, coords: &[Polynomial]) -> Polynomial {
    let target = coords[0].ring();
    let mut out = Polynomial::zero(target);
    let mut cache: Vec<Vec<Polynomial>> = coords
        .iter()
        .map(|p| vec![Polynomial::one(target), p.clone()])
        .collect();
    for (t, c) in f.terms() {
        let mut term = Polynomial::constant(target, c.clone());
        for (j, &e) in t.exponents().iter().enumerate() {
            if e == 0 {
                continue;
            }
            while cache[j].len() <= e as usize {
                let next = &cache[j][cache[j].len() - 1] * &coords[j];
                cache[j].push(next);
            }
            term = &term * &cache[j][e as usize];
        }
        out = &out + &term;
    }
    out
}

/// A basis rebuilt from slices.
#[derive(Clone, Debug, PartialEq)]
pub struct Reconstruction {
    pub basis: GroebnerBasis,
    /// False when membership was not checked.
    pub certified: bool,
}

/// Rebuilds a σ-Gröbner basis of `I` from reduced σ̂-bases of its slices.
pub fn reconstruct_gb(
    family: &SliceFamily,
    slice_bases: &[GroebnerBasis],
    order: &TermOrder,
    oracle: &MembershipOracle,
) -> Result<Reconstruction, SectionError> {
    if slice_bases.len() != family.len() {
        return Err(SectionError::ArityMismatch {
            expected: family.len(),
            found: slice_bases.len(),
        });
    }
    let ring = family.ring();
    let n = ring.arity();
    order.validate(n).map_err(GroebnerError::from)?;
    let pivot = family.pivot();
    let hat = order.restrict(pivot, n);
    let hat_ring = family.section_ring();
    for b in slice_bases {
        if b.order() != &hat {
            return Err(SectionError::OrderMismatch {
                expected: hat.name(&hat_ring),
                found: b.order().name(b.ring()),
            });
        }
        if b.ring() != &hat_ring {
            return Err(PolyError::RingMismatch {
                left: hat_ring.names().join(","),
                right: b.ring().names().join(","),
            }
            .into());
        }
    }
    let lts = slice_bases[0].leading_terms();
    if slice_bases.iter().any(|b| b.leading_terms() != lts) {
        return Err(SectionError::NonGenericSlices);
    }
    let mut lifted = Vec::with_capacity(lts.len());
    for (j, t) in lts.iter().enumerate() {
        let values: Vec<Polynomial> = slice_bases.iter().map(|b| b.elements()[j].clone()).collect();
        let g = common_lifting(family, &values)?;
        if g.leading_term(order) != Some(&t.with_inserted(pivot, 0)) {
            return Err(SectionError::LTDrift(j));
        }
        lifted.push(g);
    }
    let mut certified = true;
    for (j, g) in lifted.iter().enumerate() {
        match oracle.check(g) {
            Some(true) => {}
            Some(false) => return Err(SectionError::MembershipFailed(j)),
            None => certified = false,
        }
    }
    Ok(Reconstruction {
        basis: GroebnerBasis::from_basis(ring, order, lifted),
        certified,
    })
}

/// Implicitization strategy.
#[derive(Clone, Debug, PartialEq)]
pub enum ImplicitMode {
    Eliminate,
    Slice(SliceOptions),
}

#[derive(Clone, Debug, PartialEq)]
pub struct SliceOptions {
    /// Index of the pivot coordinate.
    pub pivot: usize,
    /// Initial number of slices; derived from the coordinate degrees when absent.
    pub slices: Option<usize>,
    /// Explicit offsets; otherwise drawn from `2, -2, 3, -3, ..` shifted by `seed`.
    pub gammas: Option<Vec<Rational>>,
    pub seed: u64,
    pub max_doublings: usize,
}

impl SliceOptions {
    pub fn new(pivot: usize) -> Self {
        SliceOptions {
            pivot,
            slices: None,
            gammas: None,
            seed: 0,
            max_doublings: 4,
        }
    }
}

/// The deterministic offset sequence `2, -2, 3, -3, ..` starting at `2 + seed`.
pub fn gamma_sequence(seed: u64) -> impl Iterator<Item = Rational> {
    (0u64..).flat_map(move |k| {
        let m = Rational::from_integer((2 + seed + k).into());
        [m.clone(), -m]
    })
}

/// Reads `SLICEGB_SEED` (default 0).
pub fn seed_from_env() -> u64 {
    std::env::var("SLICEGB_SEED")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(0)
}

fn principal_generator(ideal: &Ideal) -> Result<Polynomial, SectionError> {
    match ideal.generators() {
        [g] => Ok(g.clone()),
        gens => Err(SectionError::NotPrincipal(gens.len())),
    }
}

fn implicit_system(
    params: &Arc<RingSpec>,
    coords: &[Polynomial],
    target: &Arc<RingSpec>,
    fixed: Option<(usize, &Rational)>,
) -> Result<(Ideal, Vec<usize>), SectionError> {
    let m = params.arity();
    let kept: Vec<usize> = (0..target.arity()).filter(|&j| Some(j) != fixed.map(|f| f.0)).collect();
    let mut names: Vec<&str> = params.names().iter().map(String::as_str).collect();
    names.extend(kept.iter().map(|&j| target.name(j)));
    let big = RingSpec::new(&names).map_err(GroebnerError::from)?;
    let lift = |p: &Polynomial| {
        let map: Vec<usize> = (0..m).collect();
        p.remap(&big, &map)
    };
    let mut gens = Vec::new();
    for (pos, &j) in kept.iter().enumerate() {
        gens.push(&Polynomial::var(&big, m + pos) - &lift(&coords[j]));
    }
    if let Some((j, gamma)) = fixed {
        gens.push(&lift(&coords[j]) - &Polynomial::constant(&big, gamma.clone()));
    }
    Ok((Ideal::new(&big, gens)?, (0..m).collect()))
}

fn implicit_ideal(
    params: &Arc<RingSpec>,
    coords: &[Polynomial],
    target: &Arc<RingSpec>,
    fixed: Option<(usize, &Rational)>,
) -> Result<Ideal, SectionError> {
    let (ideal, drop) = implicit_system(params, coords, target, fixed)?;
    Ok(eliminate(&ideal, &drop)?)
}

/// One slice curve: the generator of the elimination ideal of the sliced
/// system, or `None` when that ideal is not a proper principal ideal.
fn slice_curve(
    params: &Arc<RingSpec>,
    coords: &[Polynomial],
    target: &Arc<RingSpec>,
    fixed: (usize, &Rational),
    degree_bound: u32,
) -> Option<Polynomial> {
    let (ideal, drop) = implicit_system(params, coords, target, Some(fixed)).ok()?;
    let h = match eliminate_principal(&ideal, &drop, degree_bound).ok()? {
        Some(h) => h,
        None => match eliminate(&ideal, &drop).ok()?.generators() {
            [h] => h.clone(),
            _ => return None,
        },
    };
    (!h.is_constant()).then_some(h)
}

/// The implicit equation of the hypersurface parametrized by `coords`
/// (polynomials over a parameter ring) in the ring `target`, scaled to
/// integer content 1 with a positive DegRevLex leading coefficient.
pub fn implicitize(
    coords: &[Polynomial],
    target: &Arc<RingSpec>,
    mode: &ImplicitMode,
) -> Result<Polynomial, SectionError> {
    if coords.is_empty() || coords.len() != target.arity() {
        return Err(SectionError::ArityMismatch {
            expected: target.arity(),
            found: coords.len(),
        });
    }
    let params = coords[0].ring().clone();
    if coords.iter().any(|c| c.ring() != &params) {
        return Err(PolyError::RingMismatch {
            left: params.names().join(","),
            right: "mixed".into(),
        }
        .into());
    }
    if target.names().iter().any(|v| params.index_of(v).is_some()) {
        return Err(GroebnerError::Ring(crate::ring::RingError::Duplicate(
            "parameter and coordinate names clash".into(),
        ))
        .into());
    }
    let f = match mode {
        ImplicitMode::Eliminate => principal_generator(&implicit_ideal(&params, coords, target, None)?)?,
        ImplicitMode::Slice(opts) => slice_implicitize(&params, coords, target, opts)?,
    };
    Ok(f.primitive(&TermOrder::DegRevLex))
}

fn slice_implicitize(
    params: &Arc<RingSpec>,
    coords: &[Polynomial],
    target: &Arc<RingSpec>,
    opts: &SliceOptions,
) -> Result<Polynomial, SectionError> {
    let n = target.arity();
    let pivot = opts.pivot;
    if pivot >= n {
        return Err(SectionError::InvalidForm(format!("pivot index {pivot} out of range")));
    }
    // work in a copy of the target ring with the pivot last, under Lex
    let mut perm: Vec<usize> = (0..n).filter(|&j| j != pivot).collect();
    perm.push(pivot);
    let names: Vec<&str> = perm.iter().map(|&j| target.name(j)).collect();
    let ring = RingSpec::new(&names).map_err(GroebnerError::from)?;
    let coords_p: Vec<Polynomial> = perm.iter().map(|&j| coords[j].clone()).collect();
    let last = n - 1;
    let order = TermOrder::Lex;
    let hat = order.restrict(last, n);

    // a Bezout-type bound on the degree of the implicit equation
    let mut degrees: Vec<u32> = coords_p.iter().map(|c| c.total_degree().unwrap_or(0).max(1)).collect();
    degrees.sort_unstable_by(|a, b| b.cmp(a));
    let degree_bound = degrees.iter().take(params.arity().max(1)).product::<u32>();

    let mut wanted = opts.slices.unwrap_or_else(|| {
        1 + coords_p[..last]
            .iter()
            .map(|c| c.total_degree().unwrap_or(0).max(1) as usize)
            .product::<usize>()
    });
    let mut pool: Box<dyn Iterator<Item = Rational>> = match &opts.gammas {
        Some(list) => Box::new(list.clone().into_iter()),
        None => Box::new(gamma_sequence(opts.seed)),
    };
    let mut slices: Vec<(Rational, Polynomial)> = Vec::new();
    let oracle = MembershipOracle::Parametric(coords_p.clone());
    let mut attempts = 0;
    loop {
        attempts += 1;
        while slices.len() < wanted {
            let batch: Vec<Rational> = pool.by_ref().take(wanted - slices.len()).collect();
            if batch.is_empty() {
                return Err(SectionError::RetryLimit(attempts));
            }
            let curves: Vec<Option<Polynomial>> = batch
                .par_iter()
                .map(|g| slice_curve(params, &coords_p, &ring, (last, g), degree_bound).map(|h| h.monic(&hat)))
                .collect();
            slices.extend(batch.into_iter().zip(curves).filter_map(|(g, c)| c.map(|c| (g, c))));
        }
        // slices whose leading term dropped are special; keep the generic ones
        let top = slices
            .iter()
            .map(|(_, h)| h.leading_term(&hat).unwrap().clone())
            .max_by(|a, b| hat.cmp(a, b))
            .expect("non-empty");
        slices.retain(|(_, h)| h.leading_term(&hat) == Some(&top));
        if slices.len() >= wanted {
            let family = SliceFamily::new(&ring, last, Vec::new(), slices.iter().map(|(g, _)| g.clone()).collect())?;
            let bases: Vec<GroebnerBasis> = slices
                .iter()
                .map(|(_, h)| GroebnerBasis::from_basis(&family.section_ring(), &hat, vec![h.clone()]))
                .collect();
            match reconstruct_gb(&family, &bases, &order, &oracle) {
                Ok(rec) => {
                    let f = rec.basis.elements()[0].clone();
                    let mut back = vec![0; n];
                    for (new, &old) in perm.iter().enumerate() {
                        back[new] = old;
                    }
                    return Ok(f.remap(target, &back));
                }
                Err(SectionError::LTDrift(_)) | Err(SectionError::MembershipFailed(_)) => {}
                Err(e) => return Err(e),
            }
        }
        if attempts > opts.max_doublings {
            return Err(SectionError::RetryLimit(attempts));
        }
        wanted *= 2;
    }
}
