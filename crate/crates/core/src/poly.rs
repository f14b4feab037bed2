//! Sparse multivariate polynomials.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::field::{Field, Rational};
use crate::monomial::PowerProduct;
use crate::order::{OrderError, TermOrder};
use crate::ring::RingSpec;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("polynomials live in different rings ({left} vs {right})")]
    RingMismatch { left: String, right: String },
    #[error("negative exponent {0}")]
    NegativeExponent(i64),
    #[error("operation undefined on the zero polynomial")]
    ZeroPolynomial,
    #[error("variable index {index} out of range for a ring of {arity} variables")]
    IndexOutOfRange { index: usize, arity: usize },
    #[error(transparent)]
    Order(#[from] OrderError),
}

/// A polynomial with coefficients in `C`, stored as a map from power products
/// to non-zero coefficients. Storage does not depend on any term ordering;
/// orderings are supplied per operation.
#[derive(Clone, PartialEq)]
pub struct Polynomial<C = Rational> {
    ring: Arc<RingSpec>,
    terms: BTreeMap<PowerProduct, C>,
}

fn ring_label(ring: &RingSpec) -> String {
    format!("Q[{}]", ring.names().join(","))
}

impl<C: Field> Polynomial<C> {
    pub fn zero(ring: &Arc<RingSpec>) -> Self {
        Polynomial {
            ring: ring.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(ring: &Arc<RingSpec>, c: C) -> Self {
        Self::monomial(ring, PowerProduct::one(ring.arity()), c)
    }

    pub fn one(ring: &Arc<RingSpec>) -> Self {
        Self::constant(ring, C::one())
    }

    pub fn var(ring: &Arc<RingSpec>, index: usize) -> Self {
        Self::monomial(ring, PowerProduct::var(ring.arity(), index), C::one())
    }

    pub fn monomial(ring: &Arc<RingSpec>, term: PowerProduct, c: C) -> Self {
        debug_assert_eq!(term.arity(), ring.arity());
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(term, c);
        }
        Polynomial {
            ring: ring.clone(),
            terms,
        }
    }

    /// Sums the given terms; repeated power products are combined.
    pub fn from_terms<I>(ring: &Arc<RingSpec>, terms: I) -> Self
    where
        I: IntoIterator<Item = (PowerProduct, C)>,
    {
        let mut p = Self::zero(ring);
        for (t, c) in terms {
            p.add_term(t, c);
        }
        p
    }

    pub fn ring(&self) -> &Arc<RingSpec> {
        &self.ring
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(PowerProduct::is_one)
    }

    /// The constant coefficient when the polynomial is constant.
    pub fn as_constant(&self) -> Option<C> {
        if !self.is_constant() {
            return None;
        }
        Some(self.terms.values().next().cloned().unwrap_or_else(C::zero))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in storage (lexicographic exponent) order.
    pub fn terms(&self) -> impl Iterator<Item = (&PowerProduct, &C)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> impl Iterator<Item = (PowerProduct, C)> {
        self.terms.into_iter()
    }

    pub fn coefficient(&self, term: &PowerProduct) -> Option<&C> {
        self.terms.get(term)
    }

    pub fn add_term(&mut self, term: PowerProduct, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(term) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().clone() + c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    /// Terms sorted σ-decreasing.
    pub fn sorted_terms(&self, order: &TermOrder) -> Vec<(&PowerProduct, &C)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| order.cmp(b.0, a.0));
        v
    }

    pub fn leading(&self, order: &TermOrder) -> Option<(&PowerProduct, &C)> {
        self.terms.iter().max_by(|a, b| order.cmp(a.0, b.0))
    }

    pub fn leading_term(&self, order: &TermOrder) -> Option<&PowerProduct> {
        self.leading(order).map(|(t, _)| t)
    }

    /// `(LC_σ(f), LT_σ(f))`.
    pub fn leading_monomial(&self, order: &TermOrder) -> Result<(C, PowerProduct), PolyError> {
        order.validate(self.ring.arity())?;
        self.leading(order)
            .map(|(t, c)| (c.clone(), t.clone()))
            .ok_or(PolyError::ZeroPolynomial)
    }

    /// Divides by the leading coefficient; zero stays zero.
    pub fn monic(&self, order: &TermOrder) -> Self {
        match self.leading(order) {
            Some((_, c)) => {
                let inv = c.inv();
                self.scale(&inv)
            }
            None => self.clone(),
        }
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(PowerProduct::degree).max()
    }

    /// `(total degree, homogeneous?)`.
    pub fn degree_info(&self) -> Result<(u32, bool), PolyError> {
        let d = self.total_degree().ok_or(PolyError::ZeroPolynomial)?;
        let homogeneous = self.terms.keys().all(|t| t.degree() == d);
        Ok((d, homogeneous))
    }

    pub fn is_homogeneous(&self) -> bool {
        self.degree_info().map(|(_, h)| h).unwrap_or(true)
    }

    pub fn degree_in(&self, index: usize) -> u32 {
        self.terms.keys().map(|t| t.log(index)).max().unwrap_or(0)
    }

    pub fn involves(&self, index: usize) -> bool {
        self.terms.keys().any(|t| t.log(index) > 0)
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero(&self.ring);
        }
        Polynomial {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .map(|(t, a)| (t.clone(), a.clone() * c))
                .filter(|(_, a)| !a.is_zero())
                .collect(),
        }
    }

    pub fn mul_monomial(&self, term: &PowerProduct, c: &C) -> Self {
        Polynomial {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(t, a)| (t.mul(term), a.clone() * c)).collect(),
        }
    }

    fn check_ring(&self, other: &Self) -> Result<(), PolyError> {
        if Arc::ptr_eq(&self.ring, &other.ring) || self.ring == other.ring {
            Ok(())
        } else {
            Err(PolyError::RingMismatch {
                left: ring_label(&self.ring),
                right: ring_label(&other.ring),
            })
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_ring(other)?;
        let mut out = self.clone();
        for (t, c) in &other.terms {
            out.add_term(t.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_ring(other)?;
        let mut out = self.clone();
        for (t, c) in &other.terms {
            out.add_term(t.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_ring(other)?;
        let mut out = Self::zero(&self.ring);
        for (t, a) in &self.terms {
            for (s, b) in &other.terms {
                out.add_term(t.mul(s), a.clone() * b);
            }
        }
        Ok(out)
    }

    /// `f^e`; negative exponents are rejected.
    pub fn pow(&self, exponent: i64) -> Result<Self, PolyError> {
        if exponent < 0 {
            return Err(PolyError::NegativeExponent(exponent));
        }
        Ok(self.pow_u32(exponent as u32))
    }

    pub fn pow_u32(&self, mut exponent: u32) -> Self {
        let mut result = Self::one(&self.ring);
        let mut base = self.clone();
        while exponent > 0 {
            if exponent & 1 == 1 {
                result = &result * &base;
            }
            exponent >>= 1;
            if exponent > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// The image under the ring endomorphism `x_index -> g`, `x_j -> x_j`.
    pub fn substitute(&self, index: usize, g: &Self) -> Result<Self, PolyError> {
        if index >= self.ring.arity() {
            return Err(PolyError::IndexOutOfRange {
                index,
                arity: self.ring.arity(),
            });
        }
        self.check_ring(g)?;
        let mut by_power: BTreeMap<u32, Self> = BTreeMap::new();
        for (t, c) in &self.terms {
            let e = t.log(index);
            let mut rest = t.clone();
            rest.set(index, 0);
            by_power
                .entry(e)
                .or_insert_with(|| Self::zero(&self.ring))
                .add_term(rest, c.clone());
        }
        let mut out = Self::zero(&self.ring);
        let mut power = Self::one(&self.ring);
        let mut current = 0u32;
        for (e, part) in by_power {
            while current < e {
                power = &power * g;
                current += 1;
            }
            out = &out + &(&part * &power);
        }
        Ok(out)
    }

    /// Evaluates the variables listed in `values` (index, value), leaving the
    /// others in place.
    pub fn evaluate_partial(&self, values: &[(usize, C)]) -> Self {
        let mut out = Self::zero(&self.ring);
        for (t, c) in &self.terms {
            let mut coeff = c.clone();
            let mut rest = t.clone();
            for (i, v) in values {
                let e = t.log(*i);
                if e > 0 {
                    coeff = coeff * &field_pow(v, e);
                    rest.set(*i, 0);
                }
            }
            out.add_term(rest, coeff);
        }
        out
    }

    /// Full evaluation at a point of `C^n`.
    pub fn evaluate(&self, point: &[C]) -> C {
        let mut acc = C::zero();
        for (t, c) in &self.terms {
            let mut v = c.clone();
            for (i, &e) in t.exponents().iter().enumerate() {
                if e > 0 {
                    v = v * &field_pow(&point[i], e);
                }
            }
            acc = acc + v;
        }
        acc
    }

    /// Moves every term into `ring` through `map[old index] = new index`.
    pub fn remap(&self, ring: &Arc<RingSpec>, map: &[usize]) -> Self {
        Polynomial::from_terms(
            ring,
            self.terms.iter().map(|(t, c)| (t.remap(map, ring.arity()), c.clone())),
        )
    }

    /// Re-expresses a polynomial free of `x_index` in the ring without it.
    /// Returns `None` when the variable occurs.
    pub fn drop_variable(&self, index: usize) -> Option<Self> {
        if self.involves(index) {
            return None;
        }
        let ring = self.ring.without(index);
        Some(Polynomial {
            terms: self.terms.iter().map(|(t, c)| (t.without(index), c.clone())).collect(),
            ring,
        })
    }

    /// Inverse of [`Polynomial::drop_variable`]: views `self` in `ring`, which
    /// has an extra variable at `index`.
    pub fn insert_variable(&self, ring: &Arc<RingSpec>, index: usize) -> Self {
        Polynomial {
            ring: ring.clone(),
            terms: self
                .terms
                .iter()
                .map(|(t, c)| (t.with_inserted(index, 0), c.clone()))
                .collect(),
        }
    }

    pub fn map_coefficients<D: Field>(&self, f: impl Fn(&C) -> D) -> Polynomial<D> {
        Polynomial::from_terms(&self.ring, self.terms.iter().map(|(t, c)| (t.clone(), f(c))))
    }

    /// Indices of variables occurring in the polynomial.
    pub fn variables(&self) -> Vec<usize> {
        (0..self.ring.arity()).filter(|&i| self.involves(i)).collect()
    }
}

pub(crate) fn field_pow<C: Field>(base: &C, mut e: u32) -> C {
    let mut result = C::one();
    let mut b = base.clone();
    while e > 0 {
        if e & 1 == 1 {
            result = result * &b;
        }
        e >>= 1;
        if e > 0 {
            b = b.clone() * &b;
        }
    }
    result
}

impl Polynomial<Rational> {
    /// Scales to integer coefficients with content 1 and a positive leading
    /// coefficient under `order`.
    pub fn primitive(&self, order: &TermOrder) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut lcm = BigInt::one();
        let mut gcd = BigInt::zero();
        for c in self.terms.values() {
            lcm = lcm.lcm(c.denom());
            gcd = gcd.gcd(c.numer());
        }
        let mut factor = Rational::new(lcm, gcd);
        if self.leading(order).map(|(_, c)| c.is_negative()).unwrap_or(false) {
            factor = -factor;
        }
        self.scale(&factor)
    }
}

impl<C: Field> Add for &Polynomial<C> {
    type Output = Polynomial<C>;

    /// Panics when the rings differ; use [`Polynomial::checked_add`] otherwise.
    fn add(self, rhs: Self) -> Polynomial<C> {
        self.checked_add(rhs).expect("ring mismatch in polynomial addition")
    }
}

impl<C: Field> Sub for &Polynomial<C> {
    type Output = Polynomial<C>;

    fn sub(self, rhs: Self) -> Polynomial<C> {
        self.checked_sub(rhs).expect("ring mismatch in polynomial subtraction")
    }
}

impl<C: Field> Mul for &Polynomial<C> {
    type Output = Polynomial<C>;

    fn mul(self, rhs: Self) -> Polynomial<C> {
        self.checked_mul(rhs)
            .expect("ring mismatch in polynomial multiplication")
    }
}

impl<C: Field> Add for Polynomial<C> {
    type Output = Polynomial<C>;

    fn add(self, rhs: Self) -> Polynomial<C> {
        &self + &rhs
    }
}

impl<C: Field> Sub for Polynomial<C> {
    type Output = Polynomial<C>;

    fn sub(self, rhs: Self) -> Polynomial<C> {
        &self - &rhs
    }
}

impl<C: Field> Mul for Polynomial<C> {
    type Output = Polynomial<C>;

    fn mul(self, rhs: Self) -> Polynomial<C> {
        &self * &rhs
    }
}

impl<C: Field> Neg for &Polynomial<C> {
    type Output = Polynomial<C>;

    fn neg(self) -> Polynomial<C> {
        Polynomial {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(t, c)| (t.clone(), -c.clone())).collect(),
        }
    }
}

impl<C: Field> Neg for Polynomial<C> {
    type Output = Polynomial<C>;

    fn neg(self) -> Polynomial<C> {
        -&self
    }
}

impl<C: Field> fmt::Display for Polynomial<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::text::print_polynomial(&TermOrder::DegRevLex, self))
    }
}

impl<C: Field> fmt::Debug for Polynomial<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
