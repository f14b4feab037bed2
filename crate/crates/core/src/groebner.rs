//! Gröbner bases: division, Buchberger's algorithm with the Gebauer–Möller
//! criteria, reduced bases, membership, elimination, Krull dimension and
//! colon ideals.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use thiserror::Error;

use crate::field::{Field, Rational};
use crate::monomial::PowerProduct;
use crate::order::{OrderError, OrderKey, TermOrder};
use crate::poly::{PolyError, Polynomial};
use crate::ring::{RingError, RingSpec};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroebnerError {
    #[error(transparent)]
    Order(#[from] OrderError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error("cannot eliminate every variable of the ring")]
    EliminateAll,
}

/// An ideal given by generators. Zero generators are dropped, so the zero
/// ideal has an empty generator list.
#[derive(Clone, Debug, PartialEq)]
pub struct Ideal<C: Field = Rational> {
    ring: Arc<RingSpec>,
    generators: Vec<Polynomial<C>>,
}

impl<C: Field> Ideal<C> {
    pub fn new(ring: &Arc<RingSpec>, generators: Vec<Polynomial<C>>) -> Result<Self, GroebnerError> {
        for g in &generators {
            if g.ring() != ring {
                return Err(PolyError::RingMismatch {
                    left: ring.names().join(","),
                    right: g.ring().names().join(","),
                }
                .into());
            }
        }
        Ok(Ideal {
            ring: ring.clone(),
            generators: generators.into_iter().filter(|g| !g.is_zero()).collect(),
        })
    }

    /// Builds an ideal from a non-empty list, taking the ring of the first
    /// generator.
    pub fn from_generators(generators: Vec<Polynomial<C>>) -> Result<Self, GroebnerError> {
        let ring = generators
            .first()
            .map(|g| g.ring().clone())
            .ok_or(PolyError::ZeroPolynomial)?;
        Ideal::new(&ring, generators)
    }

    pub fn zero(ring: &Arc<RingSpec>) -> Self {
        Ideal {
            ring: ring.clone(),
            generators: Vec::new(),
        }
    }

    pub fn ring(&self) -> &Arc<RingSpec> {
        &self.ring
    }

    pub fn generators(&self) -> &[Polynomial<C>] {
        &self.generators
    }

    pub fn is_zero(&self) -> bool {
        self.generators.is_empty()
    }
}

/// A list of monic polynomials forming a Gröbner basis for `order`, sorted by
/// σ-increasing leading term.
#[derive(Clone, Debug, PartialEq)]
pub struct GroebnerBasis<C: Field = Rational> {
    ring: Arc<RingSpec>,
    order: TermOrder,
    elements: Vec<Polynomial<C>>,
    is_minimal: bool,
    is_reduced: bool,
}

impl<C: Field> GroebnerBasis<C> {
    /// Wraps polynomials already known to form a Gröbner basis. Elements are
    /// made monic and sorted; the minimality and reducedness flags are
    /// computed from the elements.
    pub fn from_basis(ring: &Arc<RingSpec>, order: &TermOrder, elements: Vec<Polynomial<C>>) -> Self {
        let mut elements: Vec<_> = elements
            .into_iter()
            .filter(|g| !g.is_zero())
            .map(|g| g.monic(order))
            .collect();
        elements.sort_by(|a, b| order.cmp(a.leading_term(order).unwrap(), b.leading_term(order).unwrap()));
        let lts: Vec<&PowerProduct> = elements.iter().map(|g| g.leading_term(order).unwrap()).collect();
        let is_minimal = lts
            .iter()
            .enumerate()
            .all(|(i, a)| lts.iter().enumerate().all(|(j, b)| i == j || !b.divides(a)));
        let is_reduced = is_minimal
            && elements.iter().enumerate().all(|(i, g)| {
                g.terms()
                    .all(|(t, _)| lts.iter().enumerate().all(|(j, b)| j == i || !b.divides(t)))
            });
        GroebnerBasis {
            ring: ring.clone(),
            order: order.clone(),
            elements,
            is_minimal,
            is_reduced,
        }
    }

    pub fn ring(&self) -> &Arc<RingSpec> {
        &self.ring
    }

    pub fn order(&self) -> &TermOrder {
        &self.order
    }

    pub fn elements(&self) -> &[Polynomial<C>] {
        &self.elements
    }

    pub fn into_elements(self) -> Vec<Polynomial<C>> {
        self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn is_minimal(&self) -> bool {
        self.is_minimal
    }

    pub fn is_reduced(&self) -> bool {
        self.is_reduced
    }

    /// Whether the basis generates the unit ideal.
    pub fn is_unit(&self) -> bool {
        self.elements.iter().any(|g| g.is_constant())
    }

    pub fn leading_terms(&self) -> Vec<PowerProduct> {
        self.elements
            .iter()
            .map(|g| g.leading_term(&self.order).unwrap().clone())
            .collect()
    }

    pub fn normal_form(&self, f: &Polynomial<C>) -> Polynomial<C> {
        normal_form(&self.order, f, &self.elements)
    }

    pub fn contains(&self, f: &Polynomial<C>) -> bool {
        self.normal_form(f).is_zero()
    }

    pub fn to_ideal(&self) -> Ideal<C> {
        Ideal {
            ring: self.ring.clone(),
            generators: self.elements.clone(),
        }
    }

    pub(crate) fn set_flags(&mut self, is_minimal: bool, is_reduced: bool) {
        self.is_minimal = is_minimal;
        self.is_reduced = is_reduced;
    }
}

/// A basis element in engine form: terms σ-decreasing with cached keys.
struct EPoly<C> {
    terms: Vec<(OrderKey, PowerProduct, C)>,
    sugar: u32,
}

impl<C: Field> EPoly<C> {
    fn from_poly(order: &TermOrder, f: &Polynomial<C>) -> Self {
        let mut terms: Vec<_> = f.terms().map(|(t, c)| (order.key(t), t.clone(), c.clone())).collect();
        terms.sort_by(|a, b| b.0.cmp(&a.0));
        let sugar = f.total_degree().unwrap_or(0);
        EPoly { terms, sugar }
    }

    fn from_desc(terms: Vec<(OrderKey, PowerProduct, C)>, sugar: u32) -> Self {
        EPoly { terms, sugar }
    }

    fn lt(&self) -> &PowerProduct {
        &self.terms[0].1
    }

    fn lc(&self) -> &C {
        &self.terms[0].2
    }

    fn normalize(&mut self) {
        let values: Vec<C> = self.terms.iter().map(|t| t.2.clone()).collect();
        let scale = C::content_scale(&values);
        for term in &mut self.terms {
            term.2 = term.2.clone() * &scale;
        }
    }

    fn make_monic(&mut self) {
        let inv = self.lc().inv();
        for term in &mut self.terms {
            term.2 = term.2.clone() * &inv;
        }
    }

    fn to_poly(&self, ring: &Arc<RingSpec>) -> Polynomial<C> {
        Polynomial::from_terms(ring, self.terms.iter().map(|(_, t, c)| (t.clone(), c.clone())))
    }

    fn is_constant(&self) -> bool {
        self.terms.len() == 1 && self.lt().is_one()
    }
}

type Work<C> = BTreeMap<OrderKey, (PowerProduct, C)>;

fn work_add<C: Field>(work: &mut Work<C>, key: OrderKey, t: PowerProduct, c: C) {
    use std::collections::btree_map::Entry;
    match work.entry(key) {
        Entry::Vacant(e) => {
            e.insert((t, c));
        }
        Entry::Occupied(mut e) => {
            let sum = e.get().1.clone() + c;
            if sum.is_zero() {
                e.remove();
            } else {
                e.get_mut().1 = sum;
            }
        }
    }
}

/// Subtracts `q * m * g` (skipping the leading term of `g`, which is assumed
/// to cancel) from the work polynomial.
fn work_sub_multiple<C: Field>(order: &TermOrder, work: &mut Work<C>, g: &EPoly<C>, m: &PowerProduct, q: &C) {
    let mk = order.key(m);
    for (k, t, c) in g.terms.iter().skip(1) {
        work_add(work, k.add(&mk), t.mul(m), -(q.clone() * c));
    }
}

/// Fully reduces the work polynomial; reducers are tried in list order.
/// `sugar` is raised to account for every reduction step.
fn reduce_work_sugar<C: Field>(
    order: &TermOrder,
    mut work: Work<C>,
    reducers: &[&EPoly<C>],
    sugar: &mut u32,
) -> Vec<(OrderKey, PowerProduct, C)> {
    let mut rem = Vec::new();
    while let Some((k, (t, c))) = work.pop_last() {
        match reducers.iter().find(|g| g.lt().divides(&t)) {
            Some(g) => {
                let m = g.lt().quotient_of(&t).expect("divides");
                *sugar = (*sugar).max(m.degree() + g.sugar);
                let q = c / g.lc();
                work_sub_multiple(order, &mut work, g, &m, &q);
            }
            None => rem.push((k, t, c)),
        }
    }
    rem
}

fn reduce_work<C: Field>(order: &TermOrder, work: Work<C>, reducers: &[&EPoly<C>]) -> Vec<(OrderKey, PowerProduct, C)> {
    reduce_work_sugar(order, work, reducers, &mut 0)
}

fn work_from<C: Field>(order: &TermOrder, f: &Polynomial<C>) -> Work<C> {
    f.terms().map(|(t, c)| (order.key(t), (t.clone(), c.clone()))).collect()
}

/// The normal form of `f` with respect to `divisors`: congruent to `f` modulo
/// the ideal they generate, with no term divisible by any of their leading
/// terms. The σ-largest reducible term is always reduced first, using the
/// first divisor in list order whose leading term divides it.
pub fn normal_form<C: Field>(order: &TermOrder, f: &Polynomial<C>, divisors: &[Polynomial<C>]) -> Polynomial<C> {
    let divs: Vec<EPoly<C>> = divisors
        .iter()
        .filter(|g| !g.is_zero())
        .map(|g| EPoly::from_poly(order, g))
        .collect();
    let refs: Vec<&EPoly<C>> = divs.iter().collect();
    let rem = reduce_work(order, work_from(order, f), &refs);
    Polynomial::from_terms(f.ring(), rem.into_iter().map(|(_, t, c)| (t, c)))
}

/// Division with quotients: `f = Σ q_i g_i + r`.
pub fn divide<C: Field>(
    order: &TermOrder,
    f: &Polynomial<C>,
    divisors: &[Polynomial<C>],
) -> (Vec<Polynomial<C>>, Polynomial<C>) {
    let ring = f.ring();
    let divs: Vec<Option<EPoly<C>>> = divisors
        .iter()
        .map(|g| (!g.is_zero()).then(|| EPoly::from_poly(order, g)))
        .collect();
    let mut quotients: Vec<Polynomial<C>> = divisors.iter().map(|_| Polynomial::zero(ring)).collect();
    let mut work = work_from(order, f);
    let mut rem = Polynomial::zero(ring);
    while let Some((_, (t, c))) = work.pop_last() {
        let hit = divs
            .iter()
            .enumerate()
            .find_map(|(i, g)| g.as_ref().filter(|g| g.lt().divides(&t)).map(|g| (i, g)));
        match hit {
            Some((i, g)) => {
                let m = g.lt().quotient_of(&t).expect("divides");
                let q = c / g.lc();
                work_sub_multiple(order, &mut work, g, &m, &q);
                quotients[i].add_term(m, q);
            }
            None => rem.add_term(t, c),
        }
    }
    (quotients, rem)
}

/// `f / g` when `g` divides `f` exactly.
pub fn divide_exact<C: Field>(f: &Polynomial<C>, g: &Polynomial<C>) -> Option<Polynomial<C>> {
    if g.is_zero() {
        return None;
    }
    let (mut q, r) = divide(&TermOrder::DegRevLex, f, std::slice::from_ref(g));
    r.is_zero().then(|| q.pop().unwrap())
}

/// `S(f, g)` for nonzero `f`, `g`.
pub fn s_polynomial<C: Field>(order: &TermOrder, f: &Polynomial<C>, g: &Polynomial<C>) -> Polynomial<C> {
    let (cf, tf) = f.leading(order).map(|(t, c)| (c.clone(), t.clone())).unwrap();
    let (cg, tg) = g.leading(order).map(|(t, c)| (c.clone(), t.clone())).unwrap();
    let l = tf.lcm(&tg);
    let a = f.mul_monomial(&tf.quotient_of(&l).unwrap(), &cf.inv());
    let b = g.mul_monomial(&tg.quotient_of(&l).unwrap(), &cg.inv());
    &a - &b
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
struct Pair {
    degree: u32,
    key: OrderKey,
    i: usize,
    j: usize,
}

struct Engine<'a, C> {
    order: &'a TermOrder,
    polys: Vec<EPoly<C>>,
    active: Vec<usize>,
    pairs: BTreeSet<Pair>,
}

impl<'a, C: Field> Engine<'a, C> {
    fn reducers(&self) -> Vec<&EPoly<C>> {
        self.active.iter().map(|&i| &self.polys[i]).collect()
    }

    fn pair(&self, i: usize, j: usize) -> Pair {
        let (f, g) = (&self.polys[i], &self.polys[j]);
        let l = f.lt().lcm(g.lt());
        let degree = if self.order.is_degree_compatible() {
            l.degree()
        } else {
            Self::pair_sugar(f, g, &l)
        };
        Pair {
            degree,
            key: self.order.key(&l),
            i: i.min(j),
            j: i.max(j),
        }
    }

    /// Gebauer–Möller update after inserting polynomial `h`.
    fn update(&mut self, h: usize) {
        let lt_h = self.polys[h].lt().clone();
        let candidates: Vec<usize> = self.active.clone();
        let lcm_with = |g: usize| lt_h.lcm(self.polys[g].lt());
        let mut kept: Vec<usize> = Vec::new();
        for (idx, &g1) in candidates.iter().enumerate() {
            let l1 = lcm_with(g1);
            let coprime = lt_h.is_coprime(self.polys[g1].lt());
            let dominated = candidates[idx + 1..]
                .iter()
                .chain(kept.iter())
                .any(|&g2| lcm_with(g2).divides(&l1));
            if coprime || !dominated {
                kept.push(g1);
            }
        }
        let new_pairs: Vec<Pair> = kept
            .into_iter()
            .filter(|&g| !lt_h.is_coprime(self.polys[g].lt()))
            .map(|g| self.pair(g, h))
            .collect();
        let polys = &self.polys;
        self.pairs.retain(|p| {
            let l = polys[p.i].lt().lcm(polys[p.j].lt());
            !(lt_h.divides(&l) && polys[p.i].lt().lcm(&lt_h) != l && polys[p.j].lt().lcm(&lt_h) != l)
        });
        self.pairs.extend(new_pairs);
        self.active.retain(|&g| !lt_h.divides(polys[g].lt()));
        self.active.push(h);
    }

    fn insert(&mut self, mut p: EPoly<C>) -> bool {
        p.normalize();
        let unit = p.is_constant();
        self.polys.push(p);
        let h = self.polys.len() - 1;
        if unit {
            self.active = vec![h];
            self.pairs.clear();
            return true;
        }
        self.update(h);
        false
    }

    fn pair_sugar(f: &EPoly<C>, g: &EPoly<C>, l: &PowerProduct) -> u32 {
        let d = l.degree();
        (f.sugar + d - f.lt().degree()).max(g.sugar + d - g.lt().degree())
    }

    fn spoly_work(&self, i: usize, j: usize) -> Work<C> {
        let (f, g) = (&self.polys[i], &self.polys[j]);
        let l = f.lt().lcm(g.lt());
        let mut work = Work::new();
        let mf = f.lt().quotient_of(&l).unwrap();
        let mg = g.lt().quotient_of(&l).unwrap();
        let kf = self.order.key(&mf);
        let kg = self.order.key(&mg);
        for (k, t, c) in f.terms.iter().skip(1) {
            work_add(&mut work, k.add(&kf), t.mul(&mf), c.clone() / f.lc());
        }
        for (k, t, c) in g.terms.iter().skip(1) {
            work_add(&mut work, k.add(&kg), t.mul(&mg), -(c.clone() / g.lc()));
        }
        work
    }
}

/// Buchberger's algorithm. The result is a minimal (not yet interreduced)
/// Gröbner basis; see [`reduce_basis`].
pub fn buchberger<C: Field>(order: &TermOrder, ideal: &Ideal<C>) -> Result<GroebnerBasis<C>, GroebnerError> {
    order.validate(ideal.ring().arity())?;
    let mut engine = Engine {
        order,
        polys: Vec::new(),
        active: Vec::new(),
        pairs: BTreeSet::new(),
    };
    let mut inputs: Vec<EPoly<C>> = ideal.generators().iter().map(|g| EPoly::from_poly(order, g)).collect();
    inputs.sort_by(|a, b| a.terms[0].0.cmp(&b.terms[0].0));
    let mut unit = false;
    for g in inputs {
        let mut sugar = g.sugar;
        let work: Work<C> = g.terms.into_iter().map(|(k, t, c)| (k, (t, c))).collect();
        let rem = reduce_work_sugar(order, work, &engine.reducers(), &mut sugar);
        if !rem.is_empty() && engine.insert(EPoly::from_desc(rem, sugar)) {
            unit = true;
            break;
        }
    }
    while !unit {
        let Some(pair) = engine.pairs.pop_first() else {
            break;
        };
        let work = engine.spoly_work(pair.i, pair.j);
        let (f, g) = (&engine.polys[pair.i], &engine.polys[pair.j]);
        let mut sugar = Engine::pair_sugar(f, g, &f.lt().lcm(g.lt()));
        let rem = reduce_work_sugar(order, work, &engine.reducers(), &mut sugar);
        if !rem.is_empty() {
            unit = engine.insert(EPoly::from_desc(rem, sugar));
        }
    }
    let elements = engine
        .active
        .iter()
        .map(|&i| engine.polys[i].to_poly(ideal.ring()))
        .collect();
    Ok(GroebnerBasis::from_basis(ideal.ring(), order, elements))
}

/// The reduced Gröbner basis generated by a Gröbner basis.
pub fn reduce_basis<C: Field>(basis: &GroebnerBasis<C>) -> GroebnerBasis<C> {
    let order = basis.order();
    let ring = basis.ring();
    let elements = basis.elements();
    let lts = basis.leading_terms();
    // keep the first element of every minimal leading term
    let mut keep: Vec<usize> = Vec::new();
    for (i, t) in lts.iter().enumerate() {
        let redundant = lts
            .iter()
            .enumerate()
            .any(|(j, s)| j != i && s.divides(t) && (s != t || j < i));
        if !redundant {
            keep.push(i);
        }
    }
    let minimal: Vec<EPoly<C>> = keep.iter().map(|&i| EPoly::from_poly(order, &elements[i])).collect();
    let mut reduced = Vec::with_capacity(minimal.len());
    for (i, g) in minimal.iter().enumerate() {
        let others: Vec<&EPoly<C>> = minimal
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, h)| h)
            .collect();
        let mut work = Work::new();
        for (k, t, c) in g.terms.iter().skip(1) {
            work.insert(k.clone(), (t.clone(), c.clone()));
        }
        let mut terms = vec![g.terms[0].clone()];
        terms.extend(reduce_work(order, work, &others));
        let mut e = EPoly::from_desc(terms, 0);
        e.make_monic();
        reduced.push(e.to_poly(ring));
    }
    let mut out = GroebnerBasis::from_basis(ring, order, reduced);
    out.set_flags(true, true);
    out
}

/// Reduced Gröbner basis of an ideal.
pub fn reduced_groebner<C: Field>(order: &TermOrder, ideal: &Ideal<C>) -> Result<GroebnerBasis<C>, GroebnerError> {
    Ok(reduce_basis(&buchberger(order, ideal)?))
}

/// Checks Buchberger's criterion: every S-polynomial reduces to zero.
pub fn is_groebner<C: Field>(order: &TermOrder, elements: &[Polynomial<C>]) -> bool {
    let nonzero: Vec<&Polynomial<C>> = elements.iter().filter(|g| !g.is_zero()).collect();
    for i in 0..nonzero.len() {
        for j in i + 1..nonzero.len() {
            let s = s_polynomial(order, nonzero[i], nonzero[j]);
            if !normal_form(order, &s, elements).is_zero() {
                return false;
            }
        }
    }
    true
}

pub fn is_member<C: Field>(f: &Polynomial<C>, ideal: &Ideal<C>, order: &TermOrder) -> Result<bool, GroebnerError> {
    if f.is_zero() {
        return Ok(true);
    }
    Ok(reduced_groebner(order, ideal)?.contains(f))
}

/// Moves the variables in `front` to the first positions, keeping the
/// relative order inside each block. Returns the permuted ring and the map
/// `old index -> new index`.
pub(crate) fn front_permutation(ring: &RingSpec, front: &[usize]) -> (Arc<RingSpec>, Vec<usize>) {
    let n = ring.arity();
    let mut new_order: Vec<usize> = (0..n).filter(|i| front.contains(i)).collect();
    new_order.extend((0..n).filter(|i| !front.contains(i)));
    let mut map = vec![0; n];
    for (new, &old) in new_order.iter().enumerate() {
        map[old] = new;
    }
    let names: Vec<&str> = new_order.iter().map(|&i| ring.name(i)).collect();
    (RingSpec::new(&names).expect("permutation of a valid ring"), map)
}

/// Generators of `I ∩ Q[kept variables]`, as a reduced DegRevLex Gröbner
/// basis of the elimination ideal in the ring of the kept variables (in their
/// original relative order).
pub fn eliminate<C: Field>(ideal: &Ideal<C>, drop: &[usize]) -> Result<Ideal<C>, GroebnerError> {
    let ring = ideal.ring();
    let n = ring.arity();
    for &i in drop {
        if i >= n {
            return Err(PolyError::IndexOutOfRange { index: i, arity: n }.into());
        }
    }
    let mut drop: Vec<usize> = drop.to_vec();
    drop.sort_unstable();
    drop.dedup();
    if drop.is_empty() {
        return Ok(ideal.clone());
    }
    if drop.len() == n {
        return Err(GroebnerError::EliminateAll);
    }
    let k = drop.len();
    let (perm_ring, map) = front_permutation(ring, &drop);
    let gens: Vec<Polynomial<C>> = ideal.generators().iter().map(|g| g.remap(&perm_ring, &map)).collect();
    let order = TermOrder::elimination(k);
    let gb = reduced_groebner(&order, &Ideal::new(&perm_ring, gens)?)?;
    let kept_ring = {
        let names: Vec<&str> = perm_ring.names()[k..].iter().map(String::as_str).collect();
        RingSpec::new(&names)?
    };
    let tail_map: Vec<usize> = (0..n).map(|i| i.saturating_sub(k)).collect();
    let out: Vec<Polynomial<C>> = gb
        .elements()
        .iter()
        .filter(|g| (0..k).all(|i| !g.involves(i)))
        .map(|g| g.remap(&kept_ring, &tail_map))
        .collect();
    Ideal::new(&kept_ring, out)
}

/// The generator of a principal elimination ideal `I ∩ K[kept]`, found as
/// the minimal-degree kernel of the normal form map (under DegRevLex) on the
/// power products of the kept variables. Returns `None` when no kernel shows
/// up up to `max_degree`, when the lowest kernel is not one-dimensional, or
/// when `I` is the unit ideal; callers fall back to [`eliminate`]. The result
/// lives in the ring without the dropped variables.
pub fn eliminate_principal<C: Field>(
    ideal: &Ideal<C>,
    drop: &[usize],
    max_degree: u32,
) -> Result<Option<Polynomial<C>>, GroebnerError> {
    let ring = ideal.ring();
    let n = ring.arity();
    if let Some(&i) = drop.iter().find(|&&i| i >= n) {
        return Err(PolyError::IndexOutOfRange { index: i, arity: n }.into());
    }
    let kept: Vec<usize> = (0..n).filter(|i| !drop.contains(i)).collect();
    if kept.is_empty() {
        return Err(GroebnerError::EliminateAll);
    }
    let order = TermOrder::DegRevLex;
    let gb = reduced_groebner(&order, ideal)?;
    if gb.is_unit() {
        return Ok(None);
    }
    let refs: Vec<EPoly<C>> = gb.elements().iter().map(|g| EPoly::from_poly(&order, g)).collect();
    let refs: Vec<&EPoly<C>> = refs.iter().collect();
    let mut forms: BTreeMap<PowerProduct, Vec<(OrderKey, PowerProduct, C)>> = BTreeMap::new();
    let mut pivots: BTreeMap<OrderKey, (Work<C>, Polynomial<C>)> = BTreeMap::new();
    let one = PowerProduct::one(n);
    forms.insert(
        one.clone(),
        reduce_work(&order, work_from(&order, &Polynomial::one(ring)), &refs),
    );
    let mut layer = vec![one];
    for d in 0..=max_degree {
        if d > 0 {
            let mut next = BTreeSet::new();
            for m in &layer {
                let from = m
                    .support()
                    .max()
                    .map_or(0, |j| kept.iter().position(|&k| k == j).unwrap());
                for &j in &kept[from..] {
                    next.insert(m.mul(&PowerProduct::var(n, j)));
                }
            }
            layer = next.into_iter().collect();
        }
        let mut kernel = Vec::new();
        for m in &layer {
            if !forms.contains_key(m) {
                let x = PowerProduct::var(n, m.support().next().expect("degree > 0"));
                let parent = x.quotient_of(m).expect("divides");
                let xk = order.key(&x);
                let work: Work<C> = forms[&parent]
                    .iter()
                    .map(|(k, t, c)| (k.add(&xk), (t.mul(&x), c.clone())))
                    .collect();
                forms.insert(m.clone(), reduce_work(&order, work, &refs));
            }
            let mut row: Work<C> = forms[m]
                .iter()
                .map(|(k, t, c)| (k.clone(), (t.clone(), c.clone())))
                .collect();
            let mut comb = Polynomial::monomial(ring, m.clone(), C::one());
            while let Some((k, (_, c))) = row.last_key_value() {
                let Some((prow, pcomb)) = pivots.get(k) else {
                    break;
                };
                let c = c.clone();
                for (pk, (pt, pc)) in prow {
                    work_add(&mut row, pk.clone(), pt.clone(), -(c.clone() * pc));
                }
                comb = &comb - &pcomb.scale(&c);
            }
            match row.last_key_value() {
                None => kernel.push(comb),
                Some((k, (_, c))) => {
                    let inv = c.inv();
                    let k = k.clone();
                    for v in row.values_mut() {
                        v.1 = v.1.clone() * &inv;
                    }
                    pivots.insert(k, (row, comb.scale(&inv)));
                }
            }
        }
        match kernel.len() {
            0 => {}
            1 => {
                let names: Vec<&str> = kept.iter().map(|&k| ring.name(k)).collect();
                let kept_ring = RingSpec::new(&names)?;
                let mut map = vec![0; n];
                for (pos, &k) in kept.iter().enumerate() {
                    map[k] = pos;
                }
                return Ok(Some(kernel.pop().unwrap().remap(&kept_ring, &map)));
            }
            _ => return Ok(None),
        }
    }
    Ok(None)
}

/// Minimal generators of a monomial ideal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialIdeal {
    arity: usize,
    generators: Vec<PowerProduct>,
}

impl MonomialIdeal {
    pub fn new(arity: usize, terms: &[PowerProduct]) -> Self {
        let mut generators: Vec<PowerProduct> = Vec::new();
        let mut sorted = terms.to_vec();
        sorted.sort_by_key(PowerProduct::degree);
        for t in sorted {
            if !generators.iter().any(|g| g.divides(&t)) {
                generators.push(t);
            }
        }
        generators.sort();
        MonomialIdeal { arity, generators }
    }

    pub fn generators(&self) -> &[PowerProduct] {
        &self.generators
    }

    pub fn is_unit(&self) -> bool {
        self.generators.iter().any(PowerProduct::is_one)
    }

    /// Krull dimension of `Q[x]/M`: the largest set of variables containing
    /// the support of no generator; `-1` for the unit ideal.
    pub fn dimension(&self) -> i64 {
        if self.is_unit() {
            return -1;
        }
        let supports: Vec<u64> = self
            .generators
            .iter()
            .map(|g| g.support().fold(0u64, |acc, i| acc | (1 << i)))
            .collect();
        let mut best = 0;
        max_independent(self.arity, 0, 0, 0, &supports, &mut best);
        best as i64
    }
}

fn max_independent(n: usize, next: usize, chosen: u64, size: usize, supports: &[u64], best: &mut usize) {
    if size + (n - next) <= *best {
        return;
    }
    if next == n {
        *best = size;
        return;
    }
    let with = chosen | (1 << next);
    if supports.iter().all(|&s| s & !with != 0) {
        max_independent(n, next + 1, with, size + 1, supports, best);
    }
    max_independent(n, next + 1, chosen, size, supports, best);
}

pub fn leading_term_ideal<C: Field>(basis: &GroebnerBasis<C>) -> MonomialIdeal {
    MonomialIdeal::new(basis.ring().arity(), &basis.leading_terms())
}

/// Krull dimension of `P/I`: `-1` for the unit ideal, `n` for the zero ideal.
pub fn dimension<C: Field>(ideal: &Ideal<C>, order: &TermOrder) -> Result<i64, GroebnerError> {
    let gb = buchberger(order, ideal)?;
    Ok(leading_term_ideal(&gb).dimension())
}

/// `I ∩ J` via a tag variable `t`: eliminate `t` from `tI + (1 - t)J`.
pub fn intersect<C: Field>(a: &Ideal<C>, b: &Ideal<C>) -> Result<Ideal<C>, GroebnerError> {
    let ring = a.ring();
    if a.is_zero() || b.is_zero() {
        return Ok(Ideal::zero(ring));
    }
    let tag = ring.fresh_name("t");
    let mut names = vec![tag.as_str()];
    names.extend(ring.names().iter().map(String::as_str));
    let big = RingSpec::new(&names)?;
    let t = Polynomial::<C>::var(&big, 0);
    let one_minus_t = &Polynomial::one(&big) - &t;
    let mut gens = Vec::new();
    for g in a.generators() {
        gens.push(&t * &g.insert_variable(&big, 0));
    }
    for g in b.generators() {
        gens.push(&one_minus_t * &g.insert_variable(&big, 0));
    }
    let elim = eliminate(&Ideal::new(&big, gens)?, &[0])?;
    Ideal::new(
        ring,
        elim.generators()
            .iter()
            .map(|g| Polynomial::from_terms(ring, g.terms().map(|(t, c)| (t.clone(), c.clone()))))
            .collect(),
    )
}

/// `(I : f) = { g | g f ∈ I }`.
pub fn colon_ideal<C: Field>(ideal: &Ideal<C>, f: &Polynomial<C>) -> Result<Ideal<C>, GroebnerError> {
    if f.is_zero() {
        return Err(PolyError::ZeroPolynomial.into());
    }
    if f.is_constant() {
        return Ok(ideal.clone());
    }
    let principal = Ideal::new(ideal.ring(), vec![f.clone()])?;
    let meet = intersect(ideal, &principal)?;
    let gens = meet
        .generators()
        .iter()
        .map(|h| divide_exact(h, f).expect("elements of I ∩ (f) are multiples of f"))
        .collect();
    Ideal::new(ideal.ring(), gens)
}

/// Whether `f` divides zero modulo `I`, i.e. `(I : f) ⊄ I`.
pub fn is_zero_divisor<C: Field>(f: &Polynomial<C>, ideal: &Ideal<C>) -> Result<bool, GroebnerError> {
    let colon = colon_ideal(ideal, f)?;
    let gb = reduced_groebner(&TermOrder::DegRevLex, ideal)?;
    Ok(colon.generators().iter().any(|g| !gb.contains(g)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rational;
    use crate::text::parse_polynomial;

    fn ring(names: &[&str]) -> Arc<RingSpec> {
        RingSpec::new(names).unwrap()
    }

    fn polys(r: &Arc<RingSpec>, list: &[&str]) -> Vec<Polynomial> {
        list.iter().map(|s| parse_polynomial(r, s).unwrap()).collect()
    }

    fn ideal(r: &Arc<RingSpec>, list: &[&str]) -> Ideal {
        Ideal::new(r, polys(r, list)).unwrap()
    }

    #[test]
    fn normal_forms() {
        let r = ring(&["x", "y"]);
        let f = &polys(&r, &["x^2 - y"])[0];
        assert!(normal_form(&TermOrder::DegLex, f, std::slice::from_ref(f)).is_zero());
        let x3 = &polys(&r, &["x^3"])[0];
        assert_eq!(
            normal_form(&TermOrder::DegLex, x3, std::slice::from_ref(f)),
            polys(&r, &["x*y"])[0]
        );
        let one = Polynomial::one(&r);
        assert_eq!(normal_form(&TermOrder::DegLex, &one, &polys(&r, &["x"])), one);
    }

    #[test]
    fn division_with_quotients() {
        let r = ring(&["x", "y"]);
        let f = &polys(&r, &["x^2*y + x*y^2 + y^2"])[0];
        let g = polys(&r, &["x*y - 1", "y^2 - 1"]);
        let (q, rem) = divide(&TermOrder::Lex, f, &g);
        let back = &(&(&q[0] * &g[0]) + &(&q[1] * &g[1])) + &rem;
        assert_eq!(&back, f);
        assert_eq!(rem, polys(&r, &["x + y + 1"])[0]);
        let h = &polys(&r, &["(x+y)^3*(x-2)"])[0];
        assert_eq!(
            divide_exact(h, &polys(&r, &["x-2"])[0]),
            Some(polys(&r, &["(x+y)^3"])[0].clone())
        );
        assert_eq!(divide_exact(h, &polys(&r, &["x-3"])[0]), None);
    }

    #[test]
    fn principal_ideal_is_its_own_basis() {
        let r = ring(&["x", "y"]);
        let gb = reduced_groebner(&TermOrder::DegRevLex, &ideal(&r, &["x^2 - y"])).unwrap();
        assert_eq!(gb.elements(), polys(&r, &["x^2 - y"]).as_slice());
        assert!(gb.is_reduced());
    }

    #[test]
    fn redundant_leading_terms_dropped() {
        let r = ring(&["x"]);
        let basis = GroebnerBasis::from_basis(&r, &TermOrder::Lex, polys(&r, &["x", "x^2"]));
        assert!(!basis.is_minimal());
        let red = reduce_basis(&basis);
        assert_eq!(red.elements(), polys(&r, &["x"]).as_slice());
        assert_eq!(reduce_basis(&red), red);
    }

    #[test]
    fn zero_divisor_example_basis() {
        let r = ring(&["x1", "x2", "x3", "x4"]);
        let i = ideal(&r, &["x1^2", "x1*x3 - x2", "x1*x4", "x4^2"]);
        // x2*x4 = x3*(x1*x4) - x4*(x1*x3 - x2) also belongs to the basis
        let expected = ideal(&r, &["x1^2", "x1*x3-x2", "x1*x4", "x4^2", "x1*x2", "x2^2", "x2*x4"]);
        for order in [TermOrder::DegRevLex, TermOrder::DegLex, TermOrder::XiDegRev(1)] {
            let gb = reduced_groebner(&order, &i).unwrap();
            assert_eq!(gb.len(), 7, "{order:?}");
            for g in expected.generators() {
                assert!(gb.elements().contains(g), "{order:?} {g}");
            }
        }
        assert!(is_member(&polys(&r, &["x1*(x2-x4)"])[0], &i, &TermOrder::DegRevLex).unwrap());
        let l = &polys(&r, &["x2 - x4"])[0];
        let colon = colon_ideal(&i, l).unwrap();
        let colon_gb = reduced_groebner(&TermOrder::DegRevLex, &colon).unwrap();
        assert!(colon_gb.contains(&polys(&r, &["x1"])[0]));
        assert!(is_zero_divisor(l, &i).unwrap());
    }

    #[test]
    fn unit_and_nonmembers() {
        let r = ring(&["x", "y"]);
        let i = ideal(&r, &["x", "y"]);
        assert!(!is_member(&Polynomial::one(&r), &i, &TermOrder::Lex).unwrap());
        let unit = reduced_groebner(&TermOrder::Lex, &ideal(&r, &["x", "x - 1"])).unwrap();
        assert_eq!(unit.elements(), &[Polynomial::one(&r)]);
        assert!(unit.is_unit());
    }

    #[test]
    fn elimination() {
        let r = ring(&["a1", "a2", "x1", "x2"]);
        let i = ideal(&r, &["a1*x1 - x1", "a1*x2 - x2", "a2*x1"]);
        // the family's image in x-space, built so that x1 is 0 or 1
        let i2 = ideal(&r, &["x1*(x1-1)", "x2*(x1-1)", "a1*x1"]);
        let e = eliminate(&i2, &[0, 1]).unwrap();
        assert_eq!(e.ring().names(), &["x1", "x2"]);
        let rr = e.ring().clone();
        let expected = reduced_groebner(&TermOrder::DegRevLex, &ideal(&rr, &["x1^2 - x1", "x1*x2 - x2"])).unwrap();
        assert_eq!(e.generators(), expected.elements());
        assert!(eliminate(&i, &[0, 1, 2, 3]).is_err());

        let r = ring(&["x", "y", "a1", "a2"]);
        let e = eliminate(&ideal(&r, &["y^2 - a1*y", "y^2 - a2", "x - y"]), &[0, 1]).unwrap();
        assert_eq!(e.generators(), polys(e.ring(), &["a1^2*a2 - a2^2"]).as_slice());

        let r = ring(&["x", "y"]);
        let e = eliminate(&ideal(&r, &["y^3 - y + 2"]), &[0]).unwrap();
        assert_eq!(e.generators(), polys(e.ring(), &["y^3 - y + 2"]).as_slice());
    }

    #[test]
    fn dimensions() {
        let r = ring(&["y1", "y2", "y3"]);
        assert_eq!(dimension(&ideal(&r, &["y2^2 - y1*y3"]), &TermOrder::DegRevLex), Ok(2));
        assert_eq!(dimension(&ideal(&r, &["y1", "y2", "y3"]), &TermOrder::Lex), Ok(0));
        assert_eq!(dimension(&ideal(&r, &["1"]), &TermOrder::Lex), Ok(-1));
        assert_eq!(dimension(&Ideal::<Rational>::zero(&r), &TermOrder::Lex), Ok(3));
        assert_eq!(dimension(&ideal(&r, &["y1*y2", "y3"]), &TermOrder::Lex), Ok(1));
    }

    #[test]
    fn colon_of_a_monomial() {
        let r = ring(&["x", "y"]);
        let i = ideal(&r, &["x*y"]);
        let c = colon_ideal(&i, &polys(&r, &["x"])[0]).unwrap();
        assert_eq!(c.generators(), polys(&r, &["y"]).as_slice());
        assert_eq!(colon_ideal(&i, &Polynomial::one(&r)).unwrap(), i);
    }

    #[test]
    fn example_with_x0_pivot() {
        let r = ring(&["x0", "x1", "x2", "x3"]);
        let f = polys(
            &r,
            &[
                "x3^3 - x1*x2*x0",
                "x2^3 - x1*x3*x0 - x2*x0^2",
                "x1^2*x2 - x3*x0^2",
                "x1^3*x3*x0 - x2^2*x3*x0^2 + x3*x0^4",
            ],
        );
        let i = Ideal::new(&r, f[..3].to_vec()).unwrap();
        let gb = reduced_groebner(&TermOrder::XiDegRev(0), &i).unwrap();
        assert_eq!(gb.len(), 4);
        for g in &f {
            assert!(gb.elements().contains(g), "{g}");
        }
        assert!(is_groebner(&TermOrder::XiDegRev(0), gb.elements()));
    }
}
