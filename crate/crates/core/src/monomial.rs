use std::fmt;

use smallvec::SmallVec;

/// A power product `x1^e1 * .. * xn^en`, stored as its exponent vector.
///
/// The derived `Ord` is the lexicographic order on exponent vectors. It is
/// used as the canonical storage key of polynomials and has nothing to do with
/// the term ordering chosen for a computation.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PowerProduct(SmallVec<[u32; 8]>);

impl PowerProduct {
    pub fn one(arity: usize) -> Self {
        PowerProduct(SmallVec::from_elem(0, arity))
    }

    pub fn from_exponents(exponents: &[u32]) -> Self {
        PowerProduct(SmallVec::from_slice(exponents))
    }

    /// The indeterminate `x_index` in a ring of the given arity.
    pub fn var(arity: usize, index: usize) -> Self {
        let mut t = Self::one(arity);
        t.0[index] = 1;
        t
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn arity(&self) -> usize {
        self.0.len()
    }

    /// Exponent of `x_index`, written `log_{x_i}(t)` in the literature.
    pub fn log(&self, index: usize) -> u32 {
        self.0[index]
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn divides(&self, other: &Self) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| a <= b)
    }

    /// `other / self` when `self` divides `other`.
    pub fn quotient_of(&self, other: &Self) -> Option<Self> {
        if !self.divides(other) {
            return None;
        }
        Some(PowerProduct(
            other.0.iter().zip(self.0.iter()).map(|(b, a)| b - a).collect(),
        ))
    }

    pub fn mul(&self, other: &Self) -> Self {
        PowerProduct(self.0.iter().zip(other.0.iter()).map(|(a, b)| a + b).collect())
    }

    pub fn lcm(&self, other: &Self) -> Self {
        PowerProduct(self.0.iter().zip(other.0.iter()).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn is_coprime(&self, other: &Self) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| *a == 0 || *b == 0)
    }

    /// Indices of the indeterminates actually occurring.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().filter(|(_, e)| **e > 0).map(|(i, _)| i)
    }

    /// Removes coordinate `index` (the caller decides what happens to its exponent).
    pub fn without(&self, index: usize) -> Self {
        let mut v = self.0.clone();
        v.remove(index);
        PowerProduct(v)
    }

    /// Inserts a new coordinate with exponent `exponent` at `index`.
    pub fn with_inserted(&self, index: usize, exponent: u32) -> Self {
        let mut v = self.0.clone();
        v.insert(index, exponent);
        PowerProduct(v)
    }

    pub fn set(&mut self, index: usize, exponent: u32) {
        self.0[index] = exponent;
    }

    /// Rebuilds the exponent vector through `map[old] = new position` into a
    /// ring of arity `arity`.
    pub fn remap(&self, map: &[usize], arity: usize) -> Self {
        let mut t = Self::one(arity);
        for (old, &e) in self.0.iter().enumerate() {
            t.0[map[old]] += e;
        }
        t
    }
}

impl fmt::Debug for PowerProduct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0.as_slice())
    }
}
