//! Term orderings on power products.

use std::cmp::Ordering;

use smallvec::SmallVec;
use thiserror::Error;

use crate::monomial::PowerProduct;
use crate::ring::RingSpec;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrderError {
    #[error("power products of arity {left} and {right} cannot be compared")]
    ArityMismatch { left: usize, right: usize },
    #[error("ordering refers to variable index {index} but the ring has {arity} variables")]
    IndexOutOfRange { index: usize, arity: usize },
    #[error("unknown term ordering `{0}`")]
    Unknown(String),
    #[error("elimination block must be a non-empty proper prefix of the variables: {0}")]
    BadBlock(String),
}

/// A term ordering. Indices are 0-based positions in the ring.
///
/// All variants order the indeterminates as `x1 > x2 > .. > xn`, except that
/// an `XiDegRev(i)` ordering necessarily puts `x_i` below every other
/// indeterminate.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum TermOrder {
    Lex,
    DegLex,
    DegRevLex,
    /// Degree-compatible; among terms of equal degree the smaller exponent of
    /// `x_i` wins, remaining ties broken reverse-lexicographically.
    XiDegRev(usize),
    /// Block ordering: the first `split` variables are compared with `front`,
    /// ties broken on the remaining ones with `back`. Any polynomial whose
    /// leading term is free of the front block lies entirely in the back ring.
    Elim {
        split: usize,
        front: Box<TermOrder>,
        back: Box<TermOrder>,
    },
}

fn revlex(a: &[u32], b: &[u32]) -> Ordering {
    for (x, y) in a.iter().zip(b.iter()).rev() {
        if x != y {
            return y.cmp(x);
        }
    }
    Ordering::Equal
}

fn degree(a: &[u32]) -> u64 {
    a.iter().map(|&e| e as u64).sum()
}

/// A vector whose lexicographic order coincides with a term ordering.
///
/// Every component is a linear function of the exponents, so the key of a
/// product is the sum of the keys.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OrderKey(SmallVec<[i64; 12]>);

impl OrderKey {
    pub fn add(&self, other: &OrderKey) -> OrderKey {
        OrderKey(self.0.iter().zip(other.0.iter()).map(|(a, b)| a + b).collect())
    }
}

fn push_key(order: &TermOrder, a: &[u32], out: &mut SmallVec<[i64; 12]>) {
    match order {
        TermOrder::Lex => out.extend(a.iter().map(|&e| e as i64)),
        TermOrder::DegLex => {
            out.push(degree(a) as i64);
            out.extend(a.iter().map(|&e| e as i64));
        }
        TermOrder::DegRevLex => {
            out.push(degree(a) as i64);
            out.extend(a.iter().rev().map(|&e| -(e as i64)));
        }
        TermOrder::XiDegRev(i) => {
            out.push(degree(a) as i64);
            out.push(-(a[*i] as i64));
            out.extend(a.iter().rev().map(|&e| -(e as i64)));
        }
        TermOrder::Elim { split, front, back } => {
            push_key(front, &a[..*split], out);
            push_key(back, &a[*split..], out);
        }
    }
}

impl TermOrder {
    /// Standard elimination ordering with DegRevLex inside both blocks.
    pub fn elimination(split: usize) -> Self {
        TermOrder::Elim {
            split,
            front: Box::new(TermOrder::DegRevLex),
            back: Box::new(TermOrder::DegRevLex),
        }
    }

    /// Compares two exponent vectors of equal length. Callers are expected to
    /// have validated arities; see [`TermOrder::compare`] for the checked form.
    pub fn cmp(&self, a: &PowerProduct, b: &PowerProduct) -> Ordering {
        self.cmp_slices(a.exponents(), b.exponents())
    }

    fn cmp_slices(&self, a: &[u32], b: &[u32]) -> Ordering {
        match self {
            TermOrder::Lex => a.cmp(b),
            TermOrder::DegLex => degree(a).cmp(&degree(b)).then_with(|| a.cmp(b)),
            TermOrder::DegRevLex => degree(a).cmp(&degree(b)).then_with(|| revlex(a, b)),
            TermOrder::XiDegRev(i) => degree(a)
                .cmp(&degree(b))
                .then_with(|| b[*i].cmp(&a[*i]))
                .then_with(|| revlex(a, b)),
            TermOrder::Elim { split, front, back } => front
                .cmp_slices(&a[..*split], &b[..*split])
                .then_with(|| back.cmp_slices(&a[*split..], &b[*split..])),
        }
    }

    pub fn key(&self, t: &PowerProduct) -> OrderKey {
        let mut out = SmallVec::new();
        push_key(self, t.exponents(), &mut out);
        OrderKey(out)
    }

    pub fn compare(&self, a: &PowerProduct, b: &PowerProduct) -> Result<Ordering, OrderError> {
        if a.arity() != b.arity() {
            return Err(OrderError::ArityMismatch {
                left: a.arity(),
                right: b.arity(),
            });
        }
        self.validate(a.arity())?;
        Ok(self.cmp(a, b))
    }

    pub fn validate(&self, arity: usize) -> Result<(), OrderError> {
        match self {
            TermOrder::XiDegRev(i) if *i >= arity => Err(OrderError::IndexOutOfRange { index: *i, arity }),
            TermOrder::Elim { split, front, back } => {
                if *split == 0 || *split >= arity {
                    return Err(OrderError::BadBlock(format!(
                        "split {split} in a ring of {arity} variables"
                    )));
                }
                front.validate(*split)?;
                back.validate(arity - split)
            }
            _ => Ok(()),
        }
    }

    pub fn is_degree_compatible(&self) -> bool {
        matches!(self, TermOrder::DegLex | TermOrder::DegRevLex | TermOrder::XiDegRev(_))
    }

    /// Whether the ordering is of `x_i`-DegRev type in a ring of `arity` variables.
    pub fn is_xi_degrev_type(&self, index: usize, arity: usize) -> bool {
        match self {
            TermOrder::XiDegRev(i) => *i == index,
            TermOrder::DegRevLex => index + 1 == arity,
            _ => false,
        }
    }

    /// The ordering induced on the power products free of `x_index`,
    /// re-indexed for the ring without that variable.
    pub fn restrict(&self, index: usize, arity: usize) -> TermOrder {
        match self {
            TermOrder::Lex | TermOrder::DegLex | TermOrder::DegRevLex => self.clone(),
            TermOrder::XiDegRev(i) => match (*i).cmp(&index) {
                Ordering::Equal => TermOrder::DegRevLex,
                Ordering::Less => TermOrder::XiDegRev(*i),
                Ordering::Greater => TermOrder::XiDegRev(*i - 1),
            },
            TermOrder::Elim { split, front, back } => {
                if index < *split {
                    if *split == 1 {
                        return (**back).clone();
                    }
                    TermOrder::Elim {
                        split: split - 1,
                        front: Box::new(front.restrict(index, *split)),
                        back: back.clone(),
                    }
                } else {
                    if arity - split == 1 {
                        return (**front).clone();
                    }
                    TermOrder::Elim {
                        split: *split,
                        front: front.clone(),
                        back: Box::new(back.restrict(index - split, arity - split)),
                    }
                }
            }
        }
    }

    /// Parses `lex`, `deglex`, `degrevlex`, `degrev:<var>` and
    /// `elim:<v1>,..,<vk>` (the block must be a prefix of the ring).
    pub fn parse(text: &str, ring: &RingSpec) -> Result<TermOrder, OrderError> {
        let text = text.trim();
        let lower = text.to_ascii_lowercase();
        match lower.as_str() {
            "lex" => return Ok(TermOrder::Lex),
            "deglex" => return Ok(TermOrder::DegLex),
            "degrevlex" | "drl" => return Ok(TermOrder::DegRevLex),
            _ => {}
        }
        if let Some(var) = text.strip_prefix("degrev:") {
            let index = ring
                .index_of(var.trim())
                .ok_or_else(|| OrderError::Unknown(text.to_string()))?;
            return Ok(TermOrder::XiDegRev(index));
        }
        if let Some(list) = text.strip_prefix("elim:") {
            let mut indices = Vec::new();
            for name in list.split(',') {
                let index = ring
                    .index_of(name.trim())
                    .ok_or_else(|| OrderError::Unknown(text.to_string()))?;
                indices.push(index);
            }
            indices.sort_unstable();
            indices.dedup();
            if indices.iter().enumerate().any(|(k, &i)| k != i) {
                return Err(OrderError::BadBlock(list.to_string()));
            }
            let order = TermOrder::elimination(indices.len());
            order.validate(ring.arity())?;
            return Ok(order);
        }
        Err(OrderError::Unknown(text.to_string()))
    }

    /// Inverse of [`TermOrder::parse`] for display purposes.
    pub fn name(&self, ring: &RingSpec) -> String {
        match self {
            TermOrder::Lex => "lex".into(),
            TermOrder::DegLex => "deglex".into(),
            TermOrder::DegRevLex => "degrevlex".into(),
            TermOrder::XiDegRev(i) => format!("degrev:{}", ring.name(*i)),
            TermOrder::Elim { split, .. } => format!("elim:{}", ring.names()[..*split].join(",")),
        }
    }
}
