use std::sync::Arc;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RingError {
    #[error("a polynomial ring needs at least one variable")]
    Empty,
    #[error("duplicate variable `{0}`")]
    Duplicate(String),
    #[error("`{0}` is not a valid variable name")]
    BadName(String),
    #[error("unknown variable `{0}`")]
    Unknown(String),
}

/// The indeterminates of `Q[x1, .., xn]`; position in the list fixes the
/// variable index, and every term ordering has `x1 > x2 > .. > xn`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RingSpec {
    names: Vec<String>,
}

pub(crate) fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl RingSpec {
    pub fn new<S: AsRef<str>>(names: &[S]) -> Result<Arc<Self>, RingError> {
        if names.is_empty() {
            return Err(RingError::Empty);
        }
        let mut out: Vec<String> = Vec::with_capacity(names.len());
        for name in names {
            let name = name.as_ref();
            if !is_identifier(name) {
                return Err(RingError::BadName(name.to_string()));
            }
            if out.iter().any(|n| n == name) {
                return Err(RingError::Duplicate(name.to_string()));
            }
            out.push(name.to_string());
        }
        Ok(Arc::new(RingSpec { names: out }))
    }

    /// The ring with no indeterminates; used for constants of `Q(a)`.
    pub fn scalar() -> Arc<Self> {
        Arc::new(RingSpec { names: Vec::new() })
    }

    pub fn arity(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, index: usize) -> &str {
        &self.names[index]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn require(&self, name: &str) -> Result<usize, RingError> {
        self.index_of(name).ok_or_else(|| RingError::Unknown(name.to_string()))
    }

    /// The ring `Q[x1, .., x_{i-1}, x_{i+1}, .., xn]`.
    pub fn without(&self, index: usize) -> Arc<Self> {
        let mut names = self.names.clone();
        names.remove(index);
        Arc::new(RingSpec { names })
    }

    /// Concatenation; fails on clashing names.
    pub fn join(&self, other: &RingSpec) -> Result<Arc<Self>, RingError> {
        let names: Vec<&str> = self
            .names
            .iter()
            .chain(other.names.iter())
            .map(String::as_str)
            .collect();
        RingSpec::new(&names)
    }

    /// A fresh name based on `stem` that does not clash with this ring.
    pub fn fresh_name(&self, stem: &str) -> String {
        let mut candidate = stem.to_string();
        while self.index_of(&candidate).is_some() {
            candidate.insert(0, '_');
        }
        candidate
    }
}
