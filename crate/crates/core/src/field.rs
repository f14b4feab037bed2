//! Coefficient fields.
//!
//! Every algebraic routine in this crate is generic over a [`Field`]. Two
//! fields are provided: the rationals ([`Rational`]) and the rational function
//! field `Q(a1, .., am)` ([`RationalFunction`](crate::family::RationalFunction))
//! used for parametric families.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Exact rationals. Always kept in lowest terms with a positive denominator.
pub type Rational = BigRational;

/// How a coefficient wants to be rendered in front of a power product.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CoefficientText {
    /// A rational number; `magnitude` is `None` when the absolute value is one.
    Rational { negative: bool, magnitude: Option<String> },
    /// Anything else; rendered verbatim (the printer wraps it when needed).
    Compound(String),
}

/// A commutative field with exact arithmetic.
pub trait Field:
    Clone
    + PartialEq
    + fmt::Debug
    + Send
    + Sync
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + for<'a> Add<&'a Self, Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
    + for<'a> Div<&'a Self, Output = Self>
{
    /// Multiplicative inverse. Panics on zero.
    fn inv(&self) -> Self;

    /// The embedding of the prime field.
    fn from_rational(r: Rational) -> Self;

    /// `Some(r)` when the element lies in the embedded copy of `Q`.
    fn to_rational(&self) -> Option<Rational>;

    fn coefficient_text(&self) -> CoefficientText;

    /// A nonzero scale that makes `values` cheap to store, used internally by
    /// the Gröbner engine. Any nonzero answer is correct; the default makes
    /// the first value one.
    fn content_scale(values: &[Self]) -> Self {
        values[0].inv()
    }
}

impl Field for Rational {
    fn inv(&self) -> Self {
        self.recip()
    }

    fn from_rational(r: Rational) -> Self {
        r
    }

    fn to_rational(&self) -> Option<Rational> {
        Some(self.clone())
    }

    fn coefficient_text(&self) -> CoefficientText {
        let magnitude = self.abs();
        CoefficientText::Rational {
            negative: self.is_negative(),
            magnitude: if magnitude.is_one() {
                None
            } else {
                Some(format_rational(&magnitude))
            },
        }
    }

    /// Clears denominators and integer content.
    fn content_scale(values: &[Self]) -> Self {
        use num_integer::Integer;
        let mut den = BigInt::one();
        let mut num = BigInt::zero();
        for v in values {
            den = den.lcm(v.denom());
            num = num.gcd(v.numer());
        }
        let scale = Rational::new(den, num);
        if values[0].is_negative() {
            -scale
        } else {
            scale
        }
    }
}

/// Canonical `p/q` text (just `p` for integers).
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `p`, `-p` or `p/q` (as used in JSON files).
pub fn parse_rational(text: &str) -> Option<Rational> {
    let text = text.trim();
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let num: BigInt = num.parse().ok()?;
    let den: BigInt = den.parse().ok()?;
    if den.is_zero() {
        return None;
    }
    Some(Rational::new(num, den))
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals_stay_canonical() {
        let r = rat(6, -4);
        assert_eq!(r.numer(), &BigInt::from(-3));
        assert_eq!(r.denom(), &BigInt::from(2));
        assert_eq!(rat(0, 7), int(0));
        assert_eq!(rat(0, 7).denom(), &BigInt::from(1));
    }

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rational("-3/6"), Some(rat(-1, 2)));
        assert_eq!(parse_rational(" 5 "), Some(int(5)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("x"), None);
        assert_eq!(format_rational(&rat(-7, 3)), "-7/3");
        assert_eq!(format_rational(&int(12)), "12");
    }

    #[test]
    fn coefficient_text_hides_unit_magnitude() {
        assert_eq!(
            int(-1).coefficient_text(),
            CoefficientText::Rational {
                negative: true,
                magnitude: None
            }
        );
        assert_eq!(
            rat(2, 3).coefficient_text(),
            CoefficientText::Rational {
                negative: false,
                magnitude: Some("2/3".into())
            }
        );
    }
}
