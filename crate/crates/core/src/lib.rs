//! Gröbner bases over the rationals and over rational function fields, with
//! hyperplane sections, parametric families and Hough-style detection.

pub mod family;
pub mod field;
pub mod formats;
pub mod groebner;
pub mod hough;
pub mod linalg;
pub mod monomial;
pub mod order;
pub mod poly;
pub mod ring;
pub mod section;
pub mod text;

pub use family::{Family, FamilyError, RationalFunction};
pub use field::{Field, Rational};
pub use groebner::{GroebnerBasis, GroebnerError, Ideal};
pub use monomial::PowerProduct;
pub use order::TermOrder;
pub use poly::Polynomial;
pub use ring::RingSpec;

/// Polynomials with rational coefficients.
pub type QPoly = Polynomial<Rational>;
/// Polynomials whose coefficients are rational functions of the parameters.
pub type ParamPoly = Polynomial<RationalFunction>;
