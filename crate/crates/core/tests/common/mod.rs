#![allow(dead_code)]

use std::sync::Arc;

use proptest::prelude::*;
use slicegb::field::int;
use slicegb::{PowerProduct, QPoly, Rational, RingSpec};

pub fn ring(names: &[&str]) -> Arc<RingSpec> {
    RingSpec::new(names).unwrap()
}

pub fn xring(n: usize) -> Arc<RingSpec> {
    let names: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
    RingSpec::new(&names).unwrap()
}

pub fn poly_from(ring: &Arc<RingSpec>, terms: &[(Vec<u32>, i64)]) -> QPoly {
    QPoly::from_terms(
        ring,
        terms.iter().map(|(e, c)| (PowerProduct::from_exponents(e), int(*c))),
    )
}

/// Exponent vectors of total degree at most `max_deg`.
pub fn exponents(n: usize, max_deg: u32) -> impl Strategy<Value = Vec<u32>> {
    prop::collection::vec(0..=max_deg, n).prop_map(move |mut e| {
        while e.iter().sum::<u32>() > max_deg {
            let k = e.iter().position(|&x| x > 0).unwrap();
            e[k] -= 1;
        }
        e
    })
}

/// Raw terms of a sparse polynomial with small nonzero integer coefficients.
pub fn terms(n: usize, max_deg: u32, max_terms: usize) -> impl Strategy<Value = Vec<(Vec<u32>, i64)>> {
    prop::collection::vec(
        (exponents(n, max_deg), (-5i64..=5).prop_filter("nonzero", |c| *c != 0)),
        1..=max_terms,
    )
}

pub fn small_rational() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=3).prop_map(|(n, d)| Rational::new(n.into(), d.into()))
}
