//! Serialization helpers for exact values.

use num_bigint::BigUint;
use num_rational::BigRational;
use serde::Serializer;

/// Big integers as decimal strings.
pub fn decimal<S: Serializer>(x: &BigUint, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

pub fn decimal_vec<S: Serializer>(xs: &[BigUint], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(xs.iter().map(|x| x.to_string()))
}

/// Rationals as `p/q` strings.
pub fn rational<S: Serializer>(x: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}
