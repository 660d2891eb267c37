//! String encodings for big numbers in JSON output.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serializer;

pub fn bigint<S: Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

pub fn rational<S: Serializer>(q: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&q.to_string())
}

pub fn opt_bigint<S: Serializer>(x: &Option<BigInt>, s: S) -> Result<S::Ok, S::Error> {
    match x {
        Some(x) => s.serialize_some(&x.to_string()),
        None => s.serialize_none(),
    }
}
