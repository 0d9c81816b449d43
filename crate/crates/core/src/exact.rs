//! JSON renderings of exact numbers: integers as decimal strings, rationals as
//! `{"num": "...", "den": "..."}` in lowest terms.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use serde::ser::SerializeStruct;
use serde::Serializer;

pub fn ser_biguint<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

pub fn ser_opt_biguint<S: Serializer>(v: &Option<BigUint>, s: S) -> Result<S::Ok, S::Error> {
    match v {
        Some(v) => s.serialize_some(&v.to_string()),
        None => s.serialize_none(),
    }
}

pub fn ser_bigint<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

pub fn ser_rational<S: Serializer>(v: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    let mut st = s.serialize_struct("Rational", 2)?;
    st.serialize_field("num", &v.numer().to_string())?;
    st.serialize_field("den", &v.denom().to_string())?;
    st.end()
}

pub fn ser_opt_rational<S: Serializer>(v: &Option<BigRational>, s: S) -> Result<S::Ok, S::Error> {
    match v {
        Some(v) => ser_rational(v, s),
        None => s.serialize_none(),
    }
}

/// `a/b` as a rational from naturals.
pub fn ratio(num: &BigUint, den: &BigUint) -> BigRational {
    BigRational::new(BigInt::from(num.clone()), BigInt::from(den.clone()))
}
