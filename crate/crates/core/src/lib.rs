//! Exact asymptotic expansions for the probability that a random labeled
//! object is connected, built from the derivative ("SEQ-irreducible") class.

pub mod bigseries;
pub mod decomp;
pub mod diagnostics;
pub mod error;
pub mod expansion;
pub mod models;
pub mod oracle;
pub mod verify;

pub use error::{Error, Result};

use num_rational::BigRational;
use serde::ser::SerializeStruct;

/// Serializes a rational as `{"numerator": "p", "denominator": "q"}`.
pub(crate) fn rational_object<S: serde::Serializer>(v: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    let mut st = s.serialize_struct("Rational", 2)?;
    st.serialize_field("numerator", &v.numer().to_string())?;
    st.serialize_field("denominator", &v.denom().to_string())?;
    st.end()
}

pub(crate) fn rational_objects<S: serde::Serializer>(v: &[BigRational], s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    #[derive(serde::Serialize)]
    struct Wrap<'a>(#[serde(serialize_with = "rational_object")] &'a BigRational);
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for x in v {
        seq.serialize_element(&Wrap(x))?;
    }
    seq.end()
}

