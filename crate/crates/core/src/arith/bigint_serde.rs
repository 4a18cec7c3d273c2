//! Serde helpers writing integers as JSON numbers when they fit in `i64` and
//! as decimal strings otherwise.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::ser::{SerializeSeq, Serializer};

pub fn serialize<S: Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    match x.to_i64() {
        Some(v) => s.serialize_i64(v),
        None => s.serialize_str(&x.to_string()),
    }
}

struct Wrap<'a>(&'a BigInt);

impl serde::Serialize for Wrap<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        serialize(self.0, s)
    }
}

struct WrapVec<'a>(&'a [BigInt]);

impl serde::Serialize for WrapVec<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        vec(self.0, s)
    }
}

pub fn vec<S: Serializer>(xs: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(xs.len()))?;
    for x in xs {
        seq.serialize_element(&Wrap(x))?;
    }
    seq.end()
}

pub fn vec_vec<S: Serializer>(xs: &[Vec<BigInt>], s: S) -> Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(xs.len()))?;
    for x in xs {
        seq.serialize_element(&WrapVec(x))?;
    }
    seq.end()
}
