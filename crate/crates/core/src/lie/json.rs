use num_bigint::BigInt;
use serde_json::{json, Value};

use super::{LieAlgebra, LieError};
use crate::arith::{ExtField, Integers, PrimeField, Ring};

/// Rings whose elements and descriptors have a JSON form.
pub trait JsonRing: Ring {
    fn descriptor(&self) -> Value;
    fn elem_to_json(&self, e: &Self::Elem) -> Value;
    fn elem_from_json(&self, v: &Value) -> Option<Self::Elem>;
}

impl JsonRing for PrimeField {
    fn descriptor(&self) -> Value {
        json!({"p": self.p(), "d": 1, "f": [0, 1]})
    }
    fn elem_to_json(&self, e: &u64) -> Value {
        json!(e)
    }
    fn elem_from_json(&self, v: &Value) -> Option<u64> {
        v.as_i64().map(|x| self.reduce_i64(x))
    }
}

impl JsonRing for ExtField {
    fn descriptor(&self) -> Value {
        json!({"p": self.p(), "d": self.degree(), "f": self.modulus()})
    }
    fn elem_to_json(&self, e: &crate::arith::ExtElem) -> Value {
        json!(self.coeffs(e))
    }
    fn elem_from_json(&self, v: &Value) -> Option<crate::arith::ExtElem> {
        let arr = v.as_array()?;
        let coeffs: Option<Vec<u64>> = arr.iter().map(|x| x.as_u64()).collect();
        let coeffs = coeffs?;
        (coeffs.len() == self.degree()).then(|| self.from_coeffs(&coeffs))
    }
}

impl JsonRing for Integers {
    fn descriptor(&self) -> Value {
        json!({"p": 0, "d": 1, "f": [0, 1]})
    }
    fn elem_to_json(&self, e: &BigInt) -> Value {
        match i64::try_from(e) {
            Ok(x) => json!(x),
            Err(_) => json!(e.to_string()),
        }
    }
    fn elem_from_json(&self, v: &Value) -> Option<BigInt> {
        match v {
            Value::Number(n) => n.as_i64().map(BigInt::from),
            Value::String(s) => s.parse().ok(),
            _ => None,
        }
    }
}

/// `{"ring": {...}, "dim": d, "labels": [...], "constants": [[i, j, k, c], ...]}`
/// with only `i < j` listed.
pub fn algebra_to_json<R: JsonRing>(g: &LieAlgebra<R>) -> Value {
    let constants: Vec<Value> = g
        .constants()
        .into_iter()
        .filter(|(i, j, _, _)| i < j)
        .map(|(i, j, k, c)| json!([i, j, k, g.ring().elem_to_json(&c)]))
        .collect();
    json!({
        "ring": g.ring().descriptor(),
        "dim": g.dim(),
        "labels": g.labels(),
        "constants": constants,
    })
}

pub fn algebra_from_json<R: JsonRing>(ring: R, v: &Value) -> Result<LieAlgebra<R>, LieError> {
    let bad = |m: &str| LieError::Format(m.to_string());
    if v.get("ring") != Some(&ring.descriptor()) {
        return Err(bad("ring descriptor mismatch"));
    }
    let labels: Vec<String> = v
        .get("labels")
        .and_then(|l| l.as_array())
        .ok_or_else(|| bad("missing labels"))?
        .iter()
        .map(|x| x.as_str().map(str::to_string).ok_or_else(|| bad("label not a string")))
        .collect::<Result<_, _>>()?;
    if v.get("dim").and_then(|d| d.as_u64()) != Some(labels.len() as u64) {
        return Err(bad("dim does not match labels"));
    }
    let mut consts = Vec::new();
    for c in v.get("constants").and_then(|c| c.as_array()).ok_or_else(|| bad("missing constants"))? {
        let arr = c.as_array().filter(|a| a.len() == 4).ok_or_else(|| bad("constant must be [i,j,k,c]"))?;
        let idx = |n: usize| arr[n].as_u64().map(|x| x as usize).ok_or_else(|| bad("index not an integer"));
        let val = ring.elem_from_json(&arr[3]).ok_or_else(|| bad("bad coefficient"))?;
        consts.push((idx(0)?, idx(1)?, idx(2)?, val));
    }
    LieAlgebra::new(ring, labels, consts)
}
