//! JSON-friendly encodings for fields that serde cannot map directly.

use num_bigint::BigInt;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::collections::BTreeMap;

fn big_to_value(v: &BigInt) -> serde_json::Value {
    match i64::try_from(v) {
        Ok(x) => x.into(),
        Err(_) => v.to_string().into(),
    }
}

fn value_to_big<E: serde::de::Error>(v: &serde_json::Value) -> Result<BigInt, E> {
    match v {
        serde_json::Value::Number(n) => n.as_i64().map(BigInt::from).ok_or_else(|| E::custom("not an integer")),
        serde_json::Value::String(s) => s.parse().map_err(|_| E::custom("not an integer")),
        _ => Err(E::custom("not an integer")),
    }
}

/// Integers as JSON numbers, or decimal strings beyond i64.
pub mod bigint_vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        v.iter().map(big_to_value).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        Vec::<serde_json::Value>::deserialize(d)?
            .iter()
            .map(value_to_big::<D::Error>)
            .collect()
    }
}

/// A term map as a list of `[[variables], coefficient]` pairs.
pub mod term_map {
    use super::*;

    pub fn serialize<S: Serializer>(m: &BTreeMap<Vec<usize>, u8>, s: S) -> Result<S::Ok, S::Error> {
        m.iter().collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BTreeMap<Vec<usize>, u8>, D::Error> {
        let pairs = Vec::<(Vec<usize>, u8)>::deserialize(d)?;
        let mut m = BTreeMap::new();
        for (mut vars, c) in pairs {
            vars.sort_unstable();
            vars.dedup();
            if c % 8 != 0 && m.insert(vars, c % 8).is_some() {
                return Err(D::Error::custom("repeated term"));
            }
        }
        Ok(m)
    }
}
