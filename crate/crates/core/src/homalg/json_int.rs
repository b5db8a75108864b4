//! JSON form of arbitrary-precision integers: a plain number when it fits in
//! `i64`, otherwise a decimal string.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
pub(crate) enum JsonInt {
    Small(i64),
    Big(String),
}

impl From<&BigInt> for JsonInt {
    fn from(x: &BigInt) -> Self {
        match x.to_i64() {
            Some(v) => JsonInt::Small(v),
            None => JsonInt::Big(x.to_string()),
        }
    }
}

impl TryFrom<JsonInt> for BigInt {
    type Error = String;

    fn try_from(x: JsonInt) -> Result<Self, String> {
        match x {
            JsonInt::Small(v) => Ok(v.into()),
            JsonInt::Big(s) => s.parse().map_err(|_| format!("not an integer: {s:?}")),
        }
    }
}

/// `#[serde(with = ...)]` adapter for `Vec<BigInt>`.
pub(crate) mod vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        v.iter().map(JsonInt::from).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        Vec::<JsonInt>::deserialize(d)?
            .into_iter()
            .map(|x| BigInt::try_from(x).map_err(serde::de::Error::custom))
            .collect()
    }
}
