//! JSON-lines records.
//!
//! Integers above 2^53 - 1 are written as decimal strings so that parsers
//! backed by doubles do not round them.

use std::fmt;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub const MAX_SAFE_INTEGER: u64 = (1 << 53) - 1;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JsonInt(pub BigUint);

impl From<BigUint> for JsonInt {
    fn from(v: BigUint) -> Self {
        JsonInt(v)
    }
}

impl From<&BigUint> for JsonInt {
    fn from(v: &BigUint) -> Self {
        JsonInt(v.clone())
    }
}

impl From<u64> for JsonInt {
    fn from(v: u64) -> Self {
        JsonInt(BigUint::from(v))
    }
}

impl Serialize for JsonInt {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self.0.to_u64() {
            Some(v) if v <= MAX_SAFE_INTEGER => s.serialize_u64(v),
            _ => s.serialize_str(&self.0.to_string()),
        }
    }
}

struct JsonIntVisitor;

impl Visitor<'_> for JsonIntVisitor {
    type Value = JsonInt;

    fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("a nonnegative integer or a decimal string")
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> Result<JsonInt, E> {
        Ok(JsonInt(v.into()))
    }

    fn visit_str<E: de::Error>(self, v: &str) -> Result<JsonInt, E> {
        v.parse::<BigUint>()
            .map(JsonInt)
            .map_err(|_| E::invalid_value(de::Unexpected::Str(v), &self))
    }
}

impl<'de> Deserialize<'de> for JsonInt {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        d.deserialize_any(JsonIntVisitor)
    }
}

/// One tree node.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutputRecord {
    pub index: JsonInt,
    pub m: JsonInt,
    pub n: JsonInt,
    pub word: String,
    pub row: u64,
}

/// One sequence term.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeqRecord {
    pub k: JsonInt,
    pub value: JsonInt,
}
