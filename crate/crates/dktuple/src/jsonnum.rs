//! Serde helpers for arbitrary-precision values in JSON.
//!
//! Elements of tuples and other arbitrary-precision integers are rendered as
//! decimal strings so nothing is lost in transit. Signed integers that fit in
//! 53 bits (the IEEE double mantissa, the usual JSON interop boundary) are
//! emitted as plain JSON numbers; anything larger becomes a decimal string.
//! Deserialization accepts both forms. Rationals travel as `"num/den"`.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use serde::{de, Deserialize, Deserializer, Serializer};
use std::str::FromStr;

const SAFE_INT_BOUND: i128 = 1 << 53;

/// `BigUint` as a decimal string, always.
pub mod biguint_string {
    use super::*;

    pub fn serialize<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
        let raw = String::deserialize(d)?;
        BigUint::from_str(&raw).map_err(de::Error::custom)
    }
}

/// `Vec<BigUint>` as decimal strings.
pub mod biguint_vec_string {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[BigUint], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|x| x.to_string()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigUint>, D::Error> {
        let raw: Vec<String> = Vec::deserialize(d)?;
        raw.iter()
            .map(|x| BigUint::from_str(x).map_err(de::Error::custom))
            .collect()
    }
}

/// `BigInt` as a JSON number when |v| <= 2^53, else a decimal string.
pub mod bigint_compact {
    use super::*;
    use num_traits::ToPrimitive;

    pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        match v.to_i128() {
            Some(small) if small.abs() <= SAFE_INT_BOUND => s.serialize_i64(small as i64),
            _ => s.serialize_str(&v.to_string()),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        struct V;
        impl de::Visitor<'_> for V {
            type Value = BigInt;
            fn expecting(&self, f: &mut std::fmt::Formatter) -> std::fmt::Result {
                f.write_str("an integer or a decimal string")
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<BigInt, E> {
                Ok(BigInt::from(v))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<BigInt, E> {
                Ok(BigInt::from(v))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<BigInt, E> {
                BigInt::from_str(v).map_err(de::Error::custom)
            }
        }
        d.deserialize_any(V)
    }
}

/// `BigRational` as the string `"num/den"` (always both parts, lowest terms).
pub mod rational_string {
    use super::*;

    pub fn serialize<S: Serializer>(v: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format!("{}/{}", v.numer(), v.denom()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        let raw = String::deserialize(d)?;
        let (num, den) = raw
            .split_once('/')
            .ok_or_else(|| de::Error::custom("expected num/den"))?;
        let num = BigInt::from_str(num).map_err(de::Error::custom)?;
        let den = BigInt::from_str(den).map_err(de::Error::custom)?;
        if den == BigInt::from(0) {
            return Err(de::Error::custom("zero denominator"));
        }
        Ok(BigRational::new(num, den))
    }
}
