//! Exact number helpers and their canonical JSON encodings.
//!
//! Rationals are written as `"p/q"` strings (always with an explicit
//! denominator). Integers are written as JSON numbers while they fit the
//! 53-bit safe range and as decimal strings beyond it; readers accept both.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize, Serializer};
use std::fmt;

pub type Rational = BigRational;

/// Largest magnitude that survives a round trip through an IEEE double.
pub const MAX_SAFE_INT: i64 = (1 << 53) - 1;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(Rational::new(n, d))
        }
        None => s.parse::<BigInt>().ok().map(Rational::from_integer),
    }
}

/// `min(1, r)`.
pub fn clamp_one(r: Rational) -> Rational {
    if r > Rational::one() {
        Rational::one()
    } else {
        r
    }
}

pub fn is_integer(r: &Rational) -> bool {
    r.denom().is_one()
}

pub fn abs(r: &Rational) -> Rational {
    r.abs()
}

/// Serde adapter for a single rational.
pub mod rational_str {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let raw = String::deserialize(d)?;
        parse_rational(&raw).ok_or_else(|| de::Error::custom(format!("invalid rational {raw:?}")))
    }
}

/// Serde adapter for a vector of rationals.
pub mod rational_vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        let strings: Vec<String> = v.iter().map(format_rational).collect();
        strings.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        let raw = Vec::<String>::deserialize(d)?;
        raw.iter()
            .map(|r| {
                parse_rational(r)
                    .ok_or_else(|| de::Error::custom(format!("invalid rational {r:?}")))
            })
            .collect()
    }
}

/// An `i64` with the safe-range JSON encoding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct SafeInt(pub i64);

impl Serialize for SafeInt {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if self.0.abs() <= MAX_SAFE_INT {
            s.serialize_i64(self.0)
        } else {
            s.serialize_str(&self.0.to_string())
        }
    }
}

impl<'de> Deserialize<'de> for SafeInt {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = SafeInt;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an integer or a decimal integer string")
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<SafeInt, E> {
                Ok(SafeInt(v))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<SafeInt, E> {
                i64::try_from(v)
                    .map(SafeInt)
                    .map_err(|_| E::custom("integer out of range"))
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<SafeInt, E> {
                v.trim()
                    .parse::<i64>()
                    .map(SafeInt)
                    .map_err(|_| E::custom(format!("invalid integer {v:?}")))
            }
        }
        d.deserialize_any(V)
    }
}

/// Serde adapter for `i64` fields.
pub mod safe_int {
    use super::*;

    pub fn serialize<S: Serializer>(v: &i64, s: S) -> Result<S::Ok, S::Error> {
        SafeInt(*v).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<i64, D::Error> {
        SafeInt::deserialize(d).map(|v| v.0)
    }
}

/// Serde adapter for `Vec<i64>`.
pub mod safe_int_vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[i64], s: S) -> Result<S::Ok, S::Error> {
        let wrapped: Vec<SafeInt> = v.iter().copied().map(SafeInt).collect();
        wrapped.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<i64>, D::Error> {
        Vec::<SafeInt>::deserialize(d).map(|v| v.into_iter().map(|x| x.0).collect())
    }
}

/// Serde adapter for `Vec<Vec<i64>>`.
pub mod safe_int_matrix {
    use super::*;

    pub fn serialize<S: Serializer>(m: &[Vec<i64>], s: S) -> Result<S::Ok, S::Error> {
        let wrapped: Vec<Vec<SafeInt>> = m
            .iter()
            .map(|row| row.iter().copied().map(SafeInt).collect())
            .collect();
        wrapped.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<i64>>, D::Error> {
        Vec::<Vec<SafeInt>>::deserialize(d).map(|m| {
            m.into_iter()
                .map(|row| row.into_iter().map(|x| x.0).collect())
                .collect()
        })
    }
}
