//! Exact number literals as they appear in JSON inputs: either a JSON
//! integer or a string holding an integer or a fraction `"p/q"`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::de::{self, Deserializer, Visitor};
use serde::Deserialize;

use crate::error::{Error, Result};

pub fn parse_int(s: &str) -> Result<BigInt> {
    let t = s.trim();
    let digits = t.strip_prefix(['-', '+']).unwrap_or(t);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::Parse(format!("not an integer: {s:?}")));
    }
    BigInt::from_str(t).map_err(|e| Error::Parse(format!("not an integer: {s:?} ({e})")))
}

/// Parses `"p"`, `"-p"` or `"p/q"` into a reduced rational.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    match s.split_once('/') {
        None => Ok(BigRational::from_integer(parse_int(s)?)),
        Some((num, den)) => {
            let num = parse_int(num)?;
            let den = parse_int(den)?;
            if den.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            Ok(BigRational::new(num, den))
        }
    }
}

/// Renders a rational as `"p"` or `"p/q"`.
pub fn fmt_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Integer literal accepting JSON integers or integer strings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntLit(pub BigInt);

/// Rational literal accepting JSON integers, integer strings or `"p/q"`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatLit(pub BigRational);

struct IntLitVisitor;

impl Visitor<'_> for IntLitVisitor {
    type Value = IntLit;

    fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("an integer or an integer string")
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<IntLit, E> {
        Ok(IntLit(v.into()))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<IntLit, E> {
        Ok(IntLit(v.into()))
    }

    fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<IntLit, E> {
        parse_int(v).map(IntLit).map_err(E::custom)
    }
}

impl<'de> Deserialize<'de> for IntLit {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        d.deserialize_any(IntLitVisitor)
    }
}

struct RatLitVisitor;

impl Visitor<'_> for RatLitVisitor {
    type Value = RatLit;

    fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("an integer or a rational string \"p/q\"")
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<RatLit, E> {
        Ok(RatLit(BigRational::from_integer(v.into())))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<RatLit, E> {
        Ok(RatLit(BigRational::from_integer(v.into())))
    }

    fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<RatLit, E> {
        parse_rational(v).map(RatLit).map_err(E::custom)
    }
}

impl<'de> Deserialize<'de> for RatLit {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        d.deserialize_any(RatLitVisitor)
    }
}

/// serde adapter writing a `BigRational` as `"p/q"` and reading any [`RatLit`].
pub mod rational {
    use super::*;
    use serde::Serializer;

    pub fn serialize<S: Serializer>(q: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_rational(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<BigRational, D::Error> {
        RatLit::deserialize(d).map(|r| r.0)
    }
}

/// serde adapter for `Vec<BigRational>`.
pub mod rational_vec {
    use super::*;
    use serde::ser::SerializeSeq;
    use serde::Serializer;

    pub fn serialize<S: Serializer>(v: &[BigRational], s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for q in v {
            seq.serialize_element(&fmt_rational(q))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Vec<BigRational>, D::Error> {
        Vec::<RatLit>::deserialize(d).map(|v| v.into_iter().map(|r| r.0).collect())
    }
}

/// serde adapter for `BigInt` as a decimal string.
pub mod int {
    use super::*;
    use serde::Serializer;

    pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<BigInt, D::Error> {
        IntLit::deserialize(d).map(|r| r.0)
    }
}
