//! Exact rationals and their string form `"p/q"`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::de::{self, Visitor};
use serde::{Deserializer, Serializer};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"p"`, `"-p"` or `"p/q"` with `q != 0`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(num, den))
}

pub fn format_rational(q: &Rational) -> String {
    q.to_string()
}

/// Least common multiple of the denominators of `qs` (1 for an empty slice).
pub fn denominator_lcm<'a>(qs: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    qs.into_iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()))
}

/// Multiplies `qs` by the lcm of their denominators and returns the integers.
pub fn clear_denominators(qs: &[Rational]) -> Vec<BigInt> {
    let l = Rational::from_integer(denominator_lcm(qs));
    qs.iter().map(|q| (q * &l).to_integer()).collect()
}

pub fn sign_of(q: &Rational) -> i8 {
    if q.is_positive() {
        1
    } else if q.is_negative() {
        -1
    } else {
        0
    }
}

struct RationalVisitor;

impl<'de> Visitor<'de> for RationalVisitor {
    type Value = Rational;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("a rational as a string \"p/q\" or an integer")
    }

    fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Rational, E> {
        parse_rational(v).map_err(E::custom)
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Rational, E> {
        Ok(rat(v))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Rational, E> {
        Ok(Rational::from_integer(BigInt::from(v)))
    }
}

/// Serde adapter for a single rational stored as a string.
pub mod as_string {
    use super::*;

    pub fn serialize<S: Serializer>(q: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        d.deserialize_any(RationalVisitor)
    }
}

/// Serde adapter for `Vec<Rational>` as an array of strings.
pub mod vec_as_strings {
    use super::*;
    use serde::ser::SerializeSeq;
    use serde::Deserialize;

    #[derive(Deserialize)]
    struct Wrapped(#[serde(with = "as_string")] Rational);

    pub fn serialize<S: Serializer>(qs: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(qs.len()))?;
        for q in qs {
            seq.serialize_element(&format_rational(q))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Rational>, D::Error> {
        let v: Vec<Wrapped> = Vec::deserialize(d)?;
        Ok(v.into_iter().map(|w| w.0).collect())
    }
}

/// Serde adapter for a rational matrix as nested arrays of strings.
pub mod matrix_as_strings {
    use super::*;
    use serde::ser::SerializeSeq;
    use serde::{Deserialize, Serialize};

    #[derive(Serialize, Deserialize)]
    struct Row(#[serde(with = "vec_as_strings")] Vec<Rational>);

    pub fn serialize<S: Serializer>(rows: &[Vec<Rational>], s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(rows.len()))?;
        for r in rows {
            seq.serialize_element(&Row(r.clone()))?;
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Vec<Rational>>, D::Error> {
        let v: Vec<Row> = Vec::deserialize(d)?;
        Ok(v.into_iter().map(|r| r.0).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_formats() {
        assert_eq!(parse_rational("6/4").unwrap(), ratio(3, 2));
        assert_eq!(parse_rational(" -7 ").unwrap(), rat(-7));
        assert_eq!(format_rational(&ratio(-1, 2)), "-1/2");
        assert_eq!(format_rational(&rat(5)), "5");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn clears_denominators() {
        let ints = clear_denominators(&[ratio(1, 2), ratio(-1, 3)]);
        assert_eq!(ints, vec![BigInt::from(3), BigInt::from(-2)]);
    }
}
