//! Exact rationals.
//!
//! `Rational` is `num_rational::BigRational`, which keeps every value
//! normalized: positive denominator, coprime parts, zero stored as `0/1`.

use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RatOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Exact binary operation; division by zero is an error instead of a panic.
pub fn rat_arith(a: &Rational, b: &Rational, op: RatOp) -> Result<Rational> {
    Ok(match op {
        RatOp::Add => a + b,
        RatOp::Sub => a - b,
        RatOp::Mul => a * b,
        RatOp::Div => {
            if b.is_zero() {
                return Err(Error::DivisionByZero);
            }
            a / b
        }
    })
}

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

/// Fractional part `x - floor(x)`, always in `[0, 1)`.
pub fn frac(x: &Rational) -> Rational {
    x - x.floor()
}

pub fn is_integer(x: &Rational) -> bool {
    x.denom().is_one()
}

/// `x` as an `i64` when it is an integer that fits.
pub fn to_i64(x: &Rational) -> Option<i64> {
    if !is_integer(x) {
        return None;
    }
    i64::try_from(x.numer()).ok()
}

/// Parses `"K"`, `"-K"`, or `"K/L"` (whitespace around tokens allowed).
pub fn parse_rational(text: &str) -> Result<Rational> {
    let err = || Error::ParseRational(text.to_string());
    let trimmed = text.trim();
    let (num, den) = match trimmed.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (trimmed, "1"),
    };
    let num = BigInt::from_str(num).map_err(|_| err())?;
    let den = BigInt::from_str(den).map_err(|_| err())?;
    if den.is_zero() {
        return Err(err());
    }
    Ok(Rational::new(num, den))
}

/// `num/den`, or just `num` when the denominator is 1.
pub fn format_rational(x: &Rational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Least common multiple of the denominators.
pub fn common_denominator<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

pub fn binomial(top: u64, k: u64) -> BigInt {
    if k > top {
        return BigInt::zero();
    }
    let k = k.min(top - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(top - i) / BigInt::from(i + 1);
    }
    acc
}

/// Counting binomial `C(top, k)`, zero whenever `top < k` (including negative `top`).
pub fn binomial_counting(top: i64, k: u64) -> BigInt {
    if top < 0 || (top as u64) < k {
        BigInt::zero()
    } else {
        binomial(top as u64, k)
    }
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// JSON form of a rational: `{"num": "-3", "den": "4"}` with decimal strings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalJson {
    pub num: String,
    pub den: String,
}

impl From<&Rational> for RationalJson {
    fn from(x: &Rational) -> Self {
        RationalJson {
            num: x.numer().to_string(),
            den: x.denom().to_string(),
        }
    }
}

impl TryFrom<&RationalJson> for Rational {
    type Error = Error;

    fn try_from(value: &RationalJson) -> Result<Rational> {
        let err = || Error::ParseRational(format!("{}/{}", value.num, value.den));
        let num = BigInt::from_str(&value.num).map_err(|_| err())?;
        let den = BigInt::from_str(&value.den).map_err(|_| err())?;
        if !den.is_positive() {
            return Err(err());
        }
        Ok(Rational::new(num, den))
    }
}

/// `serde(with = ...)` adapters so report structs can hold `Rational` directly.
pub mod serde_rational {
    use super::*;

    pub fn serialize<S: Serializer>(x: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        RationalJson::from(x).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let raw = RationalJson::deserialize(d)?;
        Rational::try_from(&raw).map_err(serde::de::Error::custom)
    }

    pub mod vec {
        use super::*;

        pub fn serialize<S: Serializer>(xs: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
            let raw: Vec<RationalJson> = xs.iter().map(RationalJson::from).collect();
            raw.serialize(s)
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Rational>, D::Error> {
            let raw = Vec::<RationalJson>::deserialize(d)?;
            raw.iter()
                .map(|r| Rational::try_from(r).map_err(serde::de::Error::custom))
                .collect()
        }
    }

    pub mod nested {
        use super::*;

        pub fn serialize<S: Serializer>(xs: &[Vec<Rational>], s: S) -> std::result::Result<S::Ok, S::Error> {
            let raw: Vec<Vec<RationalJson>> = xs
                .iter()
                .map(|row| row.iter().map(RationalJson::from).collect())
                .collect();
            raw.serialize(s)
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(
            d: D,
        ) -> std::result::Result<Vec<Vec<Rational>>, D::Error> {
            let raw = Vec::<Vec<RationalJson>>::deserialize(d)?;
            raw.iter()
                .map(|row| {
                    row.iter()
                        .map(|r| Rational::try_from(r).map_err(serde::de::Error::custom))
                        .collect()
                })
                .collect()
        }
    }
}
