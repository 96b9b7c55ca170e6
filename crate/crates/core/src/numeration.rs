//! Positional numeration systems `(b, D)` and `(-b, D)` with the consecutive
//! digit set `D = {d, …, d+b−1}` containing 0.

use std::fmt;
use std::ops::RangeInclusive;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactmath::rational::{rat, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BaseSign {
    Positive,
    Negative,
}

/// Which integers have a digit expansion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Representable {
    AllIntegers,
    NonNegatives,
    NonPositives,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct NumerationSystem {
    base_magnitude: i64,
    base_sign: BaseSign,
    d: i64,
}

impl NumerationSystem {
    pub fn new(base_magnitude: i64, d: i64, base_sign: BaseSign) -> Result<Self> {
        if base_magnitude < 2 {
            return Err(Error::InvalidSystem(format!(
                "base magnitude must be at least 2, got {base_magnitude}"
            )));
        }
        if d > 0 || d + base_magnitude - 1 < 0 {
            return Err(Error::InvalidSystem(format!(
                "digit set {{{d}, …, {}}} does not contain 0",
                d + base_magnitude - 1
            )));
        }
        Ok(NumerationSystem {
            base_magnitude,
            base_sign,
            d,
        })
    }

    pub fn positive(b: i64, d: i64) -> Result<Self> {
        Self::new(b, d, BaseSign::Positive)
    }

    pub fn negative(b: i64, d: i64) -> Result<Self> {
        Self::new(b, d, BaseSign::Negative)
    }

    pub fn base_magnitude(&self) -> i64 {
        self.base_magnitude
    }

    pub fn base_sign(&self) -> BaseSign {
        self.base_sign
    }

    pub fn is_negative(&self) -> bool {
        self.base_sign == BaseSign::Negative
    }

    /// The base with its sign: `b` or `-b`.
    pub fn signed_base(&self) -> i64 {
        match self.base_sign {
            BaseSign::Positive => self.base_magnitude,
            BaseSign::Negative => -self.base_magnitude,
        }
    }

    pub fn least_digit(&self) -> i64 {
        self.d
    }

    pub fn digits(&self) -> RangeInclusive<i64> {
        self.d..=self.d + self.base_magnitude - 1
    }

    /// Digit-set parameter `l`: `d/(b−1)` for a positive base and
    /// `(−d−b)/(b+1)` for a negative one. The carries of `n` summands live in
    /// `⌊(n−1)l⌋ ..= ⌈(n−1)(l+1)⌉`.
    pub fn l(&self) -> Rational {
        let b = self.base_magnitude;
        match self.base_sign {
            BaseSign::Positive => rat(self.d, b - 1),
            BaseSign::Negative => rat(-self.d - b, b + 1),
        }
    }

    pub fn representable_class(&self) -> Representable {
        if self.is_negative() {
            return Representable::AllIntegers;
        }
        if self.d == 0 {
            Representable::NonNegatives
        } else if self.d == 1 - self.base_magnitude {
            Representable::NonPositives
        } else {
            Representable::AllIntegers
        }
    }

    pub fn is_representable(&self, x: &BigInt) -> bool {
        match self.representable_class() {
            Representable::AllIntegers => true,
            Representable::NonNegatives => !x.is_negative(),
            Representable::NonPositives => !x.is_positive(),
        }
    }

    /// The digit of `D` congruent to `x` modulo `b`.
    pub fn digit_for(&self, x: &BigInt) -> i64 {
        let b = self.base_magnitude;
        let r = (x - self.d).mod_floor(&BigInt::from(b));
        self.d + r.to_i64().expect("residue below the base fits in i64")
    }

    /// Greedy expansion: take the digit congruent to `x` mod `b`, divide the
    /// remainder by the signed base, repeat until 0.
    pub fn expand(&self, x: &BigInt) -> Result<DigitString> {
        if !self.is_representable(x) {
            return Err(Error::Unrepresentable { value: x.to_string() });
        }
        if x.is_zero() {
            return Ok(DigitString { digits: vec![0] });
        }
        let cap = 64 + digit_count(x, self.base_magnitude);
        let signed = BigInt::from(self.signed_base());
        let mut rest = x.clone();
        let mut digits = Vec::new();
        while !rest.is_zero() {
            if digits.len() >= cap {
                return Err(Error::Internal(format!(
                    "expansion of {x} did not terminate within {cap} digits"
                )));
            }
            let digit = self.digit_for(&rest);
            rest = (rest - digit) / &signed;
            digits.push(digit);
        }
        Ok(DigitString { digits })
    }

    /// Horner evaluation with the signed base.
    pub fn evaluate(&self, s: &DigitString) -> Result<BigInt> {
        let range = self.digits();
        if let Some(bad) = s.digits.iter().find(|x| !range.contains(x)) {
            return Err(Error::InvalidArgument(format!(
                "digit {bad} is outside {{{}, …, {}}}",
                range.start(),
                range.end()
            )));
        }
        let base = BigInt::from(self.signed_base());
        Ok(s.digits
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, &x| acc * &base + x))
    }
}

impl fmt::Display for NumerationSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}, {{{}, …, {}}})",
            self.signed_base(),
            self.d,
            self.d + self.base_magnitude - 1
        )
    }
}

/// Number of base-`b` digits of `|x|`, i.e. `⌈log_b(|x|+1)⌉`.
fn digit_count(x: &BigInt, b: i64) -> usize {
    let b = BigInt::from(b);
    let mut rest = x.abs();
    let mut count = 0;
    while !rest.is_zero() {
        rest /= &b;
        count += 1;
    }
    count
}

/// Digits least-significant first; the most significant digit is nonzero
/// unless the string is the single digit 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DigitString {
    digits: Vec<i64>,
}

impl DigitString {
    pub fn new(digits: Vec<i64>) -> Result<Self> {
        match digits.last() {
            None => Err(Error::InvalidArgument("empty digit string".into())),
            Some(0) if digits.len() > 1 => {
                Err(Error::InvalidArgument("leading (most significant) digit is 0".into()))
            }
            _ => Ok(DigitString { digits }),
        }
    }

    pub fn digits(&self) -> &[i64] {
        &self.digits
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }
}

impl fmt::Display for DigitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.digits.iter().rev().map(i64::to_string).collect();
        write!(f, "({})", parts.join(" "))
    }
}
