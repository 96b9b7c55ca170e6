//! Univariate polynomials with coefficients in ascending degree.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed};

use super::rational::{common_denominator, format_rational, Rational};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Canonical form: no trailing zero coefficients; the zero polynomial has none.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Polynomial<T> {
    coeffs: Vec<T>,
}

impl<T: Scalar> Polynomial<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    pub fn constant(c: T) -> Self {
        Self::new(vec![c])
    }

    /// The monic linear factor `x - root`.
    pub fn linear(root: T) -> Self {
        Self::new(vec![-root, T::one()])
    }

    pub fn from_roots(roots: &[T]) -> Self {
        roots
            .iter()
            .fold(Self::constant(T::one()), |acc, r| acc.mul(&Self::linear(r.clone())))
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&T> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &T) -> T {
        self.coeffs
            .iter()
            .rev()
            .fold(T::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    pub fn add(&self, other: &Self) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..len)
            .map(|i| {
                let a = self.coeffs.get(i).cloned().unwrap_or_else(T::zero);
                let b = other.coeffs.get(i).cloned().unwrap_or_else(T::zero);
                a + b
            })
            .collect();
        Self::new(coeffs)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-T::one()))
    }

    pub fn scale(&self, c: &T) -> Self {
        Self::new(self.coeffs.iter().map(|x| x.clone() * c.clone()).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![T::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Self::new(out)
    }

    /// Long division over a field: `self = q·divisor + r` with `deg r < deg divisor`.
    pub fn div_rem(&self, divisor: &Self) -> Result<(Self, Self)> {
        let Some(dd) = divisor.degree() else {
            return Err(Error::DivisionByZero);
        };
        let lead = divisor.coeffs[dd].clone();
        let mut rem = self.coeffs.clone();
        let Some(nd) = self.degree() else {
            return Ok((Self::zero(), Self::zero()));
        };
        if nd < dd {
            return Ok((Self::zero(), self.clone()));
        }
        let mut quot = vec![T::zero(); nd - dd + 1];
        for k in (0..=nd - dd).rev() {
            let c = rem[k + dd].clone() / lead.clone();
            if c.is_zero() {
                continue;
            }
            for (j, dc) in divisor.coeffs.iter().enumerate() {
                rem[k + j] = rem[k + j].clone() - c.clone() * dc.clone();
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        Ok((Self::new(quot), Self::new(rem)))
    }
}

impl Polynomial<Rational> {
    /// Smallest positive integer multiple with integer coefficients, and the
    /// multiplier used. Sign is kept.
    pub fn clear_denominators(&self) -> (Polynomial<BigInt>, BigInt) {
        let den = common_denominator(&self.coeffs);
        let ints = self
            .coeffs
            .iter()
            .map(|c| c.numer() * (&den / c.denom()))
            .collect();
        (Polynomial::new(ints), den)
    }
}

fn write_terms<T>(
    f: &mut fmt::Formatter<'_>,
    coeffs: &[T],
    is_negative: impl Fn(&T) -> bool,
    magnitude: impl Fn(&T) -> (String, bool),
) -> fmt::Result {
    if coeffs.is_empty() {
        return write!(f, "0");
    }
    let mut first = true;
    for (deg, c) in coeffs.iter().enumerate().rev() {
        let (mag, unit) = magnitude(c);
        if mag == "0" {
            continue;
        }
        let neg = is_negative(c);
        if first {
            if neg {
                write!(f, "-")?;
            }
        } else {
            write!(f, " {} ", if neg { '-' } else { '+' })?;
        }
        first = false;
        let var = match deg {
            0 => String::new(),
            1 => "x".to_string(),
            _ => format!("x^{deg}"),
        };
        match (deg, unit) {
            (0, _) => write!(f, "{mag}")?,
            (_, true) => write!(f, "{var}")?,
            _ => write!(f, "{mag}{var}")?,
        }
    }
    Ok(())
}

impl fmt::Display for Polynomial<Rational> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, &self.coeffs, |c| c.is_negative(), |c| {
            let a = c.abs();
            let unit = a.is_one();
            let s = format_rational(&a);
            (if s.contains('/') && !unit { format!("({s})") } else { s }, unit)
        })
    }
}

impl fmt::Display for Polynomial<BigInt> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, &self.coeffs, |c| c.is_negative(), |c| {
            let a = c.abs();
            (a.to_string(), a.is_one())
        })
    }
}

impl<T: fmt::Debug> fmt::Debug for Polynomial<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("Polynomial").field(&self.coeffs).finish()
    }
}
