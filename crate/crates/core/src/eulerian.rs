//! Generalized Eulerian numbers.
//!
//! `v_{i,j}(n; p) = Σ_{r=0}^{j} (−1)^r C(n+1, r) (p(j−r) + 1)^{n−i}` for
//! `0 ≤ i ≤ n`, `0 ≤ j ≤ n+1`; the top row `E_p(n, j) = v_{0,j}` gives the
//! Eulerian numbers at `p = 1` and the MacMahon numbers at `p = 2`.

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactmath::rational::{binomial, factorial, format_rational, int, serde_rational, Rational};
use crate::scalar::{from_i64, pow, Scalar};

/// Closed-form `v_{i,j}(n; p)`. `j = −1` is defined as 0.
pub fn v_closed<T: Scalar>(n: usize, p: &T, i: usize, j: i64) -> Result<T> {
    if i > n || j < -1 || j > n as i64 + 1 {
        return Err(Error::IndexOutOfRange(format!(
            "v_{{{i},{j}}}({n}) needs 0 <= i <= {n} and -1 <= j <= {}",
            n + 1
        )));
    }
    if j < 0 {
        return Ok(T::zero());
    }
    let mut acc = T::zero();
    for r in 0..=j {
        let c = from_i64::<T>(
            i64::try_from(binomial(n as u64 + 1, r as u64)).expect("binomial fits in i64"),
        );
        let base = p.clone() * from_i64::<T>(j - r) + T::one();
        let term = c * pow(&base, n - i);
        acc = if r % 2 == 0 { acc + term } else { acc - term };
    }
    Ok(acc)
}

/// Top-row value `E_p(n, k)`; zero outside `0..=n`.
pub fn eulerian_number(n: usize, p: &Rational, k: i64) -> Rational {
    if k < 0 || k > n as i64 {
        return Rational::zero();
    }
    v_closed(n, p, 0, k).expect("index checked")
}

/// The full `(n+1) × (n+2)` array of `v_{i,j}(n; p)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EulerianArray {
    pub n: usize,
    #[serde(with = "serde_rational")]
    pub p: Rational,
    #[serde(with = "serde_rational::nested")]
    pub values: Vec<Vec<Rational>>,
}

impl EulerianArray {
    pub fn new(n: usize, p: &Rational) -> Self {
        let values = (0..=n)
            .map(|i| {
                (0..=n as i64 + 1)
                    .map(|j| v_closed(n, p, i, j).expect("indices in range"))
                    .collect()
            })
            .collect();
        EulerianArray { n, p: p.clone(), values }
    }

    /// `v_{i,j}`, with the `j = −1` column reading as 0.
    pub fn get(&self, i: usize, j: i64) -> Rational {
        if j < 0 {
            Rational::zero()
        } else {
            self.values[i][j as usize].clone()
        }
    }
}

/// Rows `0..=n_max` of `E_p(n, k)`, row `n` holding `k = 0..=n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EulerianTriangle {
    #[serde(with = "serde_rational")]
    pub p: Rational,
    #[serde(with = "serde_rational::nested")]
    pub rows: Vec<Vec<Rational>>,
}

impl EulerianTriangle {
    pub fn row(&self, n: usize) -> Option<&[Rational]> {
        self.rows.get(n).map(Vec::as_slice)
    }

    pub fn row_sums(&self) -> Vec<Rational> {
        self.rows
            .iter()
            .map(|r| r.iter().fold(Rational::zero(), |a, b| a + b))
            .collect()
    }
}

/// Builds the triangle from `E_p(0,0) = 1` with
/// `E_p(n,k) = (pk + 1)·E_p(n−1,k) + (p(n+1−k) − 1)·E_p(n−1,k−1)`.
pub fn triangle_recurrence(n_max: usize, p: &Rational) -> EulerianTriangle {
    let mut rows: Vec<Vec<Rational>> = vec![vec![Rational::one()]];
    for n in 1..=n_max {
        let prev = &rows[n - 1];
        let at = |k: i64| -> Rational {
            if k < 0 || k as usize >= prev.len() {
                Rational::zero()
            } else {
                prev[k as usize].clone()
            }
        };
        let row = (0..=n as i64)
            .map(|k| {
                (p * int(k) + int(1)) * at(k) + (p * int(n as i64 + 1 - k) - int(1)) * at(k - 1)
            })
            .collect();
        rows.push(row);
    }
    EulerianTriangle { p: p.clone(), rows }
}

/// One failed identity: where, and both sides.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub location: String,
    #[serde(with = "serde_rational")]
    pub expected: Rational,
    #[serde(with = "serde_rational")]
    pub actual: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub identity: String,
    pub checked: usize,
    pub violations: Vec<Violation>,
}

impl VerificationReport {
    fn new(identity: &str) -> Self {
        VerificationReport {
            identity: identity.to_string(),
            checked: 0,
            violations: Vec::new(),
        }
    }

    fn check(&mut self, location: impl FnOnce() -> String, expected: Rational, actual: Rational) {
        self.checked += 1;
        if expected != actual {
            self.violations.push(Violation {
                location: location(),
                expected,
                actual,
            });
        }
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks `v_{i,j}(n) = [p(n+1−j) − 1]·v_{i,j−1}(n−1) + (pj + 1)·v_{i,j}(n−1)`
/// for `0 ≤ i ≤ n−1`, `0 ≤ j ≤ n`, plus the vanishing last column `v_{i,n+1}(n) = 0`.
pub fn array_recurrence_check(n: usize, p: &Rational) -> Result<VerificationReport> {
    if n == 0 {
        return Err(Error::InvalidArgument("recurrence needs n >= 1".into()));
    }
    let cur = EulerianArray::new(n, p);
    let prev = EulerianArray::new(n - 1, p);
    let mut report = VerificationReport::new("array recurrence");
    for i in 0..n {
        for j in 0..=n as i64 {
            let expected = (p * int(n as i64 + 1 - j) - int(1)) * prev.get(i, j - 1)
                + (p * int(j) + int(1)) * prev.get(i, j);
            report.check(|| format!("v[{i},{j}]({n})"), expected, cur.get(i, j));
        }
    }
    for i in 0..=n {
        report.check(|| format!("v[{i},{}]({n})", n + 1), Rational::zero(), cur.get(i, n as i64 + 1));
    }
    Ok(report)
}

/// `Σ_j v_{i,j}(n)` over `j = 0..=n`, for each `i`.
pub fn row_sums(n: usize, p: &Rational) -> Vec<Rational> {
    let array = EulerianArray::new(n, p);
    array
        .values
        .iter()
        .map(|row| row[..=n].iter().fold(Rational::zero(), |a, b| a + b))
        .collect()
}

/// Expected row sums: `pⁿ·n!` for `i = 0`, zero otherwise.
pub fn expected_row_sums(n: usize, p: &Rational) -> Vec<Rational> {
    (0..=n)
        .map(|i| {
            if i == 0 {
                pow(p, n) * Rational::from_integer(factorial(n as u64))
            } else {
                Rational::zero()
            }
        })
        .collect()
}

/// `p* = p/(p−1)`, the conjugate with `1/p + 1/p* = 1`.
pub fn conjugate(p: &Rational) -> Result<Rational> {
    if *p <= Rational::one() {
        return Err(Error::InvalidArgument(format!(
            "conjugate needs p > 1, got {}",
            format_rational(p)
        )));
    }
    Ok(p / (p - Rational::one()))
}

/// `v^{(p*)}_{i,n−j}(n) = (−1)^i (p*/p)^{n−i} v^{(p)}_{i,j}(n)` for `0 ≤ j ≤ n`.
pub fn dual_symmetry_check(n: usize, p: &Rational) -> Result<VerificationReport> {
    let q = conjugate(p)?;
    let ap = EulerianArray::new(n, p);
    let aq = EulerianArray::new(n, &q);
    let ratio = &q / p;
    let mut report = VerificationReport::new("conjugate symmetry");
    for i in 0..=n {
        let sign = if i % 2 == 0 { int(1) } else { int(-1) };
        let factor = sign * pow(&ratio, n - i);
        for j in 0..=n as i64 {
            report.check(
                || format!("v*[{i},{}]({n})", n as i64 - j),
                &factor * ap.get(i, j),
                aq.get(i, n as i64 - j),
            );
        }
    }
    Ok(report)
}

/// `v^{(1)}_{i,n−1−j}(n) = (−1)^i v^{(1)}_{i,j}(n)` for `0 ≤ j ≤ n−1` and
/// `0 ≤ i ≤ n−1`, the rows used when `p = 1`. Row `i = n` is the alternating
/// binomial row and does not reflect this way.
pub fn unit_symmetry_check(n: usize) -> VerificationReport {
    let a = EulerianArray::new(n, &int(1));
    let mut report = VerificationReport::new("p = 1 symmetry");
    for i in 0..n {
        let sign = if i % 2 == 0 { int(1) } else { int(-1) };
        for j in 0..n as i64 {
            report.check(
                || format!("v[{i},{}]({n})", n as i64 - 1 - j),
                &sign * a.get(i, j),
                a.get(i, n as i64 - 1 - j),
            );
        }
    }
    report
}

/// Dispatches to [`unit_symmetry_check`] at `p = 1` and
/// [`dual_symmetry_check`] for `p > 1`.
pub fn symmetry_check(n: usize, p: &Rational) -> Result<VerificationReport> {
    if p.is_one() {
        Ok(unit_symmetry_check(n))
    } else {
        dual_symmetry_check(n, p)
    }
}

/// State-space size for `n` summands and parameter `p`.
pub fn state_count(n: usize, p: &Rational) -> usize {
    if p.is_one() {
        n
    } else {
        n + 1
    }
}

/// Stationary distribution `E_p(n, 0..m) / (pⁿ n!)`.
pub fn stationary(n: usize, p: &Rational) -> Result<Vec<Rational>> {
    if n == 0 {
        return Err(Error::InvalidArgument("stationary distribution needs n >= 1".into()));
    }
    if *p < Rational::one() || p.is_negative() {
        return Err(Error::InvalidArgument(format!("p must be at least 1, got {p}")));
    }
    let total = pow(p, n) * Rational::from_integer(factorial(n as u64));
    Ok((0..state_count(n, p) as i64)
        .map(|k| eulerian_number(n, p, k) / &total)
        .collect())
}
