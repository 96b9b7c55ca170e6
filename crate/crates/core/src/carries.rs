//! The `n`-carry process: state spaces, the parameter `p`, and exact
//! transition matrices.
//!
//! Two closed forms are provided for consecutive digit sets: the shifted
//! form in terms of `p` ([`transition_matrix`]) and the absolute-carry count
//! ([`transition_probability`]). Independently of both, the brute-force
//! oracle ([`transition_matrix_bruteforce`]) runs the carry recursion itself
//! and accepts any digit set with distinct residues.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactmath::rational::{binomial, binomial_counting, frac, int, is_integer, to_i64, Rational};
use crate::exactmath::Matrix;
use crate::numeration::NumerationSystem;
use crate::ExactMatrix;

/// A numeration system together with the number of summands.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ChainSpec {
    sys: NumerationSystem,
    n: usize,
}

/// Carry values `s..=t`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StateSpace {
    pub s: i64,
    pub t: i64,
}

impl StateSpace {
    pub fn m(&self) -> usize {
        (self.t - self.s + 1) as usize
    }

    pub fn states(&self) -> Vec<i64> {
        (self.s..=self.t).collect()
    }

    pub fn contains(&self, c: i64) -> bool {
        (self.s..=self.t).contains(&c)
    }
}

impl ChainSpec {
    pub fn new(sys: NumerationSystem, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("number of summands must be at least 1".into()));
        }
        Ok(ChainSpec { sys, n })
    }

    pub fn system(&self) -> &NumerationSystem {
        &self.sys
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `(n−1)·l`, which decides both the state space and `p`.
    fn offset(&self) -> Rational {
        int(self.n as i64 - 1) * self.sys.l()
    }

    pub fn state_space(&self) -> StateSpace {
        let n1 = int(self.n as i64 - 1);
        let lower = self.offset().floor();
        let upper = (n1 * (self.sys.l() + int(1))).ceil();
        StateSpace {
            s: to_i64(&lower).expect("carry bound fits in i64"),
            t: to_i64(&upper).expect("carry bound fits in i64"),
        }
    }

    /// `p = 1/{(n−1)(−l)}` when `(n−1)l` is fractional, else 1.
    ///
    /// The same expression is used for both base signs (with the sign-specific
    /// `l`); for the negative base this is what makes the shifted closed form
    /// agree with the carry recursion.
    pub fn p(&self) -> Rational {
        let x = self.offset();
        if is_integer(&x) {
            int(1)
        } else {
            Rational::one() / frac(&-x)
        }
    }

    pub fn digit_set(&self) -> DigitSet {
        DigitSet::new(self.sys.digits().collect(), self.sys.signed_base())
            .expect("consecutive digit sets are complete residue systems")
    }
}

/// A transition matrix with the carry value of each row/column attached.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransitionMatrix {
    pub states: Vec<i64>,
    pub matrix: ExactMatrix,
}

impl TransitionMatrix {
    pub fn m(&self) -> usize {
        self.states.len()
    }

    pub fn index_of(&self, carry: i64) -> Option<usize> {
        self.states.iter().position(|&c| c == carry)
    }

    /// Rows sum to exactly 1 and every entry lies in `[0, 1]`.
    pub fn is_row_stochastic(&self) -> bool {
        let one = Rational::one();
        self.matrix.row_sums().iter().all(|s| *s == one)
            && self
                .matrix
                .entries()
                .iter()
                .all(|x| !x.is_negative() && *x <= one)
    }
}

/// Shifted transition matrix from the alternating-binomial closed form in `p`.
pub fn transition_matrix(spec: &ChainSpec) -> TransitionMatrix {
    let space = spec.state_space();
    let m = space.m();
    let n = spec.n as i64;
    let b = spec.sys.base_magnitude();
    let p = spec.p();
    let scale = BigInt::from(b).pow(spec.n as u32);
    let shift = |numerator: i64| -> i64 {
        to_i64(&(int(numerator) / &p)).expect("(b∓1)/p is an integer for admissible p")
    };
    let (q, negative) = if spec.sys.is_negative() {
        (shift(b + 1), true)
    } else {
        (shift(b - 1), false)
    };
    let matrix = Matrix::from_fn(m, m, |i, j| {
        let (i, j) = (i as i64, j as i64);
        let terms = if negative { n - j } else { j };
        let mut acc = BigInt::zero();
        for r in 0..=terms {
            let top = if negative {
                n + b * (n + 1 - j - r) - q - i
            } else {
                n + b * (j - r) + q - i
            };
            let term = binomial(spec.n as u64 + 1, r as u64) * binomial_counting(top, spec.n as u64);
            if r % 2 == 0 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        Rational::new(acc, scale.clone())
    });
    TransitionMatrix {
        states: space.states(),
        matrix,
    }
}

/// Number of `(x₁,…,x_n, a) ∈ D^{n+1}` with `x₁+…+x_n + a = R + (n+1)d`,
/// i.e. the coefficient of `x^R` in `((1 − x^b)/(1 − x))^{n+1}`.
fn window_count(n: usize, b: i64, rest: i64) -> BigInt {
    if rest < 0 {
        return BigInt::zero();
    }
    let mut acc = BigInt::zero();
    let mut r = 0i64;
    while r <= n as i64 + 1 && rest - b * r >= 0 {
        let term = binomial(n as u64 + 1, r as u64) * binomial(n as u64 + (rest - b * r) as u64, n as u64);
        if r % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
        r += 1;
    }
    acc
}

/// `Pr(C_{k+1} = to | C_k = from)` for absolute carry values, from the
/// unshifted closed form.
pub fn transition_probability(spec: &ChainSpec, from: i64, to: i64) -> Rational {
    let b = spec.sys.base_magnitude();
    let d = spec.sys.least_digit();
    let n = spec.n as i64;
    let rest = if spec.sys.is_negative() {
        -b * (to - 1) - from - 1 + (1 - n) * d
    } else {
        b * (to + 1) - 1 - from - d * (n - 1)
    };
    Rational::new(window_count(spec.n, b, rest), BigInt::from(b).pow(spec.n as u32))
}

/// Transition matrix over the closed-form state space, from absolute carries.
pub fn transition_matrix_absolute(spec: &ChainSpec) -> TransitionMatrix {
    let states = spec.state_space().states();
    let m = states.len();
    let matrix = Matrix::from_fn(m, m, |i, j| transition_probability(spec, states[i], states[j]));
    TransitionMatrix { states, matrix }
}

/// A finite digit set containing 0 with pairwise distinct residues modulo `|base|`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DigitSet {
    digits: Vec<i64>,
    base: i64,
}

impl DigitSet {
    pub fn new(mut digits: Vec<i64>, base: i64) -> Result<Self> {
        if base.abs() < 2 {
            return Err(Error::InvalidDigitSet(format!("base magnitude must be at least 2, got {base}")));
        }
        digits.sort_unstable();
        if digits.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidDigitSet("repeated digit".into()));
        }
        if !digits.contains(&0) {
            return Err(Error::InvalidDigitSet("digit set must contain 0".into()));
        }
        let modulus = base.abs();
        let mut seen = BTreeMap::new();
        for &x in &digits {
            if let Some(prev) = seen.insert(x.mod_floor(&modulus), x) {
                return Err(Error::InvalidDigitSet(format!(
                    "digits {prev} and {x} are congruent modulo {modulus}"
                )));
            }
        }
        Ok(DigitSet { digits, base })
    }

    pub fn digits(&self) -> &[i64] {
        &self.digits
    }

    pub fn base(&self) -> i64 {
        self.base
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    pub fn max_abs(&self) -> i64 {
        self.digits.iter().map(|x| x.abs()).max().unwrap_or(0)
    }

    /// Whether the digits are `d, d+1, …, d+|base|−1`.
    pub fn is_consecutive(&self) -> bool {
        self.digits.len() as i64 == self.base.abs()
            && self.digits.windows(2).all(|w| w[1] == w[0] + 1)
    }

    fn residue_table(&self) -> HashMap<i64, i64> {
        let modulus = self.base.abs();
        self.digits.iter().map(|&x| (x.mod_floor(&modulus), x)).collect()
    }

    /// One carry step: the output digit is the unique digit congruent to
    /// `total` and the new carry is `(total − a)/base`.
    pub fn next_carry(&self, total: i64) -> Result<i64> {
        let modulus = self.base.abs();
        let r = total.mod_floor(&modulus);
        let a = self
            .digits
            .iter()
            .find(|&&x| x.mod_floor(&modulus) == r)
            .ok_or_else(|| Error::InvalidDigitSet(format!("no digit congruent to {r} mod {modulus}")))?;
        Ok((total - a) / self.base)
    }
}

/// Upper bound on the number of carry states explored by the closure.
fn state_cap(digits: &DigitSet, n: usize) -> usize {
    10 * (n * digits.max_abs() as usize + digits.base().unsigned_abs() as usize)
}

/// Transition matrix of the carry recursion by direct counting.
///
/// The distribution of `x₁+…+x_n` is built by `n` convolutions of the digit
/// indicator; each sum value fixes the output digit and hence the next carry.
/// States are the carries reachable from 0, in ascending order.
pub fn transition_matrix_bruteforce(digits: &DigitSet, n: usize) -> Result<TransitionMatrix> {
    if n == 0 {
        return Err(Error::InvalidArgument("number of summands must be at least 1".into()));
    }
    let lo = *digits.digits.first().expect("digit sets contain 0");
    let hi = *digits.digits.last().expect("digit sets contain 0");
    let width = (hi - lo) as usize;
    // sums[k] counts tuples with x₁+…+x_n = n·lo + k
    let mut sums = vec![BigInt::one()];
    for _ in 0..n {
        let mut next = vec![BigInt::zero(); sums.len() + width];
        for (k, c) in sums.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for &x in &digits.digits {
                next[k + (x - lo) as usize] += c;
            }
        }
        sums = next;
    }
    let base_sum = n as i64 * lo;
    let residues = digits.residue_table();
    let modulus = digits.base.abs();
    let cap = state_cap(digits, n);

    let mut rows: BTreeMap<i64, BTreeMap<i64, BigInt>> = BTreeMap::new();
    let mut queue = VecDeque::from([0i64]);
    let mut seen = BTreeSet::from([0i64]);
    while let Some(c) = queue.pop_front() {
        let mut row: BTreeMap<i64, BigInt> = BTreeMap::new();
        for (k, count) in sums.iter().enumerate() {
            if count.is_zero() {
                continue;
            }
            let total = c + base_sum + k as i64;
            let a = residues.get(&total.mod_floor(&modulus)).ok_or_else(|| {
                Error::InvalidDigitSet(format!(
                    "no digit congruent to {} mod {modulus}",
                    total.mod_floor(&modulus)
                ))
            })?;
            let next = (total - a) / digits.base;
            *row.entry(next).or_insert_with(BigInt::zero) += count;
            if seen.insert(next) {
                if seen.len() > cap {
                    return Err(Error::Internal(format!(
                        "carry closure exceeded {cap} states"
                    )));
                }
                queue.push_back(next);
            }
        }
        rows.insert(c, row);
    }
    Ok(assemble(seen, &rows, BigInt::from(digits.len()).pow(n as u32)))
}

fn assemble(
    seen: BTreeSet<i64>,
    rows: &BTreeMap<i64, BTreeMap<i64, BigInt>>,
    total: BigInt,
) -> TransitionMatrix {
    let states: Vec<i64> = seen.into_iter().collect();
    let m = states.len();
    let matrix = Matrix::from_fn(m, m, |i, j| {
        let count = rows[&states[i]].get(&states[j]).cloned().unwrap_or_else(BigInt::zero);
        Rational::new(count, total.clone())
    });
    TransitionMatrix { states, matrix }
}

/// Limit on `|D|^n` for [`transition_matrix_enumerated`].
pub const ENUMERATION_LIMIT: u64 = 1 << 20;

/// Second-tier oracle: walks every digit tuple and applies the carry step.
pub fn transition_matrix_enumerated(digits: &DigitSet, n: usize) -> Result<TransitionMatrix> {
    let k = digits.len() as u64;
    let tuples = k
        .checked_pow(n as u32)
        .filter(|&t| t <= ENUMERATION_LIMIT)
        .ok_or_else(|| Error::InvalidArgument(format!("{k}^{n} tuples exceed the enumeration limit")))?;
    let cap = state_cap(digits, n);
    let mut rows: BTreeMap<i64, BTreeMap<i64, BigInt>> = BTreeMap::new();
    let mut queue = VecDeque::from([0i64]);
    let mut seen = BTreeSet::from([0i64]);
    while let Some(c) = queue.pop_front() {
        let mut row: BTreeMap<i64, BigInt> = BTreeMap::new();
        let mut idx = vec![0usize; n];
        for _ in 0..tuples {
            let total = c + idx.iter().map(|&i| digits.digits[i]).sum::<i64>();
            let next = digits.next_carry(total)?;
            *row.entry(next).or_insert_with(BigInt::zero) += 1;
            if seen.insert(next) {
                if seen.len() > cap {
                    return Err(Error::Internal(format!("carry closure exceeded {cap} states")));
                }
                queue.push_back(next);
            }
            for slot in idx.iter_mut() {
                *slot += 1;
                if *slot < digits.len() {
                    break;
                }
                *slot = 0;
            }
        }
        rows.insert(c, row);
    }
    Ok(assemble(seen, &rows, BigInt::from(tuples)))
}

/// A positive-base system whose `n`-carry process has parameter `p = K/L`:
/// `b = (n−1)K + 1`, `d = −L`. For `p = 1` this returns the classical
/// digit set `{0, …, n−1}` in base `n`.
pub fn find_system(n: usize, p: &Rational) -> Result<NumerationSystem> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "a system with prescribed p needs at least 2 summands, got {n}"
        )));
    }
    if *p < Rational::one() {
        return Err(Error::InvalidArgument(format!("p must be at least 1, got {p}")));
    }
    let k = p.numer().to_i64();
    let l = p.denom().to_i64();
    let (Some(k), Some(l)) = (k, l) else {
        return Err(Error::InvalidArgument(format!("p = {p} is too large")));
    };
    let sys = if p.is_one() {
        NumerationSystem::positive(n as i64, 0)?
    } else {
        let b = (n as i64 - 1)
            .checked_mul(k)
            .and_then(|x| x.checked_add(1))
            .ok_or_else(|| Error::InvalidArgument(format!("base for p = {p} overflows")))?;
        NumerationSystem::positive(b, -l)?
    };
    let got = ChainSpec::new(sys, n)?.p();
    if got != *p {
        return Err(Error::Internal(format!("constructed {sys} has p = {got}, wanted {p}")));
    }
    Ok(sys)
}
