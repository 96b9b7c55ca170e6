//! Left eigenvectors of the carries matrix and exact verification of the
//! diagonalization `V·P = diag(1, λ, …, λ^{m−1})·V` with `λ = 1/b` or
//! `λ = −1/b`.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::carries::{transition_matrix, ChainSpec, TransitionMatrix};
use crate::error::{Error, Result};
use crate::eulerian::{stationary, v_closed};
use crate::exactmath::rational::{int, rat, serde_rational, Rational};
use crate::exactmath::{Matrix, Polynomial};
use crate::scalar::pow;
use crate::{ExactMatrix, ExactPolynomial};

/// `m × m` matrix of `v_{i,j}(n; p)`.
pub fn eigen_matrix(n: usize, p: &Rational, m: usize) -> Result<ExactMatrix> {
    if m > n + 1 {
        return Err(Error::InvalidArgument(format!(
            "eigenvector matrix of size {m} needs m <= n + 1 = {}",
            n + 1
        )));
    }
    let mut entries = Vec::with_capacity(m * m);
    for i in 0..m {
        for j in 0..m {
            entries.push(v_closed(n, p, i, j as i64)?);
        }
    }
    Matrix::new(m, m, entries)
}

/// Predicted eigenvalues `(1, λ, λ², …)` with `λ = 1/(signed base)`.
pub fn predicted_spectrum(spec: &ChainSpec) -> Vec<Rational> {
    let m = spec.state_space().m();
    let lambda = rat(1, spec.system().signed_base());
    (0..m).map(|i| pow(&lambda, i)).collect()
}

/// First entry where two sides of an identity disagree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mismatch {
    pub row: usize,
    pub col: usize,
    #[serde(with = "serde_rational")]
    pub expected: Rational,
    #[serde(with = "serde_rational")]
    pub actual: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub mismatch: Option<Mismatch>,
}

impl Verdict {
    fn pass() -> Self {
        Verdict {
            passed: true,
            mismatch: None,
        }
    }

    fn from_matrices(expected: &ExactMatrix, actual: &ExactMatrix) -> Self {
        match expected.first_difference(actual) {
            None => Self::pass(),
            Some((row, col)) => Verdict {
                passed: false,
                mismatch: Some(Mismatch {
                    row,
                    col,
                    expected: expected.get(row, col).cloned().unwrap_or_else(Rational::zero),
                    actual: actual.get(row, col).cloned().unwrap_or_else(Rational::zero),
                }),
            },
        }
    }

    fn from_vectors(expected: &[Rational], actual: &[Rational]) -> Self {
        match expected.iter().zip(actual).position(|(a, b)| a != b) {
            None if expected.len() == actual.len() => Self::pass(),
            found => {
                let col = found.unwrap_or(expected.len().min(actual.len()));
                Verdict {
                    passed: false,
                    mismatch: Some(Mismatch {
                        row: 0,
                        col,
                        expected: expected.get(col).cloned().unwrap_or_else(Rational::zero),
                        actual: actual.get(col).cloned().unwrap_or_else(Rational::zero),
                    }),
                }
            }
        }
    }

    fn from_scalar(expected: Rational, actual: Rational) -> Self {
        Self::from_vectors(&[expected], &[actual])
    }
}

pub const CHECK_DIAGONALIZATION: &str = "diagonalization";
pub const CHECK_NONSINGULAR: &str = "eigenvectors_nonsingular";
pub const CHECK_STATIONARY: &str = "stationary_invariant";
pub const CHECK_MASS: &str = "stationary_mass";
pub const CHECK_ROW_SUMS: &str = "row_stochastic";

/// Everything computed and checked for one `(system, n)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainReport {
    pub spec: ChainSpec,
    pub states: Vec<i64>,
    #[serde(with = "serde_rational")]
    pub p: Rational,
    #[serde(with = "serde_rational::nested")]
    pub transition: Vec<Vec<Rational>>,
    #[serde(with = "serde_rational::nested")]
    pub eigenvectors: Vec<Vec<Rational>>,
    #[serde(with = "serde_rational::vec")]
    pub spectrum: Vec<Rational>,
    #[serde(with = "serde_rational::vec")]
    pub stationary: Vec<Rational>,
    pub verdicts: BTreeMap<String, Verdict>,
}

impl ChainReport {
    pub fn verified(&self) -> bool {
        self.verdicts.values().all(|v| v.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = (&String, &Verdict)> {
        self.verdicts.iter().filter(|(_, v)| !v.passed)
    }
}

/// Checks the diagonalization claims against the closed-form matrix.
pub fn verify_diagonalization(spec: &ChainSpec) -> Result<ChainReport> {
    verify_transition_matrix(spec, &transition_matrix(spec))
}

/// Checks the diagonalization claims against a supplied matrix, e.g. one read
/// back from disk.
pub fn verify_transition_matrix(spec: &ChainSpec, tm: &TransitionMatrix) -> Result<ChainReport> {
    let p = spec.p();
    let expected_states = spec.state_space().states();
    if tm.states != expected_states || !tm.matrix.is_square() || tm.matrix.rows() != tm.states.len() {
        return Err(Error::DimensionMismatch(format!(
            "matrix over states {:?} does not fit state space {:?}",
            tm.states, expected_states
        )));
    }
    let m = expected_states.len();
    let n = spec.n();
    let pm = &tm.matrix;
    let v = eigen_matrix(n, &p, m)?;
    let spectrum = predicted_spectrum(spec);
    let pi = stationary(n, &p)?;
    let mut verdicts = BTreeMap::new();

    let lhs = v.mul(pm)?;
    let rhs = Matrix::diagonal(&spectrum).mul(&v)?;
    verdicts.insert(CHECK_DIAGONALIZATION.to_string(), Verdict::from_matrices(&rhs, &lhs));

    let det = v.determinant()?;
    verdicts.insert(
        CHECK_NONSINGULAR.to_string(),
        if det.is_zero() {
            Verdict {
                passed: false,
                mismatch: Some(Mismatch {
                    row: 0,
                    col: 0,
                    expected: Rational::one(),
                    actual: det,
                }),
            }
        } else {
            Verdict::pass()
        },
    );

    let moved = pm.left_mul_vec(&pi)?;
    verdicts.insert(CHECK_STATIONARY.to_string(), Verdict::from_vectors(&pi, &moved));

    let mass = pi.iter().fold(Rational::zero(), |a, b| a + b);
    verdicts.insert(CHECK_MASS.to_string(), Verdict::from_scalar(int(1), mass));

    let sums = pm.row_sums();
    let mut rows_ok = Verdict::from_vectors(&vec![int(1); m], &sums);
    if rows_ok.passed {
        if let Some(k) = pm.entries().iter().position(|x| x.is_negative() || *x > int(1)) {
            rows_ok = Verdict {
                passed: false,
                mismatch: Some(Mismatch {
                    row: k / m,
                    col: k % m,
                    expected: int(0),
                    actual: pm.entries()[k].clone(),
                }),
            };
        }
    }
    verdicts.insert(CHECK_ROW_SUMS.to_string(), rows_ok);

    Ok(ChainReport {
        spec: *spec,
        states: tm.states.clone(),
        p,
        transition: pm.to_rows(),
        eigenvectors: v.to_rows(),
        spectrum,
        stationary: pi,
        verdicts,
    })
}

/// Exact test of `P₁P₂ = P₂P₁` for two chains with the same `n`, `p`, and `m`.
pub fn commutes(a: &ChainSpec, b: &ChainSpec) -> Result<bool> {
    let (ma, mb) = (a.state_space().m(), b.state_space().m());
    if a.n() != b.n() || a.p() != b.p() || ma != mb {
        return Err(Error::InvalidArgument(format!(
            "chains differ in (n, p, m): ({}, {}, {ma}) vs ({}, {}, {mb})",
            a.n(),
            a.p(),
            b.n(),
            b.p()
        )));
    }
    let pa = transition_matrix(a).matrix;
    let pb = transition_matrix(b).matrix;
    Ok(pa.mul(&pb)? == pb.mul(&pa)?)
}

/// For each candidate `λ`, whether `P − λI` is singular.
pub fn spectrum_probe(pm: &ExactMatrix, candidates: &[Rational]) -> Result<Vec<(Rational, bool)>> {
    if !pm.is_square() {
        return Err(Error::NotSquare {
            rows: pm.rows(),
            cols: pm.cols(),
        });
    }
    candidates
        .iter()
        .map(|lambda| {
            let shifted = pm.sub(&Matrix::diagonal(&vec![lambda.clone(); pm.rows()]))?;
            Ok((lambda.clone(), shifted.determinant_fraction_free()?.is_zero()))
        })
        .collect()
}

/// Divides `det(xI − P)` by `∏ (x − λ)` over the given eigenvalues.
/// Returns the quotient, or an error if some factor does not divide.
pub fn deflate_char_poly(pm: &ExactMatrix, eigenvalues: &[Rational]) -> Result<ExactPolynomial> {
    let mut poly = pm.char_poly()?;
    for lambda in eigenvalues {
        let (q, r) = poly.div_rem(&Polynomial::linear(lambda.clone()))?;
        if !r.is_zero() {
            return Err(Error::InvalidArgument(format!(
                "{lambda} is not a root of the characteristic polynomial"
            )));
        }
        poly = q;
    }
    Ok(poly)
}
