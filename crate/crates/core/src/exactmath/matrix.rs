//! Dense row-major matrices over any [`Scalar`].

use std::fmt;
use std::ops::Index;

use num_bigint::BigInt;
use num_traits::One;

use super::poly::Polynomial;
use super::rational::{common_denominator, format_rational, Rational};
use crate::error::{Error, Result};
use crate::scalar::{from_usize, Scalar};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    entries: Vec<T>,
}

impl<T: Scalar> Matrix<T> {
    pub fn new(rows: usize, cols: usize, entries: Vec<T>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        Ok(Matrix { rows, cols, entries })
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Ok(Matrix {
            rows: nrows,
            cols: ncols,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        Matrix { rows, cols, entries }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |_, _| T::zero())
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { T::one() } else { T::zero() })
    }

    pub fn diagonal(diag: &[T]) -> Self {
        let n = diag.len();
        Self::from_fn(n, n, |i, j| if i == j { diag[i].clone() } else { T::zero() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[T] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> Option<&T> {
        if i < self.rows && j < self.cols {
            Some(&self.entries[i * self.cols + j])
        } else {
            None
        }
    }

    pub fn set(&mut self, i: usize, j: usize, value: T) {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of range");
        self.entries[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(f).collect(),
        }
    }

    pub fn mul(&self, other: &Matrix<T>) -> Result<Matrix<T>> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Vec::with_capacity(self.rows * other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = T::zero();
                for k in 0..self.cols {
                    let a = &self.entries[i * self.cols + k];
                    if a.is_zero() {
                        continue;
                    }
                    acc = acc + a.clone() * other.entries[k * other.cols + j].clone();
                }
                out.push(acc);
            }
        }
        Ok(Matrix {
            rows: self.rows,
            cols: other.cols,
            entries: out,
        })
    }

    pub fn sub(&self, other: &Matrix<T>) -> Result<Matrix<T>> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch("subtraction of unequal shapes".into()));
        }
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a.clone() - b.clone())
                .collect(),
        })
    }

    /// Row vector times matrix.
    pub fn left_mul_vec(&self, v: &[T]) -> Result<Vec<T>> {
        if v.len() != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} against {} rows",
                v.len(),
                self.rows
            )));
        }
        Ok((0..self.cols)
            .map(|j| {
                v.iter()
                    .enumerate()
                    .fold(T::zero(), |acc, (k, x)| acc + x.clone() * self[(k, j)].clone())
            })
            .collect())
    }

    pub fn row_sums(&self) -> Vec<T> {
        (0..self.rows)
            .map(|i| self.row(i).iter().cloned().fold(T::zero(), |a, b| a + b))
            .collect()
    }

    pub fn trace(&self) -> T {
        (0..self.rows.min(self.cols)).fold(T::zero(), |acc, i| acc + self[(i, i)].clone())
    }

    /// First entry (row-major) where `self` and `other` differ.
    pub fn first_difference(&self, other: &Matrix<T>) -> Option<(usize, usize)> {
        if self.rows != other.rows || self.cols != other.cols {
            return Some((0, 0));
        }
        self.entries
            .iter()
            .zip(&other.entries)
            .position(|(a, b)| a != b)
            .map(|k| (k / self.cols, k % self.cols))
    }

    fn require_square(&self) -> Result<()> {
        if self.is_square() {
            Ok(())
        } else {
            Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            })
        }
    }

    /// Determinant by Bareiss elimination.
    ///
    /// Every intermediate entry is a minor of the input, and each division is
    /// exact in any integral domain, so over `BigInt` no fractions appear.
    pub fn determinant(&self) -> Result<T> {
        self.require_square()?;
        let n = self.rows;
        if n == 0 {
            return Ok(T::one());
        }
        let mut a = self.entries.clone();
        let mut negate = false;
        let mut prev = T::one();
        for k in 0..n - 1 {
            if a[k * n + k].is_zero() {
                let Some(r) = (k + 1..n).find(|&r| !a[r * n + k].is_zero()) else {
                    return Ok(T::zero());
                };
                for j in 0..n {
                    a.swap(k * n + j, r * n + j);
                }
                negate = !negate;
            }
            let pivot = a[k * n + k].clone();
            for i in k + 1..n {
                let lead = a[i * n + k].clone();
                for j in k + 1..n {
                    let v = pivot.clone() * a[i * n + j].clone() - lead.clone() * a[k * n + j].clone();
                    a[i * n + j] = v / prev.clone();
                }
                a[i * n + k] = T::zero();
            }
            prev = pivot;
        }
        let det = a[n * n - 1].clone();
        Ok(if negate { -det } else { det })
    }

    /// Characteristic polynomial `det(xI - A)` by Faddeev–LeVerrier.
    pub fn char_poly(&self) -> Result<Polynomial<T>> {
        self.require_square()?;
        let n = self.rows;
        let mut coeffs = vec![T::zero(); n + 1];
        coeffs[n] = T::one();
        // m holds A·M_{k-1} + c_{n-k+1}·I at step k
        let mut m = Matrix::<T>::zeros(n, n);
        for k in 1..=n {
            let mut next = self.mul(&m)?;
            for i in 0..n {
                let v = next[(i, i)].clone() + coeffs[n - k + 1].clone();
                next.set(i, i, v);
            }
            let am = self.mul(&next)?;
            coeffs[n - k] = -(am.trace() / from_usize::<T>(k));
            m = next;
        }
        Ok(Polynomial::new(coeffs))
    }
}

impl Matrix<Rational> {
    /// Exact determinant with denominators cleared row by row, then Bareiss
    /// over the integers.
    pub fn determinant_fraction_free(&self) -> Result<Rational> {
        self.require_square()?;
        let mut scale = BigInt::one();
        let mut int_rows = Vec::with_capacity(self.entries.len());
        for i in 0..self.rows {
            let row = self.row(i);
            let den = common_denominator(row);
            for x in row {
                int_rows.push(x.numer() * (&den / x.denom()));
            }
            scale *= den;
        }
        let ints = Matrix::new(self.rows, self.cols, int_rows)?;
        Ok(Rational::new(ints.determinant()?, scale))
    }

    /// Rows of the matrix rendered as `num/den` strings.
    pub fn to_string_rows(&self) -> Vec<Vec<String>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(format_rational).collect())
            .collect()
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;

    fn index(&self, (i, j): (usize, usize)) -> &T {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of range");
        &self.entries[i * self.cols + j]
    }
}

impl<T: fmt::Debug> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<&[T]> = (0..self.rows)
            .map(|i| &self.entries[i * self.cols..(i + 1) * self.cols])
            .collect();
        f.debug_struct("Matrix")
            .field("rows", &self.rows)
            .field("cols", &self.cols)
            .field("entries", &rows)
            .finish()
    }
}
