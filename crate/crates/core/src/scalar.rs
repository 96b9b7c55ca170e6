use std::fmt::Debug;
use std::ops::Neg;

use num_traits::{FromPrimitive, Num};

/// Scalar bound shared by the matrix, polynomial, and Eulerian code.
///
/// Exactness comes from the instantiation: `Rational` gives exact identities,
/// `BigInt` is used for fraction-free elimination, and `f64` is the
/// non-exact evaluation path for irrational parameters.
pub trait Scalar: Clone + Debug + PartialEq + Num + Neg<Output = Self> + FromPrimitive {}

impl<T> Scalar for T where T: Clone + Debug + PartialEq + Num + Neg<Output = T> + FromPrimitive {}

/// `value` converted into `T`; panics only if `T` cannot hold small integers.
pub(crate) fn from_i64<T: Scalar>(value: i64) -> T {
    T::from_i64(value).expect("scalar type cannot represent a small integer")
}

pub(crate) fn from_usize<T: Scalar>(value: usize) -> T {
    T::from_usize(value).expect("scalar type cannot represent a small integer")
}

/// `base^exp` by repeated squaring.
pub(crate) fn pow<T: Scalar>(base: &T, mut exp: usize) -> T {
    let mut acc = T::one();
    let mut sq = base.clone();
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * sq.clone();
        }
        exp >>= 1;
        if exp > 0 {
            sq = sq.clone() * sq;
        }
    }
    acc
}
