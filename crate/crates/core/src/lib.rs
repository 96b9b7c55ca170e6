//! Carries Markov chains of numeration systems `(±b, {d, …, d+b−1})`, their
//! exact transition matrices, and the generalized Eulerian numbers that
//! diagonalize them.
//!
//! The linear algebra is generic over [`Scalar`]; everything the library
//! asserts is computed with [`Rational`]. The `f64` instantiations exist for
//! exploratory evaluation at irrational parameters and are not exact.

pub mod carries;
pub mod error;
pub mod eulerian;
pub mod exactmath;
pub mod numeration;
pub mod scalar;
pub mod simulate;
pub mod spectral;
pub mod uniformsum;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub use carries::{ChainSpec, DigitSet, StateSpace, TransitionMatrix};
pub use numeration::{BaseSign, DigitString, NumerationSystem, Representable};
pub use spectral::ChainReport;

/// Exact rational scalar.
pub type Rational = exactmath::Rational;
/// Dense matrix of exact rationals.
pub type ExactMatrix = exactmath::Matrix<Rational>;
/// Polynomial with exact rational coefficients.
pub type ExactPolynomial = exactmath::Polynomial<Rational>;
/// Floating-point matrix for non-exact exploration.
pub type FloatMatrix = exactmath::Matrix<f64>;
