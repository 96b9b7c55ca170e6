//! Exact scalars, dense matrices, and polynomials.

pub mod matrix;
pub mod poly;
pub mod rational;

pub use matrix::Matrix;
pub use poly::Polynomial;
pub use rational::{format_rational, parse_rational, rat_arith, RatOp, Rational, RationalJson};
