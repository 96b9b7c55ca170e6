//! Sums of independent uniform `[0, 1]` variables (Irwin–Hall) and their
//! masses on the shifted unit intervals `1/p + [k−1, k]`.

use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::eulerian::eulerian_number;
use crate::exactmath::rational::{binomial, factorial, int, serde_rational, Rational};
use crate::scalar::{from_i64, pow, Scalar};

/// `Pr(S_n ≤ x) = (1/n!) Σ_{k ≤ x} (−1)^k C(n, k) (x − k)^n`, clamped to
/// 0 below the support and 1 above it.
pub fn irwin_hall_cdf<T: Scalar + PartialOrd>(n: usize, x: &T) -> T {
    if *x <= T::zero() {
        return T::zero();
    }
    if *x >= from_i64::<T>(n as i64) {
        return T::one();
    }
    let mut acc = T::zero();
    let mut k = 0i64;
    while from_i64::<T>(k) < *x {
        let c = from_i64::<T>(i64::try_from(binomial(n as u64, k as u64)).expect("binomial fits in i64"));
        let term = c * pow(&(x.clone() - from_i64::<T>(k)), n);
        acc = if k % 2 == 0 { acc + term } else { acc - term };
        k += 1;
    }
    let nf = from_i64::<T>(i64::try_from(factorial(n as u64)).expect("n! fits in i64"));
    acc / nf
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntervalQuery {
    pub n: usize,
    #[serde(with = "serde_rational")]
    pub p: Rational,
    pub k: i64,
}

impl IntervalQuery {
    pub fn new(n: usize, p: Rational, k: i64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("need at least one summand".into()));
        }
        if p < Rational::one() {
            return Err(Error::InvalidArgument(format!("p must be at least 1, got {p}")));
        }
        Ok(IntervalQuery { n, p, k })
    }
}

/// `Pr(S_n ∈ 1/p + [k−1, k])`, exactly.
pub fn interval_prob(q: &IntervalQuery) -> Rational {
    let left = Rational::one() / &q.p + int(q.k - 1);
    let right = &left + int(1);
    irwin_hall_cdf(q.n, &right) - irwin_hall_cdf(q.n, &left)
}

/// Masses for `k = 0..=n`, which together cover the support.
pub fn interval_probs(n: usize, p: &Rational) -> Result<Vec<Rational>> {
    (0..=n as i64)
        .map(|k| Ok(interval_prob(&IntervalQuery::new(n, p.clone(), k)?)))
        .collect()
}

/// `E_p(n, k) / (pⁿ n!)`, the Eulerian side of the interval identity.
pub fn eulerian_interval_prob(n: usize, p: &Rational, k: i64) -> Rational {
    eulerian_number(n, p, k) / (pow(p, n) * Rational::from_integer(factorial(n as u64)))
}

/// Floating-point interval mass for arbitrary real `p ≥ 1`. Not exact.
pub fn interval_prob_f64(n: usize, p: f64, k: i64) -> f64 {
    let left = 1.0 / p + (k - 1) as f64;
    irwin_hall_cdf(n, &(left + 1.0)) - irwin_hall_cdf(n, &left)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eulerian::v_closed;
    use crate::exactmath::rational::rat;
    use proptest::prelude::*;

    fn q(n: usize, p: Rational, k: i64) -> Rational {
        interval_prob(&IntervalQuery::new(n, p, k).unwrap())
    }

    #[test]
    fn cdf_examples() {
        assert_eq!(irwin_hall_cdf(1, &rat(1, 2)), rat(1, 2));
        assert_eq!(irwin_hall_cdf(3, &int(3)), int(1));
        assert_eq!(irwin_hall_cdf(2, &int(1)), rat(1, 2));
        assert_eq!(irwin_hall_cdf(2, &int(-4)), int(0));
        assert_eq!(irwin_hall_cdf(2, &int(9)), int(1));
    }

    #[test]
    fn interval_examples() {
        assert_eq!(q(3, int(1), 1), rat(4, 6));
        assert_eq!(q(3, int(2), 3), rat(1, 48));
        assert_eq!(q(3, rat(5, 3), 1), rat(404, 750));
    }

    #[test]
    fn query_validation() {
        assert!(IntervalQuery::new(0, int(2), 0).is_err());
        assert!(IntervalQuery::new(3, rat(1, 2), 0).is_err());
    }

    #[test]
    fn matches_eulerian_numbers_on_grid() {
        for p in [int(1), int(2), int(3), rat(5, 3), rat(9, 5)] {
            for n in 1..=8 {
                let probs = interval_probs(n, &p).unwrap();
                for (k, x) in probs.iter().enumerate() {
                    assert_eq!(*x, eulerian_interval_prob(n, &p, k as i64), "p={p} n={n} k={k}");
                }
                assert_eq!(probs.iter().fold(int(0), |a, b| a + b), int(1));
            }
        }
    }

    #[test]
    fn float_path_tracks_closed_form_at_irrational_p() {
        let p = std::f64::consts::PI;
        for k in 0..=4 {
            let lhs = interval_prob_f64(4, p, k);
            let rhs = v_closed(4, &p, 0, k).unwrap() / (p.powi(4) * 24.0);
            assert!((lhs - rhs).abs() < 1e-10, "k={k}: {lhs} vs {rhs}");
        }
    }

    proptest! {
        #[test]
        fn cdf_is_monotone(n in 1usize..7, a in -20i64..80, b in -20i64..80, den in 1i64..11) {
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            prop_assert!(irwin_hall_cdf(n, &rat(lo, den)) <= irwin_hall_cdf(n, &rat(hi, den)));
        }
    }
}
