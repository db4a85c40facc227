use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Exact rational scalar, always in lowest terms with positive denominator.
pub type RationalScalar = BigRational;

pub fn rat(n: i64) -> RationalScalar {
    BigRational::from_integer(BigInt::from(n))
}

/// `n/d`; panics when `d == 0`.
pub fn ratio(n: i64, d: i64) -> RationalScalar {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn is_integer(q: &RationalScalar) -> bool {
    q.denom().is_one()
}

pub fn factorial(k: usize) -> BigInt {
    (1..=k).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// `C(n, k)` for an arbitrary integer `n` (negative allowed).
pub fn binomial_bigint(n: &BigInt, k: usize) -> BigInt {
    let mut num = BigInt::one();
    for i in 0..k {
        num *= n - BigInt::from(i);
    }
    num / factorial(k)
}

/// `C(q, k)` for a rational argument.
pub fn binomial_rational(q: &RationalScalar, k: usize) -> RationalScalar {
    let mut acc = BigRational::one();
    for i in 0..k {
        acc *= q - rat(i as i64);
        acc /= rat(i as i64 + 1);
    }
    acc
}

/// Least common multiple of the denominators of `qs` (1 for an empty input).
pub fn lcm_of_denominators<'a>(qs: impl IntoIterator<Item = &'a RationalScalar>) -> BigInt {
    qs.into_iter().fold(BigInt::one(), |acc, q| {
        if q.is_zero() {
            acc
        } else {
            acc.lcm(q.denom())
        }
    })
}
