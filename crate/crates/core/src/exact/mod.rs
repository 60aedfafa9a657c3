//! Exact arithmetic: big rationals, dense and sparse linear algebra, integer
//! lattices, and multivariate polynomials.

mod lattice;
mod matrix;
mod poly;
mod span;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use lattice::{hermite_rows, integer_kernel};
pub use matrix::{RatMatrix, Rref};
pub use poly::{Monomial, MultiPoly};
pub use span::{EchelonSpan, SparseVec};

/// Arbitrary-precision rational, always stored in lowest terms with a positive
/// denominator.
pub type Rational = num_rational::BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExactError {
    #[error("no image given for variable `{0}`")]
    MissingImage(String),
    #[error("image of `{variable}` has {found} coefficients, expected {expected}")]
    ImageLength {
        variable: String,
        expected: usize,
        found: usize,
    },
    #[error("invalid rational: {0}")]
    BadRational(String),
}

pub fn rat(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Scales a rational vector to the unique primitive integer vector with the
/// same direction (entries coprime, sign preserved).
pub fn primitive_integer_vector(v: &[Rational]) -> Vec<BigInt> {
    let lcm = v
        .iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * &lcm).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return ints;
    }
    ints.into_iter().map(|x| x / &g).collect()
}

/// JSON form of a rational: decimal strings so that no precision is lost.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct RationalRepr {
    pub num: String,
    pub den: String,
}

impl From<&Rational> for RationalRepr {
    fn from(r: &Rational) -> Self {
        RationalRepr {
            num: r.numer().to_string(),
            den: r.denom().to_string(),
        }
    }
}

impl TryFrom<RationalRepr> for Rational {
    type Error = ExactError;

    fn try_from(r: RationalRepr) -> Result<Self, ExactError> {
        let bad = || ExactError::BadRational(format!("{}/{}", r.num, r.den));
        let num: BigInt = r.num.parse().map_err(|_| bad())?;
        let den: BigInt = r.den.parse().map_err(|_| bad())?;
        if den.is_zero() || den.is_negative() {
            return Err(bad());
        }
        Ok(Rational::new(num, den))
    }
}

/// Serde helper writing a rational as `{"num", "den"}`.
pub fn serialize_rational<S: serde::Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
    RationalRepr::from(r).serialize(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals_are_normalized() {
        let r = ratio(6, -4);
        assert_eq!(r.numer(), &BigInt::from(-3));
        assert_eq!(r.denom(), &BigInt::from(2));
    }

    #[test]
    fn primitive_vectors() {
        let v = primitive_integer_vector(&[ratio(1, 2), ratio(3, 4), rat(0)]);
        assert_eq!(v, vec![BigInt::from(2), BigInt::from(3), BigInt::from(0)]);
        let v = primitive_integer_vector(&[rat(4), rat(6)]);
        assert_eq!(v, vec![BigInt::from(2), BigInt::from(3)]);
    }

    #[test]
    fn repr_rejects_bad_denominators() {
        let bad = RationalRepr {
            num: "1".into(),
            den: "0".into(),
        };
        assert!(Rational::try_from(bad).is_err());
        let ok = RationalRepr {
            num: "-6".into(),
            den: "4".into(),
        };
        assert_eq!(Rational::try_from(ok).unwrap(), ratio(-3, 2));
    }
}
