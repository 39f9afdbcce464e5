//! Exact rational scalars.

use alloc::string::String;
use core::fmt;
use core::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use core::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::Error;

/// An arbitrary precision rational number, always kept in lowest terms with a
/// positive denominator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Scalar(BigRational);

impl Scalar {
    pub fn zero() -> Self {
        Scalar(BigRational::zero())
    }

    pub fn one() -> Self {
        Scalar(BigRational::one())
    }

    pub fn from_int(n: i64) -> Self {
        Scalar(BigRational::from_integer(BigInt::from(n)))
    }

    /// `num/den`; panics if `den == 0`.
    pub fn ratio(num: i64, den: i64) -> Self {
        Scalar(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    /// `(-1)^exponent` for any integer exponent.
    pub fn sign(exponent: i64) -> Self {
        if exponent.rem_euclid(2) == 0 {
            Scalar::one()
        } else {
            -Scalar::one()
        }
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn recip(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(Scalar(self.0.recip()))
        }
    }

    pub fn abs(&self) -> Self {
        Scalar(self.0.abs())
    }

    pub fn as_rational(&self) -> &BigRational {
        &self.0
    }

    /// Multiplies by `(-1)^exponent` in place.
    pub fn apply_sign(&mut self, exponent: i64) {
        if exponent.rem_euclid(2) == 1 {
            self.0 = -core::mem::take(&mut self.0);
        }
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

impl From<BigRational> for Scalar {
    fn from(r: BigRational) -> Self {
        Scalar(r)
    }
}

impl FromStr for Scalar {
    type Err = Error;

    /// Parses `"p"` or `"p/q"` with optional surrounding whitespace.
    fn from_str(s: &str) -> Result<Self, Error> {
        let bad = || Error::Parse(alloc::format!("malformed rational literal {s:?}"));
        let s = s.trim();
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let n = BigInt::from_str(n).map_err(|_| bad())?;
        let d = BigInt::from_str(d).map_err(|_| bad())?;
        if d.is_zero() {
            return Err(Error::Parse(alloc::format!("zero denominator in {s:?}")));
        }
        Ok(Scalar(BigRational::new(n, d)))
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Scalar {
    pub fn to_literal(&self) -> String {
        alloc::format!("{self}")
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $atr:ident, $am:ident) => {
        impl $tr for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                Scalar(self.0.$m(rhs.0))
            }
        }
        impl<'a> $tr<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &'a Scalar) -> Scalar {
                Scalar(self.0.$m(&rhs.0))
            }
        }
        impl<'a, 'b> $tr<&'b Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &'b Scalar) -> Scalar {
                Scalar((&self.0).$m(&rhs.0))
            }
        }
        impl $atr for Scalar {
            fn $am(&mut self, rhs: Scalar) {
                self.0.$am(rhs.0)
            }
        }
        impl<'a> $atr<&'a Scalar> for Scalar {
            fn $am(&mut self, rhs: &'a Scalar) {
                self.0.$am(&rhs.0)
            }
        }
    };
}

binop!(Add, add, AddAssign, add_assign);
binop!(Sub, sub, SubAssign, sub_assign);
binop!(Mul, mul, MulAssign, mul_assign);

impl Div for Scalar {
    type Output = Scalar;
    fn div(self, rhs: Scalar) -> Scalar {
        Scalar(self.0 / rhs.0)
    }
}

impl<'b> Div<&'b Scalar> for &Scalar {
    type Output = Scalar;
    fn div(self, rhs: &'b Scalar) -> Scalar {
        Scalar(&self.0 / &rhs.0)
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar(-self.0)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar(-&self.0)
    }
}

impl core::iter::Sum for Scalar {
    fn sum<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::zero(), |a, b| a + b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_reduces() {
        let x: Scalar = "2/4".parse().unwrap();
        assert_eq!(x, Scalar::ratio(1, 2));
        assert_eq!(x.to_literal(), "1/2");
        let y: Scalar = "-6/3".parse().unwrap();
        assert_eq!(y.to_literal(), "-2");
        let z: Scalar = "3/-9".parse().unwrap();
        assert_eq!(z.to_literal(), "-1/3");
    }

    #[test]
    fn rejects_zero_denominator_and_garbage() {
        assert!("1/0".parse::<Scalar>().is_err());
        assert!("x".parse::<Scalar>().is_err());
        assert!("1/2/3".parse::<Scalar>().is_err());
    }

    #[test]
    fn zero_is_zero_over_one() {
        let z = Scalar::ratio(0, 7);
        assert!(z.is_zero());
        assert_eq!(z.denom(), &BigInt::from(1));
    }

    #[test]
    fn sign_helper() {
        assert_eq!(Scalar::sign(0), Scalar::one());
        assert_eq!(Scalar::sign(-3), -Scalar::one());
        assert_eq!(Scalar::sign(4), Scalar::one());
    }
}
