//! Exact rational scalars.
//!
//! A thin wrapper over `BigRational` that always stays reduced with a
//! positive denominator and prints as `p` or `p/q`.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Rational(BigRational);

impl Rational {
    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn from_int(n: i64) -> Self {
        Rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_bigint(n: BigInt) -> Self {
        Rational(BigRational::from_integer(n))
    }

    /// `num / den`; fails on a zero denominator.
    pub fn new(num: i64, den: i64) -> Result<Self, Error> {
        Self::from_bigints(BigInt::from(num), BigInt::from(den))
    }

    pub fn from_bigints(num: BigInt, den: BigInt) -> Result<Self, Error> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Rational(BigRational::new(num, den)))
    }

    /// Shorthand for literals in tables and tests; panics on a zero denominator.
    pub fn frac(num: i64, den: i64) -> Self {
        Self::new(num, den).expect("nonzero denominator")
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn signum(&self) -> i32 {
        match self.0.numer().sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    pub fn recip(&self) -> Result<Self, Error> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Rational(self.0.recip()))
    }

    pub fn checked_div(&self, rhs: &Rational) -> Result<Self, Error> {
        Ok(self * &rhs.recip()?)
    }

    pub fn pow(&self, exp: i32) -> Self {
        if exp < 0 {
            let r = self.recip().expect("negative power of zero");
            return r.pow(-exp);
        }
        let mut acc = Rational::one();
        for _ in 0..exp {
            acc = &acc * self;
        }
        acc
    }

    /// Exact `n`-th root when one exists in ℚ (the non-negative one for even `n`).
    pub fn nth_root(&self, n: u32) -> Option<Self> {
        assert!(n >= 1);
        if self.is_negative() && n.is_multiple_of(2) {
            return None;
        }
        let root_int = |v: &BigInt| -> Option<BigInt> {
            let r = v.abs().nth_root(n);
            if num_traits::pow(r.clone(), n as usize) == v.abs() {
                Some(if v.is_negative() { -r } else { r })
            } else {
                None
            }
        };
        let p = root_int(self.numer())?;
        let q = root_int(self.denom())?;
        Some(Rational(BigRational::new(p, q)))
    }

    pub fn sqrt(&self) -> Option<Self> {
        self.nth_root(2)
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    /// Bits needed for numerator and denominator; a rough size measure.
    pub fn height(&self) -> u64 {
        self.numer().bits() + self.denom().bits()
    }

    pub fn floor(&self) -> BigInt {
        self.0.floor().to_integer()
    }

    pub fn round(&self) -> BigInt {
        self.0.round().to_integer()
    }

    pub fn inner(&self) -> &BigRational {
        &self.0
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_int(n)
    }
}

/// `(numerator, denominator)`; panics on a zero denominator.
impl From<(i64, i64)> for Rational {
    fn from((n, d): (i64, i64)) -> Self {
        Rational::frac(n, d)
    }
}

impl From<BigRational> for Rational {
    fn from(r: BigRational) -> Self {
        Rational(r)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = Error;

    /// Accepts `p` or `p/q` with optional signs; unreduced input is normalized.
    fn from_str(s: &str) -> Result<Self, Error> {
        let bad = || Error::BadRational(s.to_string());
        let t = s.trim();
        let (num, den) = match t.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (t, "1"),
        };
        let parse = |x: &str| -> Result<BigInt, Error> {
            if x.is_empty() || x.contains(char::is_whitespace) {
                return Err(bad());
            }
            x.parse::<BigInt>().map_err(|_| bad())
        };
        let n = parse(num)?;
        let d = parse(den)?;
        if d.is_zero() {
            return Err(bad());
        }
        Ok(Rational(BigRational::new(n, d)))
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $op:tt) => {
        impl $tr<&Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational(&self.0 $op &rhs.0)
            }
        }
        impl $tr<Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(self.0 $op rhs.0)
            }
        }
        impl $tr<&Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational(self.0 $op &rhs.0)
            }
        }
        impl $tr<Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(&self.0 $op rhs.0)
            }
        }
    };
}

binop!(Add, add, +);
binop!(Sub, sub, -);
binop!(Mul, mul, *);

// Division panics on zero like the integer types do; fallible callers use
// `checked_div`.
binop!(Div, div, /);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

impl AddAssign<&Rational> for Rational {
    fn add_assign(&mut self, rhs: &Rational) {
        self.0 += &rhs.0;
    }
}

impl AddAssign for Rational {
    fn add_assign(&mut self, rhs: Rational) {
        self.0 += rhs.0;
    }
}

impl SubAssign<&Rational> for Rational {
    fn sub_assign(&mut self, rhs: &Rational) {
        self.0 -= &rhs.0;
    }
}

impl SubAssign for Rational {
    fn sub_assign(&mut self, rhs: Rational) {
        self.0 -= rhs.0;
    }
}

impl MulAssign<&Rational> for Rational {
    fn mul_assign(&mut self, rhs: &Rational) {
        self.0 *= &rhs.0;
    }
}

impl Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Rational {
        iter.fold(Rational::zero(), |a, b| a + b)
    }
}

impl<'a> Sum<&'a Rational> for Rational {
    fn sum<I: Iterator<Item = &'a Rational>>(iter: I) -> Rational {
        iter.fold(Rational::zero(), |a, b| a + b)
    }
}

/// `Rational::frac` without the noise, for tables.
pub fn q(num: i64, den: i64) -> Rational {
    Rational::frac(num, den)
}

pub fn int(n: i64) -> Rational {
    Rational::from_int(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_and_reduces() {
        assert_eq!("6/-4".parse::<Rational>().unwrap(), q(-3, 2));
        assert_eq!("-6/4".parse::<Rational>().unwrap().to_string(), "-3/2");
        assert_eq!("+7".parse::<Rational>().unwrap().to_string(), "7");
        assert_eq!("0/5".parse::<Rational>().unwrap().to_string(), "0");
        assert_eq!("10/5".parse::<Rational>().unwrap().to_string(), "2");
    }

    #[test]
    fn rejects_garbage() {
        for s in ["", "1/0", "a", "1/2/3", "1.5", "/3", "3/", "1 2"] {
            assert!(s.parse::<Rational>().is_err(), "{s:?} parsed");
        }
    }

    #[test]
    fn division_by_zero_is_an_error() {
        assert!(matches!(int(3).checked_div(&int(0)), Err(Error::DivisionByZero)));
        assert!(Rational::new(1, 0).is_err());
    }

    #[test]
    fn roots() {
        assert_eq!(q(16, 81).nth_root(4), Some(q(2, 3)));
        assert_eq!(q(1, 2).nth_root(4), None);
        assert_eq!(q(4, 1).nth_root(4), None);
        assert_eq!(q(-8, 27).nth_root(3), Some(q(-2, 3)));
        assert_eq!(q(-4, 1).sqrt(), None);
        assert_eq!(int(0).sqrt(), Some(int(0)));
    }

    #[test]
    fn big_values_stay_exact() {
        let x = q(3, 7).pow(80);
        let y = q(7, 3).pow(80);
        assert!((x * y).is_one());
    }

    fn small() -> impl Strategy<Value = Rational> {
        (-1000i64..1000, 1i64..500).prop_map(|(n, d)| q(n, d))
    }

    proptest! {
        #[test]
        fn display_parse_round_trip(a in small()) {
            let s = a.to_string();
            prop_assert_eq!(s.parse::<Rational>().unwrap(), a.clone());
            // canonical: reduced with positive denominator
            if let Some((_, d)) = s.split_once('/') {
                prop_assert!(!d.starts_with('-'));
                prop_assert!(d != "1");
            }
        }

        #[test]
        fn field_laws(a in small(), b in small(), c in small()) {
            prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
            prop_assert_eq!(&(&a - &b) + &b, a.clone());
            if !b.is_zero() {
                prop_assert_eq!(&(&a / &b) * &b, a.clone());
            }
        }
    }
}
