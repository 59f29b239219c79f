//! Scalar abstractions shared by every module.
//!
//! Everything in the crate is written against [`Ring`] (matrix entries,
//! polynomial coefficients) or [`Field`] (anything that divides). The only
//! concrete field used by the CLI is [`Rational`], an arbitrary-precision
//! rational; smaller `Ratio<i64>` instances are handy in tests.

use std::fmt::{Debug, Display};
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{FromPrimitive, One, Signed, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational number, always in lowest terms.
pub type Rational = BigRational;

/// Commutative ring with identity. Blanket-implemented.
pub trait Ring:
    Clone
    + PartialEq
    + Debug
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
}

impl<T> Ring for T where
    T: Clone
        + PartialEq
        + Debug
        + Zero
        + One
        + Add<Output = T>
        + Sub<Output = T>
        + Mul<Output = T>
        + Neg<Output = T>
{
}

/// Exact field of fractions over an integer type.
pub trait Field: Ring + Div<Output = Self> + Display {
    fn from_i64(v: i64) -> Self;

    fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_i64(num) / Self::from_i64(den)
    }

    fn is_integral(&self) -> bool;

    /// Multiply `row` by a positive common denominator so that every entry
    /// becomes integral.
    fn clear_denominators(row: &mut [Self]);

    fn inv(&self) -> Self {
        Self::one() / self.clone()
    }
}

impl<T> Field for Ratio<T>
where
    T: Integer + Clone + Signed + Debug + Display + FromPrimitive,
{
    fn from_i64(v: i64) -> Self {
        Ratio::from_integer(T::from_i64(v).expect("integer fits the scalar type"))
    }

    fn is_integral(&self) -> bool {
        self.is_integer()
    }

    fn clear_denominators(row: &mut [Self]) {
        let lcm = row
            .iter()
            .filter(|v| !v.is_zero())
            .fold(T::one(), |acc, v| acc.lcm(v.denom()));
        if lcm.is_one() {
            return;
        }
        let factor = Ratio::from_integer(lcm);
        for v in row.iter_mut() {
            *v = v.clone() * factor.clone();
        }
    }
}

/// `x^e` for a nonnegative exponent.
pub fn pow<R: Ring>(x: &R, e: u32) -> R {
    let mut base = x.clone();
    let mut e = e;
    let mut acc = R::one();
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base.clone();
        }
        e >>= 1;
        if e > 0 {
            base = base.clone() * base;
        }
    }
    acc
}

/// `x^e` for any integer exponent. Panics on `0^e` with `e < 0`.
pub fn powi<F: Field>(x: &F, e: i64) -> F {
    if e >= 0 {
        pow(x, e as u32)
    } else {
        assert!(!x.is_zero(), "negative power of zero");
        pow(&x.inv(), (-e) as u32)
    }
}

/// `(-1)^e`.
pub fn sign<R: Ring>(e: i64) -> R {
    if e.rem_euclid(2) == 0 {
        R::one()
    } else {
        -R::one()
    }
}

/// Parses `"p/q"` or `"p"` (optionally signed) into a reduced rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let trimmed = s.trim();
    let bad = || Error::MalformedRational(s.to_string());
    let (num, den) = match trimmed.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (trimmed, "1"),
    };
    let num = BigInt::from_str(num).map_err(|_| bad())?;
    let den = BigInt::from_str(den).map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(num, den))
}

/// Serializes as `"p/q"`, or `"p"` when the denominator is one.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Shorthand used throughout the tests and suites.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::from_ratio(num, den)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_strings_round_trip() {
        for s in ["0", "1", "-3", "2/3", "-7/12"] {
            assert_eq!(format_rational(&parse_rational(s).unwrap()), s);
        }
        assert_eq!(format_rational(&parse_rational("4/6").unwrap()), "2/3");
        assert_eq!(format_rational(&parse_rational("3/-6").unwrap()), "-1/2");
        assert_eq!(format_rational(&parse_rational("0/5").unwrap()), "0");
    }

    #[test]
    fn malformed_rationals_are_rejected() {
        for s in ["", "1/0", "a/2", "0.5", "1/2/3"] {
            assert!(parse_rational(s).is_err(), "{s}");
        }
    }

    #[test]
    fn integer_powers() {
        let h = rat(1, 2);
        assert_eq!(powi(&h, 3), rat(1, 8));
        assert_eq!(powi(&h, -2), rat(4, 1));
        assert_eq!(powi(&h, 0), rat(1, 1));
        assert_eq!(sign::<Rational>(-3), rat(-1, 1));
    }

    #[test]
    fn denominators_clear_to_integers() {
        let mut row = vec![rat(1, 2), rat(-2, 3), rat(0, 1), rat(5, 1)];
        Field::clear_denominators(&mut row);
        assert_eq!(row, vec![rat(3, 1), rat(-4, 1), rat(0, 1), rat(30, 1)]);
    }
}
