//! Dense univariate polynomials in the spectral parameter.

use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::scalar::{Field, Ring};

/// Polynomial `c_0 + c_1 z + ... + c_d z^d`; trailing zeros are always trimmed,
/// so the zero polynomial has no coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly<R> {
    coeffs: Vec<R>,
}

impl<R: Ring> Poly<R> {
    pub fn new(mut coeffs: Vec<R>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn constant(c: R) -> Self {
        Self::new(vec![c])
    }

    /// `c0 + c1 z`.
    pub fn linear(c0: R, c1: R) -> Self {
        Self::new(vec![c0, c1])
    }

    pub fn coeffs(&self) -> &[R] {
        &self.coeffs
    }

    /// Coefficient of `z^d` (zero beyond the degree).
    pub fn coeff(&self, d: usize) -> R {
        self.coeffs.get(d).cloned().unwrap_or_else(R::zero)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Horner evaluation.
    pub fn eval(&self, z: &R) -> R {
        self.coeffs
            .iter()
            .rev()
            .fold(R::zero(), |acc, c| acc * z.clone() + c.clone())
    }

    /// Value of `d/dz` at `z = 0`, i.e. the linear coefficient.
    pub fn derivative_at_zero(&self) -> R {
        self.coeff(1)
    }

    pub fn scale(&self, c: &R) -> Self {
        Self::new(self.coeffs.iter().map(|a| a.clone() * c.clone()).collect())
    }
}

impl<F: Field> Poly<F> {
    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(d, c)| c.clone() * F::from_i64(d as i64))
                .collect(),
        )
    }

    /// `p(c z)` as a polynomial in `z`.
    pub fn compose_scale(&self, c: &F) -> Self {
        let mut power = F::one();
        let mut out = Vec::with_capacity(self.coeffs.len());
        for a in &self.coeffs {
            out.push(a.clone() * power.clone());
            power = power * c.clone();
        }
        Self::new(out)
    }
}

/// Value of `p` at `z0`.
pub fn poly_eval<F: Field>(p: &Poly<F>, z0: &F) -> F {
    p.eval(z0)
}

/// Linear coefficient of `p`, the derivative at the origin.
pub fn poly_derivative_at_zero<F: Field>(p: &Poly<F>) -> F {
    p.derivative_at_zero()
}

impl<R: Ring> Zero for Poly<R> {
    fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl<R: Ring> One for Poly<R> {
    fn one() -> Self {
        Self::constant(R::one())
    }
}

impl<R: Ring> Add for Poly<R> {
    type Output = Self;

    fn add(self, rhs: Self) -> Self {
        let (mut long, short) = if self.coeffs.len() >= rhs.coeffs.len() {
            (self.coeffs, rhs.coeffs)
        } else {
            (rhs.coeffs, self.coeffs)
        };
        for (a, b) in long.iter_mut().zip(short) {
            *a = a.clone() + b;
        }
        Self::new(long)
    }
}

impl<R: Ring> Neg for Poly<R> {
    type Output = Self;

    fn neg(self) -> Self {
        Self {
            coeffs: self.coeffs.into_iter().map(|c| -c).collect(),
        }
    }
}

impl<R: Ring> Sub for Poly<R> {
    type Output = Self;

    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<R: Ring> Mul for Poly<R> {
    type Output = Self;

    fn mul(self, rhs: Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero();
        }
        let mut out = vec![R::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Self::new(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, Rational};
    use proptest::prelude::*;

    fn p(cs: &[(i64, i64)]) -> Poly<Rational> {
        Poly::new(cs.iter().map(|&(a, b)| rat(a, b)).collect())
    }

    #[test]
    fn evaluation_examples() {
        // 1 - t z with t = 1/2 vanishes at z = 2
        let one_minus_tz = p(&[(1, 1), (-1, 2)]);
        assert_eq!(poly_eval(&one_minus_tz, &rat(2, 1)), rat(0, 1));
        // (1 - z)(1 - z/3) at 0
        let prod = p(&[(1, 1), (-1, 1)]) * p(&[(1, 1), (-1, 3)]);
        assert_eq!(poly_eval(&prod, &rat(0, 1)), rat(1, 1));
        // Horner by hand: 2/3 - 1/2 + 5/4
        let q = p(&[(2, 3), (-1, 1), (5, 1)]);
        assert_eq!(poly_eval(&q, &rat(1, 2)), rat(17, 12));
    }

    #[test]
    fn derivative_at_zero_examples() {
        let t = rat(2, 7);
        let lin = Poly::linear(rat(1, 1), -t.clone());
        assert_eq!(poly_derivative_at_zero(&lin), -t);
        let (x1, x2) = (rat(3, 1), rat(5, 4));
        let prod = Poly::linear(rat(1, 1), -x1.inv()) * Poly::linear(rat(1, 1), -x2.inv());
        assert_eq!(poly_derivative_at_zero(&prod), -(x1.inv() + x2.inv()));
        assert_eq!(poly_derivative_at_zero(&p(&[(7, 1)])), rat(0, 1));
    }

    #[test]
    fn trimming_and_degree() {
        assert!(p(&[(0, 1), (0, 1)]).is_zero());
        assert_eq!(p(&[(1, 1), (2, 1), (0, 1)]).degree(), Some(1));
        assert_eq!(Poly::<Rational>::zero().degree(), None);
        let a = p(&[(1, 1), (1, 1)]);
        assert!((a.clone() - a).is_zero());
    }

    #[test]
    fn derivative_and_scaling() {
        let q = p(&[(1, 1), (2, 1), (3, 1)]);
        assert_eq!(q.derivative(), p(&[(2, 1), (6, 1)]));
        assert_eq!(q.compose_scale(&rat(2, 1)), p(&[(1, 1), (4, 1), (12, 1)]));
    }

    fn small_poly() -> impl Strategy<Value = Poly<Rational>> {
        prop::collection::vec((-9i64..10, 1i64..6), 0..5)
            .prop_map(|cs| Poly::new(cs.into_iter().map(|(a, b)| rat(a, b)).collect()))
    }

    proptest! {
        // A polynomial of degree d is pinned down by its values at d+1 distinct points.
        #[test]
        fn interpolation_determines_polynomial(a in small_poly(), b in small_poly()) {
            let d = a.degree().unwrap_or(0).max(b.degree().unwrap_or(0));
            let agree = (0..=d as i64).all(|i| a.eval(&rat(i, 1)) == b.eval(&rat(i, 1)));
            prop_assert_eq!(agree, a == b);
        }

        #[test]
        fn evaluation_is_a_ring_homomorphism(a in small_poly(), b in small_poly(), z in (-5i64..6, 1i64..4)) {
            let z = rat(z.0, z.1);
            prop_assert_eq!((a.clone() * b.clone()).eval(&z), a.eval(&z) * b.eval(&z));
            prop_assert_eq!((a.clone() + b.clone()).eval(&z), a.eval(&z) + b.eval(&z));
        }
    }
}
