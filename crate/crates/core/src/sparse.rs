//! Row-major sparse matrices over any [`Ring`].
//!
//! Column convention: `m.get(target, source)` is the coefficient of the
//! basis vector `target` in `m` applied to `source`, so a Markov generator
//! has vanishing column sums.

use std::collections::BTreeMap;


use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::scalar::{Field, Ring};

#[derive(Clone, Debug, PartialEq)]
pub struct SparseMatrix<R> {
    nrows: usize,
    ncols: usize,
    rows: Vec<BTreeMap<usize, R>>,
}

impl<R: Ring> SparseMatrix<R> {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        Self {
            nrows,
            ncols,
            rows: vec![BTreeMap::new(); nrows],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::scalar(n, R::one())
    }

    pub fn scalar(n: usize, c: R) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, c.clone());
        }
        m
    }

    pub fn from_triplets(nrows: usize, ncols: usize, entries: impl IntoIterator<Item = (usize, usize, R)>) -> Self {
        let mut m = Self::zeros(nrows, ncols);
        for (r, c, v) in entries {
            m.add_to(r, c, v);
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn is_square(&self) -> bool {
        self.nrows == self.ncols
    }

    pub fn get(&self, r: usize, c: usize) -> R {
        self.rows[r].get(&c).cloned().unwrap_or_else(R::zero)
    }

    pub fn set(&mut self, r: usize, c: usize, v: R) {
        assert!(r < self.nrows && c < self.ncols, "index ({r},{c}) out of bounds");
        if v.is_zero() {
            self.rows[r].remove(&c);
        } else {
            self.rows[r].insert(c, v);
        }
    }

    pub fn add_to(&mut self, r: usize, c: usize, v: R) {
        if v.is_zero() {
            return;
        }
        let cur = self.get(r, c);
        self.set(r, c, cur + v);
    }

    pub fn row(&self, r: usize) -> &BTreeMap<usize, R> {
        &self.rows[r]
    }

    /// Stored entries in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &R)> + '_ {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(r, row)| row.iter().map(move |(&c, v)| (r, c, v)))
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(BTreeMap::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(BTreeMap::is_empty)
    }

    /// Nonzero entries of column `c`, by row.
    pub fn column(&self, c: usize) -> BTreeMap<usize, R> {
        self.rows
            .iter()
            .enumerate()
            .filter_map(|(r, row)| row.get(&c).map(|v| (r, v.clone())))
            .collect()
    }

    pub fn is_diagonal(&self) -> bool {
        self.entries().all(|(r, c, _)| r == c)
    }

    pub fn map<S: Ring>(&self, f: impl Fn(&R) -> S) -> SparseMatrix<S> {
        SparseMatrix::from_triplets(
            self.nrows,
            self.ncols,
            self.entries().map(|(r, c, v)| (r, c, f(v))),
        )
    }

    pub fn scale(&self, c: &R) -> Self {
        self.map(|v| v.clone() * c.clone())
    }

    pub fn transpose(&self) -> Self {
        SparseMatrix::from_triplets(
            self.ncols,
            self.nrows,
            self.entries().map(|(r, c, v)| (c, r, v.clone())),
        )
    }

    fn check_same_shape(&self, other: &Self) -> Result<()> {
        if self.nrows != other.nrows || self.ncols != other.ncols {
            return Err(self.mismatch(other));
        }
        Ok(())
    }

    fn mismatch(&self, other: &Self) -> Error {
        Error::DimensionMismatch {
            left_rows: self.nrows,
            left_cols: self.ncols,
            right_rows: other.nrows,
            right_cols: other.ncols,
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        let mut out = self.clone();
        for (r, c, v) in other.entries() {
            out.add_to(r, c, v.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        let mut out = self.clone();
        for (r, c, v) in other.entries() {
            out.add_to(r, c, -v.clone());
        }
        Ok(out)
    }

    /// Exact product `self * other`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.ncols != other.nrows {
            return Err(self.mismatch(other));
        }
        let mut out = Self::zeros(self.nrows, other.ncols);
        for (r, row) in self.rows.iter().enumerate() {
            let mut acc: BTreeMap<usize, R> = BTreeMap::new();
            for (&k, a) in row {
                for (&c, b) in &other.rows[k] {
                    let term = a.clone() * b.clone();
                    match acc.get_mut(&c) {
                        Some(v) => *v = v.clone() + term,
                        None => {
                            acc.insert(c, term);
                        }
                    }
                }
            }
            acc.retain(|_, v| !v.is_zero());
            out.rows[r] = acc;
        }
        Ok(out)
    }

    /// `self * v` for a dense vector.
    pub fn apply(&self, v: &[R]) -> Result<Vec<R>> {
        if v.len() != self.ncols {
            return Err(Error::DimensionMismatch {
                left_rows: self.nrows,
                left_cols: self.ncols,
                right_rows: v.len(),
                right_cols: 1,
            });
        }
        Ok(self
            .rows
            .iter()
            .map(|row| {
                row.iter()
                    .fold(R::zero(), |acc, (&c, a)| acc + a.clone() * v[c].clone())
            })
            .collect())
    }

    pub fn column_sums(&self) -> Vec<R> {
        let mut sums = vec![R::zero(); self.ncols];
        for (_, c, v) in self.entries() {
            sums[c] = sums[c].clone() + v.clone();
        }
        sums
    }

    /// First position where the two matrices differ, if any.
    pub fn first_difference(&self, other: &Self) -> Option<(usize, usize)> {
        if self.nrows != other.nrows || self.ncols != other.ncols {
            return Some((self.nrows.min(other.nrows), self.ncols.min(other.ncols)));
        }
        for r in 0..self.nrows {
            if self.rows[r] != other.rows[r] {
                let cols = self.rows[r].keys().chain(other.rows[r].keys());
                let c = cols
                    .copied()
                    .filter(|&c| self.get(r, c) != other.get(r, c))
                    .min()
                    .expect("rows differ somewhere");
                return Some((r, c));
            }
        }
        None
    }
}

/// Exact product; fails on incompatible shapes.
pub fn mat_mul<R: Ring>(a: &SparseMatrix<R>, b: &SparseMatrix<R>) -> Result<SparseMatrix<R>> {
    a.mul(b)
}

/// `AB - BA` for square matrices of equal size.
pub fn commutator<R: Ring>(a: &SparseMatrix<R>, b: &SparseMatrix<R>) -> Result<SparseMatrix<R>> {
    if !a.is_square() || !b.is_square() || a.nrows() != b.nrows() {
        return Err(a.mismatch(b));
    }
    a.mul(b)?.sub(&b.mul(a)?)
}

impl<F: Field> SparseMatrix<Poly<F>> {
    pub fn eval(&self, z: &F) -> SparseMatrix<F> {
        self.map(|p| p.eval(z))
    }

    pub fn coefficient(&self, d: usize) -> SparseMatrix<F> {
        self.map(|p| p.coeff(d))
    }

    pub fn derivative(&self) -> Self {
        self.map(|p| p.derivative())
    }
}

impl<F: Field> SparseMatrix<F> {
    /// Promotes constant entries to polynomials.
    pub fn to_poly(&self) -> SparseMatrix<Poly<F>> {
        self.map(|v| Poly::constant(v.clone()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, Rational};
    use proptest::prelude::*;

    fn dense(rows: &[&[i64]]) -> SparseMatrix<Rational> {
        let n = rows.len();
        let m = rows[0].len();
        SparseMatrix::from_triplets(
            n,
            m,
            rows.iter()
                .enumerate()
                .flat_map(|(r, row)| row.iter().enumerate().map(move |(c, &v)| (r, c, rat(v, 1)))),
        )
    }

    fn cyclic_shift(l: usize) -> SparseMatrix<Rational> {
        SparseMatrix::from_triplets(l, l, (0..l).map(|c| ((c + 1) % l, c, rat(1, 1))))
    }

    #[test]
    fn hand_multiplication() {
        let a = dense(&[&[1, 2], &[0, 1]]);
        let b = dense(&[&[1, 0], &[3, 1]]);
        assert_eq!(mat_mul(&a, &b).unwrap(), dense(&[&[7, 2], &[3, 1]]));
        assert_eq!(mat_mul(&SparseMatrix::identity(2), &b).unwrap(), b);
    }

    #[test]
    fn shift_powers_close_up() {
        let l = 5;
        let c = cyclic_shift(l);
        let mut p = SparseMatrix::identity(l);
        for _ in 0..l - 1 {
            p = mat_mul(&p, &c).unwrap();
        }
        assert_eq!(mat_mul(&c, &p).unwrap(), SparseMatrix::identity(l));
    }

    #[test]
    fn mismatched_shapes_error() {
        let a = SparseMatrix::<Rational>::zeros(2, 3);
        assert!(mat_mul(&a, &a).is_err());
        assert!(commutator(&a, &a).is_err());
        assert!(a.add(&SparseMatrix::zeros(3, 2)).is_err());
    }

    #[test]
    fn commutator_examples() {
        let a = dense(&[&[1, 2], &[3, 4]]);
        assert!(commutator(&a, &a).unwrap().is_zero());
        let d1 = dense(&[&[2, 0], &[0, 5]]);
        let d2 = dense(&[&[-1, 0], &[0, 7]]);
        assert!(commutator(&d1, &d2).unwrap().is_zero());
        assert!(!commutator(&a, &d1).unwrap().is_zero());
    }

    #[test]
    fn zero_entries_are_never_stored() {
        let mut m = SparseMatrix::<Rational>::zeros(2, 2);
        m.add_to(0, 1, rat(1, 2));
        m.add_to(0, 1, rat(-1, 2));
        assert_eq!(m.nnz(), 0);
        let a = dense(&[&[1, 1], &[1, 1]]);
        let b = dense(&[&[1, -1], &[-1, 1]]);
        assert_eq!(mat_mul(&a, &b).unwrap().nnz(), 0);
    }

    fn small_matrix(n: usize) -> impl Strategy<Value = SparseMatrix<Rational>> {
        prop::collection::vec((-3i64..4, 1i64..3), n * n).prop_map(move |vals| {
            SparseMatrix::from_triplets(
                n,
                n,
                vals.into_iter()
                    .enumerate()
                    .map(move |(i, (p, q))| (i / n, i % n, rat(p, q))),
            )
        })
    }

    proptest! {
        #[test]
        fn product_is_associative(a in small_matrix(3), b in small_matrix(3), c in small_matrix(3)) {
            let left = mat_mul(&mat_mul(&a, &b).unwrap(), &c).unwrap();
            let right = mat_mul(&a, &mat_mul(&b, &c).unwrap()).unwrap();
            prop_assert_eq!(left, right);
        }

        #[test]
        fn product_distributes(a in small_matrix(3), b in small_matrix(3), c in small_matrix(3)) {
            let left = mat_mul(&a, &b.add(&c).unwrap()).unwrap();
            let right = mat_mul(&a, &b).unwrap().add(&mat_mul(&a, &c).unwrap()).unwrap();
            prop_assert_eq!(left, right);
        }
    }
}
