//! The vertex weights `S^{k,1}(z)` acting on `V^k ⊗ V^1`, built three
//! independent ways, and the symmetric counterpart acting on `V_k ⊗ V_1`.
//!
//! Element convention: `S(z)^{a, e_b}_{i, e_j}` has horizontal (carrier) input
//! `i`, output `a`, vertical input `j` and output `b`. Matrices are laid out
//! with rows `(a, b)` and columns `(i, j)`, arrays in the order produced by
//! [`enumerate_hardcore`] and `b`, `j` innermost.

pub mod closed;
pub mod fused;
pub mod threed;

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::combinatorics::{enumerate_compositions, enumerate_hardcore, MultiplicityArray};
use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::scalar::{pow, Field};
use crate::sparse::SparseMatrix;

pub use closed::{closed_weight, s_k1_closed, s_k1_closed_matrix, sym_s_element, sym_s_matrix, sym_weight};
pub use fused::{s_k1_fused, s_k1_fused_element};
pub use threed::{l_trace, s_k1_3d, s_k1_3d_element, FockTrace, LOperatorEntry};

/// A vertex weight `c0 + c1 z`; every `S^{k,1}` element has this shape.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearWeight<F> {
    pub c0: F,
    pub c1: F,
}

impl<F: Field> LinearWeight<F> {
    pub fn zero() -> Self {
        Self {
            c0: F::zero(),
            c1: F::zero(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.c0.is_zero() && self.c1.is_zero()
    }

    pub fn eval(&self, z: &F) -> F {
        self.c0.clone() + self.c1.clone() * z.clone()
    }

    pub fn to_poly(&self) -> Poly<F> {
        Poly::linear(self.c0.clone(), self.c1.clone())
    }
}

/// `S^{1,1}(z)^{a,b}_{i,j}` for letters in `0..=n`.
pub fn s11_element<F: Field>(t: &F, z: &F, a: usize, b: usize, i: usize, j: usize) -> F {
    s11_weight(t, a, b, i, j).eval(z)
}

pub fn s11_weight<F: Field>(t: &F, a: usize, b: usize, i: usize, j: usize) -> LinearWeight<F> {
    let one = F::one();
    if a == i && b == j {
        if i == j {
            return LinearWeight {
                c0: one,
                c1: -t.clone(),
            };
        }
        let s = if i > j { t.clone() } else { one };
        return LinearWeight {
            c0: s.clone(),
            c1: -s,
        };
    }
    if a == j && b == i {
        let w = one - t.clone();
        return if i < j {
            LinearWeight {
                c0: F::zero(),
                c1: w,
            }
        } else {
            LinearWeight { c0: w, c1: F::zero() }
        };
    }
    LinearWeight::zero()
}

/// One matrix element request.
#[derive(Clone, Debug)]
pub struct RMatrixElementQuery<F> {
    pub n: usize,
    pub k: usize,
    pub a: MultiplicityArray,
    pub b: usize,
    pub i: MultiplicityArray,
    pub j: usize,
    pub t: F,
    pub z: F,
}

impl<F: Field> RMatrixElementQuery<F> {
    pub fn validate(&self) -> Result<()> {
        if self.k > self.n + 1 {
            return Err(Error::LevelOutOfRange { n: self.n, k: self.k });
        }
        for arr in [&self.a, &self.i] {
            if arr.n() != self.n || arr.level() as usize != self.k {
                return Err(Error::Malformed(format!("array {arr} is not in level {} of n={}", self.k, self.n)));
            }
        }
        if self.b > self.n || self.j > self.n {
            return Err(Error::Malformed(format!("letters b={}, j={} exceed n={}", self.b, self.j, self.n)));
        }
        Ok(())
    }
}

/// Row/column labelling of `V^k ⊗ V^1` (or `V_k ⊗ V_1`).
#[derive(Clone, Debug)]
pub struct RIndex {
    pub n: usize,
    pub k: usize,
    arrays: Vec<MultiplicityArray>,
    lookup: HashMap<MultiplicityArray, usize>,
}

impl RIndex {
    pub fn hardcore(n: usize, k: usize) -> Result<Self> {
        Ok(Self::from_arrays(n, k, enumerate_hardcore(n, k)?))
    }

    pub fn symmetric(n: usize, k: usize) -> Self {
        Self::from_arrays(n, k, enumerate_compositions(n, k))
    }

    fn from_arrays(n: usize, k: usize, arrays: Vec<MultiplicityArray>) -> Self {
        let lookup = arrays.iter().cloned().enumerate().map(|(p, a)| (a, p)).collect();
        Self { n, k, arrays, lookup }
    }

    pub fn arrays(&self) -> &[MultiplicityArray] {
        &self.arrays
    }

    pub fn dim(&self) -> usize {
        self.arrays.len() * (self.n + 1)
    }

    pub fn index(&self, a: &MultiplicityArray, b: usize) -> Option<usize> {
        self.lookup.get(a).map(|p| p * (self.n + 1) + b)
    }

    pub fn label(&self, idx: usize) -> (&MultiplicityArray, usize) {
        (&self.arrays[idx / (self.n + 1)], idx % (self.n + 1))
    }

    /// Every pair of labels `((a, b), (i, j))` obeying `a + e_b = i + e_j`.
    pub fn conserving_pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (ci, i) in self.arrays.iter().enumerate() {
            for j in 0..=self.n {
                for b in 0..=self.n {
                    if let Some(a) = i.shifted(j, b) {
                        if let Some(&ra) = self.lookup.get(&a) {
                            out.push((ra * (self.n + 1) + b, ci * (self.n + 1) + j));
                        }
                    }
                }
            }
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Construction {
    Closed,
    Fused,
    #[serde(rename = "threed")]
    ThreeD,
}

impl std::str::FromStr for Construction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "closed" => Ok(Self::Closed),
            "fused" => Ok(Self::Fused),
            "threed" | "3d" => Ok(Self::ThreeD),
            other => Err(Error::Malformed(format!("unknown construction {other:?}"))),
        }
    }
}

/// `S^{k,1}(z)` as a sparse matrix via the chosen construction.
pub fn s_k1_matrix<F: Field>(construction: Construction, n: usize, k: usize, t: &F, z: &F) -> Result<SparseMatrix<F>> {
    match construction {
        Construction::Closed => s_k1_closed_matrix(n, k, t, z),
        Construction::Fused => s_k1_fused(n, k, t, z),
        Construction::ThreeD => s_k1_3d(n, k, t, z),
    }
}

/// The exponent `a_lo + ... + a_n`.
pub(crate) fn tail_sum(a: &MultiplicityArray, lo: usize) -> u32 {
    a.range_sum(lo, a.n() as isize)
}

/// `t^{tail_sum}` helper shared by the closed forms.
pub(crate) fn t_tail<F: Field>(t: &F, a: &MultiplicityArray, lo: usize) -> F {
    pow(t, tail_sum(a, lo))
}

/// Column sums `Σ_{a,b} S^{a,b}_{i,j}` for each column `(i, j)`.
pub fn column_sums<F: Field>(m: &SparseMatrix<F>) -> Vec<F> {
    m.column_sums()
}

/// Embeds `S_{12}`, `S_{13}` or `S_{23}` into `End(V^k ⊗ V^1 ⊗ V^1)`.
/// `r` acts on (`V^k ⊗ V^1`) for the first two and on `V^1 ⊗ V^1` for the last.
pub fn embed_three<F: Field>(r: &SparseMatrix<F>, first: usize, second: usize, dk: usize, d1: usize) -> SparseMatrix<F> {
    let dims = [dk, d1, d1];
    let dim = dk * d1 * d1;
    let (da, db) = (dims[first], dims[second]);
    debug_assert_eq!(r.nrows(), da * db);
    let other = 3 - first - second;
    let split = |idx: usize| [idx / (d1 * d1), (idx / d1) % d1, idx % d1];
    let join = |c: [usize; 3]| (c[0] * d1 + c[1]) * d1 + c[2];
    let mut out = SparseMatrix::zeros(dim, dim);
    for col in 0..dim {
        let cc = split(col);
        let src = cc[first] * db + cc[second];
        for (&row, v) in r.column(src).iter() {
            let mut rc = [0; 3];
            rc[first] = row / db;
            rc[second] = row % db;
            rc[other] = cc[other];
            out.set(join(rc), col, v.clone());
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, Rational};

    #[test]
    fn s11_examples() {
        let t = rat(1, 2);
        let z = rat(1, 3);
        assert_eq!(s11_element(&t, &z, 1, 1, 1, 1), rat(5, 6));
        // (i,j,a,b) = (2,0,2,0): (1 - z) t
        assert_eq!(s11_element(&t, &z, 2, 0, 2, 0), (rat(1, 1) - &z) * &t);
        assert_eq!(s11_element(&t, &z, 0, 2, 0, 2), rat(2, 3));
        assert_eq!(s11_element(&t, &z, 2, 0, 0, 2), rat(1, 6));
        assert_eq!(s11_element(&t, &z, 0, 2, 2, 0), rat(1, 2));
        assert_eq!(s11_element(&t, &z, 1, 1, 0, 2), rat(0, 1));
    }

    #[test]
    fn s11_at_one_is_scaled_transposition() {
        let t = rat(2, 7);
        let one = rat(1, 1);
        for n in 0..3 {
            for (a, b, i, j) in itertools(n) {
                let expect = if a == j && b == i { one.clone() - &t } else { rat(0, 1) };
                assert_eq!(s11_element(&t, &one, a, b, i, j), expect);
            }
        }
    }

    #[test]
    fn s11_columns_are_stochastic() {
        let t = rat(3, 5);
        let z = rat(-2, 9);
        let n = 3;
        for i in 0..=n {
            for j in 0..=n {
                let mut s = Rational::from_i64(0);
                for a in 0..=n {
                    for b in 0..=n {
                        s += s11_element(&t, &z, a, b, i, j);
                    }
                }
                assert_eq!(s, rat(1, 1) - &t * &z);
            }
        }
    }

    fn itertools(n: usize) -> Vec<(usize, usize, usize, usize)> {
        let mut v = Vec::new();
        for a in 0..=n {
            for b in 0..=n {
                for i in 0..=n {
                    for j in 0..=n {
                        v.push((a, b, i, j));
                    }
                }
            }
        }
        v
    }

    #[test]
    fn index_round_trip() {
        let idx = RIndex::hardcore(2, 2).unwrap();
        assert_eq!(idx.dim(), 9);
        for p in 0..idx.dim() {
            let (a, b) = idx.label(p);
            assert_eq!(idx.index(a, b), Some(p));
        }
        // j inside i forces b = j; j outside i leaves three choices of b
        let pairs = idx.conserving_pairs();
        assert_eq!(pairs.len(), 3 * 2 + 3 * 3);
    }

    #[test]
    fn embedding_of_identity_is_identity() {
        let id = SparseMatrix::<Rational>::identity(6);
        for (f, s) in [(0, 1), (0, 2)] {
            assert_eq!(embed_three(&id, f, s, 3, 2), SparseMatrix::identity(12));
        }
        let id2 = SparseMatrix::<Rational>::identity(4);
        assert_eq!(embed_three(&id2, 1, 2, 3, 2), SparseMatrix::identity(12));
    }
}
